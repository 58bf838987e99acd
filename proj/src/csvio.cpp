#include "chc/csvio.hpp"

#include <cstdio>
#include <sstream>

#include "chc/errors.hpp"

namespace chc {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : cols_(columns), out_(path, std::ios::trunc) {
  if (!out_) throw IoError("csv: cannot open '" + path + "' for write");
}

void CsvWriter::meta(const std::string& key, const std::string& value) {
  out_ << "# " << key << " = " << value << "\n";
}

void CsvWriter::meta(const std::string& key, double value) {
  meta(key, format_g17(value));
}

void CsvWriter::write_header() {
  for (std::size_t i = 0; i < cols_.size(); ++i) {
    if (i) out_ << ',';
    out_ << cols_[i];
  }
  out_ << "\n";
  header_written_ = true;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (!header_written_) write_header();
  if (values.size() != cols_.size()) {
    throw ConfigError("csv: row width does not match the declared columns");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_g17(values[i]);
  }
  out_ << "\n";
}

void CsvWriter::close() {
  if (!header_written_) write_header();
  out_.close();
  if (out_.fail()) throw IoError("csv: flushing the output file failed");
}

double CsvTable::meta_num(const std::string& key) const {
  auto it = metadata.find(key);
  if (it == metadata.end()) {
    throw ConfigError("csv: missing metadata key '" + key + "'");
  }
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ConfigError("csv: metadata key '" + key + "' is not numeric");
  }
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return int(i);
  }
  throw ConfigError("csv: missing column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("csv: cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::size_t eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        std::string val = line.substr(eq + 1);
        const auto strip = [](std::string& s) {
          while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
            s.erase(s.begin());
          }
          while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                                s.back() == '\r')) {
            s.pop_back();
          }
        };
        strip(key);
        strip(val);
        t.metadata[key] = val;
      }
      continue;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (t.columns.empty()) {
      t.columns = std::move(cells);
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw ConfigError("csv: row at line " + std::to_string(lineno) +
                        " has wrong width");
    }
    std::vector<double> vals;
    vals.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        vals.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw ConfigError("csv: non-numeric cell at line " +
                          std::to_string(lineno));
      }
    }
    t.rows.push_back(std::move(vals));
  }
  if (t.columns.empty()) {
    throw ConfigError("csv: '" + path + "' has no header row");
  }
  return t;
}

}  // namespace chc
