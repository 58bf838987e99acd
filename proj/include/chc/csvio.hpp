#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace chc {

// Comma-separated diagnostics table. Layout: "# key = value" metadata lines,
// one header row naming the columns, then one %.17g-formatted row per
// record. Metadata lines may also follow the data (used for values only
// known at the end of a run); the reader accepts them anywhere.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value);
  void row(const std::vector<double>& values);
  void close();

 private:
  std::vector<std::string> cols_;
  std::ofstream out_;
  bool header_written_ = false;

  void write_header();
};

struct CsvTable {
  std::map<std::string, std::string> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  double meta_num(const std::string& key) const;  // throws ConfigError
  int column(const std::string& name) const;      // throws ConfigError
};

CsvTable read_csv(const std::string& path);

// %.17g, a format that round-trips doubles exactly.
std::string format_g17(double v);

}  // namespace chc
