#include "chc/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "chc/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot io assumes a little-endian host");

namespace chc {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

constexpr char kMagic[4] = {'C', 'H', 'C', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_array(std::ofstream& out, const std::vector<double>& a) {
  out.write(reinterpret_cast<const char*>(a.data()),
            std::streamsize(a.size() * sizeof(double)));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

void get_array(std::ifstream& in, std::vector<double>& a) {
  in.read(reinterpret_cast<char*>(a.data()),
          std::streamsize(a.size() * sizeof(double)));
}

}  // namespace

void write_snapshot(const std::string& path, const SystemState& s,
                    std::uint64_t digest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("snapshot: cannot open '" + path + "' for write");
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, std::uint32_t(s.theta.grid.nx));
  put<std::uint32_t>(out, std::uint32_t(s.theta.grid.ny));
  put<double>(out, s.theta.grid.Lx);
  put<double>(out, s.theta.grid.Ly);
  put<double>(out, s.t);
  put<double>(out, s.mean_chi);
  put<double>(out, s.mean_v);
  put<std::uint64_t>(out, digest);
  put_array(out, s.theta.a);
  put_array(out, s.q.x.a);
  put_array(out, s.q.y.a);
  put_array(out, s.chi.a);
  put_array(out, s.xi.bottom);
  put_array(out, s.xi.top);
  put_array(out, s.v.a);
  if (!out) throw IoError("snapshot: write to '" + path + "' failed");
}

SystemState read_snapshot(const std::string& path, std::uint64_t* digest) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("snapshot: cannot open '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw ConfigError("snapshot: '" + path + "' is not a snapshot file");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) {
    throw ConfigError("snapshot: unsupported version in '" + path + "'");
  }
  GridSpec g;
  g.nx = int(get<std::uint32_t>(in));
  g.ny = int(get<std::uint32_t>(in));
  g.Lx = get<double>(in);
  g.Ly = get<double>(in);
  if (!in || g.nx <= 0 || g.ny <= 0 || g.nx > 100000 || g.ny > 100000) {
    throw ConfigError("snapshot: corrupt header in '" + path + "'");
  }
  g.validate();
  SystemState s(g);
  s.t = get<double>(in);
  s.mean_chi = get<double>(in);
  s.mean_v = get<double>(in);
  const auto d = get<std::uint64_t>(in);
  if (digest != nullptr) *digest = d;
  get_array(in, s.theta.a);
  get_array(in, s.q.x.a);
  get_array(in, s.q.y.a);
  get_array(in, s.chi.a);
  get_array(in, s.xi.bottom);
  get_array(in, s.xi.top);
  get_array(in, s.v.a);
  if (!in) throw ConfigError("snapshot: '" + path + "' is truncated");
  char extra;
  if (in.read(&extra, 1)) {
    throw ConfigError("snapshot: '" + path + "' has trailing bytes");
  }
  return s;
}

}  // namespace chc
