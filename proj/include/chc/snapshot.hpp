#pragma once

#include <cstdint>
#include <string>

#include "chc/integrator.hpp"

namespace chc {

// FNV-1a 64-bit hash; used to fingerprint the parameter set in snapshots.
std::uint64_t fnv1a(const std::string& s);

// Binary snapshot, little-endian throughout:
//   "CHC1" | u32 version=1 | u32 nx, ny | f64 Lx, Ly | f64 t
//   | f64 mean_chi, mean_v | u64 params digest
//   | f64 arrays: theta, qx, qy, chi (nx*ny each), xi bottom, xi top
//     (nx each), v (nx*ny).
// The carried mean scalars are part of the state, so a restart reproduces
// the original trajectory bit for bit. Round trips are byte-identical.
void write_snapshot(const std::string& path, const SystemState& s,
                    std::uint64_t digest);

// Throws ConfigError on bad magic, version, sizes, or truncation. The
// digest read from the file is stored to *digest when given; callers
// compare it against their configuration.
SystemState read_snapshot(const std::string& path,
                          std::uint64_t* digest = nullptr);

}  // namespace chc
