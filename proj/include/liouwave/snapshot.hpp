#pragma once

// Binary state snapshots. Layout, all little-endian:
//   "LWAV" | u32 version=1 | u32 n1 | u32 n2 | u32 ncomp | f64 L1 | f64 L2 | f64 t
//   | ncomp blocks of n1*n2 f64 u-values (row-major) | ncomp blocks of v-values

#include <cstdint>
#include <string>
#include <vector>

#include "liouwave/fields.hpp"

namespace liouwave {

inline constexpr std::uint32_t kSnapshotVersion = 1;

std::vector<unsigned char> encode_snapshot(const WaveState& s);
/// Decodes onto a fresh grid of the stored shape, or onto `grid` when given
/// (shape mismatch is then an error).
WaveState decode_snapshot(const std::vector<unsigned char>& bytes, const GridRef& grid = nullptr);

void write_snapshot(const WaveState& s, const std::string& path);
WaveState read_snapshot(const std::string& path, const GridRef& grid = nullptr);

}  // namespace liouwave
