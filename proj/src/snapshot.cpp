#include "liouwave/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "liouwave/error.hpp"

namespace liouwave {

namespace {

constexpr char kMagic[4] = {'L', 'W', 'A', 'V'};
constexpr std::size_t kHeaderBytes = 4 + 4 * 4 + 3 * 8;

template <class T>
void put(std::vector<unsigned char>& out, T value) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  out.insert(out.end(), b, b + sizeof(T));
}

template <class T>
T get(const std::vector<unsigned char>& in, std::size_t& pos) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  pos += sizeof(T);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

std::vector<unsigned char> encode_snapshot(const WaveState& s) {
  const auto& g = *s.grid();
  std::vector<unsigned char> out;
  out.reserve(kHeaderBytes + 2 * s.components() * g.points() * 8);
  out.insert(out.end(), kMagic, kMagic + 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n1()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n2()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.components()));
  put<double>(out, g.L1());
  put<double>(out, g.L2());
  put<double>(out, s.t);
  for (const auto* set : {&s.u, &s.v})
    for (const auto& f : *set)
      for (double x : f.values) put<double>(out, x);
  return out;
}

WaveState decode_snapshot(const std::vector<unsigned char>& bytes, const GridRef& grid) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw SnapshotError("not a snapshot file");
  if (bytes.size() < kHeaderBytes) throw SnapshotError("truncated snapshot header");
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != kSnapshotVersion)
    throw SnapshotError("snapshot version mismatch: file has " + std::to_string(version) +
                        ", expected " + std::to_string(kSnapshotVersion));
  const auto n1 = get<std::uint32_t>(bytes, pos);
  const auto n2 = get<std::uint32_t>(bytes, pos);
  const auto ncomp = get<std::uint32_t>(bytes, pos);
  const double L1 = get<double>(bytes, pos);
  const double L2 = get<double>(bytes, pos);
  const double t = get<double>(bytes, pos);
  if (ncomp == 0) throw SnapshotError("snapshot has zero components");
  const std::size_t points = static_cast<std::size_t>(n1) * n2;
  const std::size_t need = kHeaderBytes + 2 * static_cast<std::size_t>(ncomp) * points * 8;
  if (bytes.size() < need) throw SnapshotError("truncated snapshot body");
  if (bytes.size() > need) throw SnapshotError("trailing bytes after snapshot body");

  GridRef g = grid;
  if (g) {
    if (static_cast<std::uint32_t>(g->n1()) != n1 || static_cast<std::uint32_t>(g->n2()) != n2 ||
        g->L1() != L1 || g->L2() != L2)
      throw SnapshotError("snapshot shape mismatch: file is " + std::to_string(n1) + "x" +
                          std::to_string(n2) + ", grid is " + std::to_string(g->n1()) + "x" +
                          std::to_string(g->n2()));
  } else {
    try {
      g = make_torus_grid(static_cast<int>(n1), static_cast<int>(n2), L1, L2);
    } catch (const std::invalid_argument& e) {
      throw SnapshotError(std::string("snapshot shape invalid: ") + e.what());
    }
  }

  WaveState s;
  s.t = t;
  for (auto* set : {&s.u, &s.v})
    for (std::uint32_t c = 0; c < ncomp; ++c) {
      ScalarField f(g);
      for (std::size_t i = 0; i < points; ++i) f.values[i] = get<double>(bytes, pos);
      set->push_back(std::move(f));
    }
  s.velocity_mean_removed.assign(ncomp, 0.0);
  return s;
}

void write_snapshot(const WaveState& s, const std::string& path) {
  const auto bytes = encode_snapshot(s);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SnapshotError("write failed for '" + path + "'");
}

WaveState read_snapshot(const std::string& path, const GridRef& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open '" + path + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes, grid);
}

}  // namespace liouwave
