#pragma once

#include <cstdint>

#include "idslab/group_element.hpp"

namespace idslab {

/// Counter-based generation: every random draw is a pure function of a
/// 64-bit key, so fields are reproducible, order-independent and safe to
/// evaluate from any thread. Keys are built by absorbing the seed, a
/// stream tag and the lattice site into a SplitMix64 sponge.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t absorb(std::uint64_t state, std::uint64_t value) {
  return splitmix64(state ^ splitmix64(value));
}

/// Key for the draw attached to lattice site `site` on stream `stream`.
inline std::uint64_t site_key(std::uint64_t seed, const GroupElement& site, std::uint32_t stream) {
  std::uint64_t h = splitmix64(seed);
  h = absorb(h, stream);
  h = absorb(h, static_cast<std::uint64_t>(site.dim()));
  for (int k = 0; k < site.dim(); ++k) h = absorb(h, static_cast<std::uint64_t>(site[k]));
  return h;
}

/// Uniform double in [0, 1) from a 64-bit key (53 mantissa bits).
inline double uniform01(std::uint64_t key) {
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

/// Child seed for realization `index` of the stream tagged `tag`.
/// The master seed fully determines every derived seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
  std::uint64_t h = splitmix64(master);
  h = absorb(h, tag);
  h = absorb(h, index);
  return h;
}

/// FNV-1a over a byte string; used for config hashes in output metadata.
inline std::uint64_t fnv1a64(const char* data, std::size_t len) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace idslab
