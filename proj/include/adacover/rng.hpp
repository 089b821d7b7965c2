#pragma once

#include <cstdint>
#include <random>

namespace adacover {

using Rng = std::mt19937_64;

/// Purpose tags for stream derivation. A master seed fans out to every
/// stochastic component as (seed, tag, index); values are part of the
/// reproducibility contract and must not be renumbered.
enum class StreamTag : std::uint64_t {
  volume = 1,
  cover_trial = 2,
  point_cover = 3,
  prob_mass = 4,
  normalization = 5,
  gen_error = 6,
  training_draw = 7,
  lipschitz_pairs = 8,
  verify_trial = 9,
  histogram = 10,
  generic = 99,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, StreamTag tag, std::uint64_t index) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
  return splitmix64(h ^ index);
}

inline Rng make_rng(std::uint64_t master, StreamTag tag, std::uint64_t index) {
  return Rng(derive_seed(master, tag, index));
}

}  // namespace adacover
