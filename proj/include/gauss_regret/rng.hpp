#pragma once

#include <cstdint>
#include <random>

#include "gauss_regret/common.hpp"

namespace gauss_regret {

using Rng = std::mt19937_64;

// Stream identifiers for derive_seed. Draws that should share common random
// numbers (regret and width estimates of the same set) use the same stream.
enum class Stream : std::uint64_t {
  gaussian_vectors = 1,
  gaussian_matrices = 2,
  instances = 3,
  sampling = 4,
};

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based sub-seed: depends only on (master, stream, index), so a batch
// draws the same numbers no matter which thread runs it.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index);

// Seed from GAUSS_REGRET_SEED when set, otherwise the built-in default.
std::uint64_t default_seed();

inline void fill_normal(Rng& rng, std::normal_distribution<double>& nd, Vector& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = nd(rng);
}

}  // namespace gauss_regret
