#pragma once

#include <cstdint>

#include "gauss_regret/kernels.hpp"

namespace gauss_regret {

struct MCConfig {
  std::size_t samples = 200000;
  std::size_t batches = 32;
  std::uint64_t seed = 0;

  // samples >= batches >= 16 (the batch-means SE needs enough batches).
  void validate() const;
  kernels::BatchPlan plan(Stream stream) const { return {samples, batches, seed, stream}; }
};

}  // namespace gauss_regret
