#include "gauss_regret/rng.hpp"

#include <cstdlib>
#include <string>

namespace gauss_regret {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL));
  return splitmix64(s ^ index);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GAUSS_REGRET_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
    }
  }
  return 20240611ULL;
}

}  // namespace gauss_regret

#include "gauss_regret/kernels.hpp"

namespace gauss_regret::kernels {

Summary combine_log_means(const std::vector<double>& log_means, const BatchPlan& plan) {
  Summary s;
  std::vector<double> w(log_means.size());
  for (std::size_t b = 0; b < log_means.size(); ++b)
    w[b] = log_means[b] + std::log(static_cast<double>(plan.batch_size(b)));
  s.value = log_sum_exp(w) - std::log(static_cast<double>(plan.samples));
  const double nb = static_cast<double>(log_means.size());
  double mean = 0.0, sq = 0.0;
  for (double l : log_means) mean += std::exp(l - s.value);
  mean /= nb;
  for (double l : log_means) sq += std::pow(std::exp(l - s.value) - mean, 2);
  double sd = nb > 1 ? std::sqrt(sq / (nb - 1.0)) : 0.0;
  s.se = sd / std::sqrt(nb) / mean;
  s.degenerate = true;
  for (double l : log_means) s.degenerate = s.degenerate && l == log_means.front();
  return s;
}

Summary combine_means(const std::vector<double>& means, const BatchPlan& plan) {
  Summary s;
  double acc = 0.0;
  for (std::size_t b = 0; b < means.size(); ++b) acc += means[b] * static_cast<double>(plan.batch_size(b));
  s.value = acc / static_cast<double>(plan.samples);
  const double nb = static_cast<double>(means.size());
  double sq = 0.0;
  for (double m : means) sq += (m - s.value) * (m - s.value);
  s.se = nb > 1 ? std::sqrt(sq / (nb - 1.0)) / std::sqrt(nb) : 0.0;
  s.degenerate = true;
  for (double m : means) s.degenerate = s.degenerate && m == means.front();
  return s;
}

}  // namespace gauss_regret::kernels

#include "gauss_regret/errors.hpp"
#include "gauss_regret/mc.hpp"

namespace gauss_regret {

void MCConfig::validate() const {
  if (batches < 16) throw Error("MCConfig: at least 16 batches are required");
  if (samples < batches) throw Error("MCConfig: samples must be at least the number of batches");
}

}  // namespace gauss_regret
