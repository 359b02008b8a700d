#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "gauss_regret/complexity.hpp"
#include "gauss_regret/errors.hpp"
#include "gauss_regret/geometry.hpp"
#include "gauss_regret/kernels.hpp"
#include "gauss_regret/mc.hpp"
#include "gauss_regret/regret.hpp"

using namespace gauss_regret;
using doctest::Approx;

namespace {

std::vector<Vector> cloud(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> nd;
  std::vector<Vector> pts;
  for (int i = 0; i < m; ++i) {
    Vector v(n);
    fill_normal(rng, nd, v);
    pts.push_back(v);
  }
  return pts;
}

}  // namespace

TEST_CASE("splitmix64 reference value") {
  // first output of the reference generator seeded with 0
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("derived seeds are distinct across streams and indices") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t master : {0ULL, 1ULL, 20240611ULL})
    for (Stream st : {Stream::gaussian_vectors, Stream::gaussian_matrices, Stream::instances, Stream::sampling})
      for (std::uint64_t i = 0; i < 200; ++i) seen.insert(derive_seed(master, st, i));
  CHECK(seen.size() == 3 * 4 * 200);
  CHECK(derive_seed(7, Stream::sampling, 3) == derive_seed(7, Stream::sampling, 3));
}

TEST_CASE("batch plan splits samples exactly") {
  kernels::BatchPlan p{1003, 32, 0, Stream::gaussian_vectors};
  std::size_t total = 0;
  for (std::size_t b = 0; b < p.batches; ++b) total += p.batch_size(b);
  CHECK(total == 1003);
  CHECK(p.batch_size(0) - p.batch_size(31) <= 1);
}

TEST_CASE("MC config validation") {
  CHECK_THROWS_AS((MCConfig{100, 8, 0}).validate(), Error);
  CHECK_THROWS_AS((MCConfig{10, 16, 0}).validate(), Error);
  CHECK_NOTHROW((MCConfig{16, 16, 0}).validate());
}

TEST_CASE("parallel and serial log-mean-exp kernels agree") {
  kernels::BatchPlan plan{20000, 32, 99, Stream::gaussian_vectors};
  auto f = [](const Vector& x) { return 0.5 * x.head(2).squaredNorm() - 0.1 * x[2]; };
  const auto par = kernels::batch_log_mean_exp(plan, 3, f);
  const auto ser = kernels::batch_log_mean_exp_serial(plan, 3, f);
  REQUIRE(par.size() == ser.size());
  for (std::size_t b = 0; b < par.size(); ++b) CHECK(par[b] == Approx(ser[b]).epsilon(1e-12));
}

TEST_CASE("kernels do not depend on the thread count") {
  kernels::BatchPlan plan{50000, 32, 5, Stream::gaussian_vectors};
  auto f = [](const Vector& x) { return std::abs(x[0]) + x[1] * x[1]; };
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = kernels::batch_mean(plan, 2, f);
  omp_set_num_threads(4);
  const auto four = kernels::batch_mean(plan, 2, f);
  omp_set_num_threads(saved);
  CHECK(one == four);

  const SetSpec s = SetSpec::finite_points(cloud(30, 4, 11));
  const MCConfig cfg{40000, 32, 17};
  const RegretEstimate a = regret_mc(s, cfg), b = regret_mc_serial(s, cfg);
  CHECK(a.value == Approx(b.value).epsilon(1e-12));
  CHECK(a.half_width == Approx(b.half_width).epsilon(1e-9));
  const WidthEstimate wa = gaussian_width_mc(s, cfg), wb = gaussian_width_mc_serial(s, cfg);
  CHECK(wa.value == Approx(wb.value).epsilon(1e-12));
}

TEST_CASE("combine_log_means on hand-made batches") {
  kernels::BatchPlan plan{64, 16, 0, Stream::gaussian_vectors};
  std::vector<double> lm(16);
  for (int b = 0; b < 16; ++b) lm[b] = std::log(1.0 + 0.1 * b);
  const kernels::Summary s = kernels::combine_log_means(lm, plan);
  // equal batch sizes: value is log of the plain mean of the batch means
  double mean = 0.0;
  for (int b = 0; b < 16; ++b) mean += 1.0 + 0.1 * b;
  mean /= 16.0;
  CHECK(s.value == Approx(std::log(mean)).epsilon(1e-14));
  double var = 0.0;
  for (int b = 0; b < 16; ++b) var += std::pow(1.0 + 0.1 * b - mean, 2);
  var /= 15.0;
  CHECK(s.se == Approx(std::sqrt(var / 16.0) / mean).epsilon(1e-12));
  CHECK_FALSE(s.degenerate);
  const kernels::Summary d = kernels::combine_log_means(std::vector<double>(16, 0.3), plan);
  CHECK(d.degenerate);
  CHECK(d.se == 0.0);
}

TEST_CASE("trapezoid kernels agree") {
  kernels::Grid g;
  g.lo = Vector::Constant(3, -2.0);
  g.h = 0.05;
  g.nodes = {81, 81, 81};
  auto f = [](const Vector& x) { return std::exp(-0.5 * x.squaredNorm()); };
  const double par = kernels::trapezoid_sum(g, f), ser = kernels::trapezoid_sum_serial(g, f);
  CHECK(par == Approx(ser).epsilon(1e-12));
  // integral over [-2, 2]^3 of the Gaussian kernel
  const double one = std::sqrt(kTwoPi) * (1.0 - 2.0 * normal_sf(2.0));
  CHECK(par * std::pow(g.h, 3) == Approx(one * one * one).epsilon(1e-3));
}

TEST_CASE("Monte Carlo estimates are reproducible from the seed") {
  const SetSpec s = SetSpec::ball(Vector::Zero(3), 1.5);
  const MCConfig cfg{20000, 32, 123};
  const RegretEstimate a = regret_mc(s, cfg), b = regret_mc(s, cfg);
  CHECK(a.value == b.value);
  CHECK(a.half_width == b.half_width);
  CHECK(a.seed == 123);
  const RegretEstimate c = regret_mc(s, MCConfig{20000, 32, 124});
  CHECK(c.value != a.value);
}
