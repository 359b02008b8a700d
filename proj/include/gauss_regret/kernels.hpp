#pragma once

#include <cstdint>
#include <omp.h>
#include <vector>

#include "gauss_regret/common.hpp"
#include "gauss_regret/rng.hpp"

// Data-parallel kernels shared by the Monte Carlo and quadrature estimators.
// Every parallel kernel has a plain serial twin used as a reference in tests
// and in the benchmark. Batch b always draws from derive_seed(seed, stream, b),
// and reductions run in batch order, so results do not depend on the number
// of threads.
namespace gauss_regret::kernels {

struct BatchPlan {
  std::size_t samples = 0;
  std::size_t batches = 1;
  std::uint64_t seed = 0;
  Stream stream = Stream::gaussian_vectors;

  std::size_t batch_size(std::size_t b) const {
    return samples / batches + (b < samples % batches ? 1 : 0);
  }
};

// body(batch_index, rng) -> batch statistic.
template <class Body>
std::vector<double> for_each_batch(const BatchPlan& plan, Body&& body) {
  std::vector<double> out(plan.batches);
  const long nb = static_cast<long>(plan.batches);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < nb; ++b) {
    Rng rng(derive_seed(plan.seed, plan.stream, static_cast<std::uint64_t>(b)));
    out[b] = body(static_cast<std::size_t>(b), rng);
  }
  return out;
}

template <class Body>
std::vector<double> for_each_batch_serial(const BatchPlan& plan, Body&& body) {
  std::vector<double> out(plan.batches);
  for (std::size_t b = 0; b < plan.batches; ++b) {
    Rng rng(derive_seed(plan.seed, plan.stream, b));
    out[b] = body(b, rng);
  }
  return out;
}

// Per-batch log(mean(exp(f(X)))) for X ~ N(0, I_dim), streaming log-sum-exp.
template <class F>
std::vector<double> batch_log_mean_exp(const BatchPlan& plan, int dim, F&& f) {
  return for_each_batch(plan, [&](std::size_t b, Rng& rng) {
    std::normal_distribution<double> nd;
    Vector x(dim);
    const std::size_t m = plan.batch_size(b);
    double mx = -INFINITY, acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      fill_normal(rng, nd, x);
      double v = f(x);
      if (v > mx) {
        acc = acc * std::exp(mx - v) + 1.0;
        mx = v;
      } else {
        acc += std::exp(v - mx);
      }
    }
    return mx + std::log(acc / static_cast<double>(m));
  });
}

// Reference: stores the batch, then a two-pass log-sum-exp.
template <class F>
std::vector<double> batch_log_mean_exp_serial(const BatchPlan& plan, int dim, F&& f) {
  return for_each_batch_serial(plan, [&](std::size_t b, Rng& rng) {
    std::normal_distribution<double> nd;
    Vector x(dim);
    std::vector<double> vals(plan.batch_size(b));
    for (auto& v : vals) {
      fill_normal(rng, nd, x);
      v = f(x);
    }
    return log_sum_exp(vals) - std::log(static_cast<double>(vals.size()));
  });
}

template <class F>
std::vector<double> batch_mean(const BatchPlan& plan, int dim, F&& f) {
  return for_each_batch(plan, [&](std::size_t b, Rng& rng) {
    std::normal_distribution<double> nd;
    Vector x(dim);
    const std::size_t m = plan.batch_size(b);
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      fill_normal(rng, nd, x);
      acc += f(x);
    }
    return acc / static_cast<double>(m);
  });
}

template <class F>
std::vector<double> batch_mean_serial(const BatchPlan& plan, int dim, F&& f) {
  return for_each_batch_serial(plan, [&](std::size_t b, Rng& rng) {
    std::normal_distribution<double> nd;
    Vector x(dim);
    std::vector<double> vals(plan.batch_size(b));
    for (auto& v : vals) {
      fill_normal(rng, nd, x);
      v = f(x);
    }
    double acc = 0.0;
    for (double v : vals) acc += v;
    return acc / static_cast<double>(vals.size());
  });
}

struct Summary {
  double value = 0.0;
  double se = 0.0;
  bool degenerate = false;  // all batch statistics identical
};

// Grand log-mean from per-batch log-means. The standard error is the
// batch-means SE of the mean, carried to the log scale by the delta method.
Summary combine_log_means(const std::vector<double>& log_means, const BatchPlan& plan);
Summary combine_means(const std::vector<double>& means, const BatchPlan& plan);

// Regular grid lo + h * k, k = 0..nodes[i]-1 on each axis.
struct Grid {
  Vector lo;
  double h = 0.0;
  std::vector<long> nodes;
};

// Trapezoid weights times f over the grid (without the h^n factor). Parallel
// over the first axis with an ordered reduction of the slab sums.
template <class F>
double trapezoid_sum(const Grid& g, F&& f) {
  const int n = static_cast<int>(g.nodes.size());
  const long n0 = g.nodes[0];
  std::vector<double> slab(n0, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
  for (long i0 = 0; i0 < n0; ++i0) {
    Vector x(n);
    x[0] = g.lo[0] + g.h * static_cast<double>(i0);
    const double w0 = (i0 == 0 || i0 == n0 - 1) ? 0.5 : 1.0;
    std::vector<long> idx(n, 0);
    double acc = 0.0;
    while (true) {
      double w = w0;
      for (int k = 1; k < n; ++k) {
        x[k] = g.lo[k] + g.h * static_cast<double>(idx[k]);
        if (idx[k] == 0 || idx[k] == g.nodes[k] - 1) w *= 0.5;
      }
      acc += w * f(x);
      int k = n - 1;
      while (k >= 1 && ++idx[k] == g.nodes[k]) idx[k--] = 0;
      if (k < 1) break;
    }
    slab[i0] = acc;
  }
  double total = 0.0;
  for (double s : slab) total += s;
  return total;
}

// Reference: one flat loop over the linear node index, single accumulator.
template <class F>
double trapezoid_sum_serial(const Grid& g, F&& f) {
  const int n = static_cast<int>(g.nodes.size());
  long total_nodes = 1;
  for (long c : g.nodes) total_nodes *= c;
  Vector x(n);
  double acc = 0.0;
  for (long lin = 0; lin < total_nodes; ++lin) {
    long r = lin;
    double w = 1.0;
    for (int k = n - 1; k >= 0; --k) {
      long ik = r % g.nodes[k];
      r /= g.nodes[k];
      x[k] = g.lo[k] + g.h * static_cast<double>(ik);
      if (ik == 0 || ik == g.nodes[k] - 1) w *= 0.5;
    }
    acc += w * f(x);
  }
  return acc;
}

}  // namespace gauss_regret::kernels
