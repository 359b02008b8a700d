#pragma once

#include <optional>
#include <vector>

#include "gauss_regret/mc.hpp"
#include "gauss_regret/set_spec.hpp"

namespace gauss_regret {

// kappa_j = volume of the unit ball in R^j.
double kappa(int j);

class KappaTable {
 public:
  explicit KappaTable(int max_dim);
  double operator[](int j) const { return k_.at(static_cast<std::size_t>(j)); }
  int max_dim() const { return static_cast<int>(k_.size()) - 1; }

 private:
  std::vector<double> k_;
};

enum class Provenance { exact, monte_carlo };

// V_0..V_n of a body in R^n; std_errors are zero for exact sequences.
struct IntrinsicVolumeSeq {
  int dim = 0;
  std::vector<double> values;
  Provenance provenance = Provenance::exact;
  std::vector<double> std_errors;
};

IntrinsicVolumeSeq ball_volumes(int n, double r);
IntrinsicVolumeSeq box_volumes(const Vector& sides);
IntrinsicVolumeSeq product_volumes(const IntrinsicVolumeSeq& a, const IntrinsicVolumeSeq& b);
// V_j(tK) = t^j V_j(K).
IntrinsicVolumeSeq dilate(const IntrinsicVolumeSeq& s, double t);

// Closed-form sequence for points, segments, balls, boxes, equal-axis
// ellipsoids and products / scalings / translates of those.
std::optional<IntrinsicVolumeSeq> exact_volumes(const SetSpec& s);

struct McValue {
  double value = 0.0;
  double se = 0.0;
};

// V_j(K / sqrt(2 pi)) = E[vol_j(G K) / kappa_j] / j! with G a j x n Gaussian
// matrix. Supports ellipsoids (any j) and convex hulls (j <= 3).
McValue mc_tsirelson(const SetSpec& s, int j, const MCConfig& cfg);

// Full sequence V_j(K) from mc_tsirelson (V_0 = 1 exactly).
IntrinsicVolumeSeq mc_intrinsic_volumes(const SetSpec& s, const MCConfig& cfg);

// V_1 via the mean width over uniform directions.
McValue mc_kubota_v1(const SetSpec& s, const MCConfig& cfg);

// vol(K + rB) = sum_j V_{n-j}(K) kappa_j r^j.
double steiner_parallel_volume(const IntrinsicVolumeSeq& s, double r);

// log sum_j V_j(tK / sqrt(2 pi)), i.e. the minimax regret of tK.
McValue regret_from_volumes(const IntrinsicVolumeSeq& s, double t);

struct MaxIntrinsicBounds {
  bool applicable = false;  // needs V_1(tK / sqrt(2 pi)) >= 2
  double v1 = 0.0;
  double lower = 0.0;  // log max_{j>=1} V_j
  double upper = 0.0;  // 8 log max_k V_{2^k}
  double regret = 0.0;
  double four_log_max = 0.0;  // 4 log max_{j>=1} V_j
  int argmax = 0;
  bool holds = false;
};
MaxIntrinsicBounds max_intrinsic_bounds(const IntrinsicVolumeSeq& s, double t);

struct RissanenReport {
  double sample_size = 0.0;
  double expansion = 0.0;  // d/2 log(n / 2 pi) + log V_d
  double regret = 0.0;     // exact log sum_j V_j(sqrt(n / 2 pi) K)
  int dominant_index = 0;  // argmax_{j>=1} V_j(sqrt(n / 2 pi) K), ties to the smaller j
  bool top_dominates = false;  // V_d >= V_{d-1} at this sample size
  double direct_threshold = 0.0;  // n at which V_d overtakes V_{d-1}
  double surface_threshold = 0.0;  // 8 pi (surface / volume)^2
};
RissanenReport rissanen_report(const IntrinsicVolumeSeq& s, double sample_size);

// Largest relative violation of (j+1) V_{j+1} V_{j-1} <= j V_j^2 (<= 0 when
// the sequence is log-concave in this sense).
double poisson_log_concavity_gap(const IntrinsicVolumeSeq& s);

}  // namespace gauss_regret
