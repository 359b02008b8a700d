#pragma once

#include <string>
#include <variant>
#include <vector>

#include "gauss_regret/mc.hpp"
#include "gauss_regret/regret.hpp"
#include "gauss_regret/set_spec.hpp"

namespace gauss_regret {

// N(mean, cov) with SPD covariance. Evaluated in log space only.
class GaussianDensity {
 public:
  static GaussianDensity diagonal(Vector mean, Vector variances);
  static GaussianDensity full(Vector mean, Matrix cov);
  static GaussianDensity standard(int n) { return diagonal(Vector::Zero(n), Vector::Ones(n)); }

  int dim() const { return static_cast<int>(mean_.size()); }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }
  const Matrix& chol() const { return chol_; }  // lower Cholesky factor
  double log_det() const { return log_det_; }
  double log_density(const VecRef& y) const;

 private:
  Vector mean_;
  Matrix cov_;
  Matrix chol_;
  double log_det_ = 0.0;
};

// Normalized maximum likelihood over a set. Joint evaluation only.
struct NmlPredictor {
  SetSpec support;
  RegretEstimate normalizer;  // log of the Shtarkov integral
};
NmlPredictor make_nml(const SetSpec& support, const RegretOptions& opt = {});

// Mixture of unit-covariance Gaussians p_c with the given weights.
struct NetMixture {
  std::vector<Vector> centers;
  std::vector<double> weights;
};
NetMixture make_net_mixture(std::vector<Vector> centers, std::vector<double> weights);
NetMixture uniform_mixture(std::vector<Vector> centers);

using Predictor = std::variant<NmlPredictor, GaussianDensity, NetMixture>;

int predictor_dim(const Predictor& p);

struct LossRecord {
  std::vector<double> per_step;  // empty for joint-only predictors
  double cumulative = 0.0;
  double comparator_loss = 0.0;
  double regret = 0.0;
};

// log q(y) in nats.
double log_density(const Predictor& p, const VecRef& y);

// Per-step conditional log-losses. Throws NotSequential for NML.
LossRecord sequential_predict(const Predictor& p, const VecRef& y);

// Loss of p against the best p_theta, theta in the comparator set.
LossRecord regret_on_sequence(const Predictor& p, const SetSpec& comparator, const VecRef& y);

// q_lambda = N(0, diag(1 + a_i^2 / lambda)).
GaussianDensity ridge_predictor(const Vector& axes, double lambda);

struct RidgeIdentity {
  double loss = 0.0;           // l(q_lambda, y)
  double penalized_inf = 0.0;  // inf_theta { l(p_theta, y) + lambda/2 sum theta_i^2 / a_i^2 }
  double lhs = 0.0;            // loss - penalized_inf
  double rhs = 0.0;            // 1/2 sum log(1 + a_i^2 / lambda)
};
RidgeIdentity ridge_identity(const Vector& axes, double lambda, const VecRef& y);

struct LambdaChoice {
  double lambda = 0.0;
  double bound = 0.0;  // 1/2 sum log(1 + a_i^2 / lambda) + lambda / 2
};
LambdaChoice choose_lambda(const Vector& axes);

// KL(N(theta, I) || q).
double kl(const VecRef& theta, const GaussianDensity& q);
inline double kl_points(const VecRef& theta, const VecRef& other) { return 0.5 * (theta - other).squaredNorm(); }

// Total variation between p_0 and p_rho in one dimension: 2 int_0^{rho/2} phi.
double two_point_tv(double rho);
// KL(p_0 || (p_0 + p_rho) / 2), the exact redundancy of a two-point set at
// distance rho, by quadrature.
double two_point_redundancy(double rho);

// KL(p_theta || uniform mixture of p_{theta_j}) in one dimension, by quadrature.
double mixture_kl_1d(double theta, const std::vector<double>& centers);

struct MixtureInfo {
  double value = 0.0;
  double se = 0.0;
};
// (1/N) sum_i KL(p_{theta_i} || mean_j p_{theta_j}), Monte Carlo with CRN.
MixtureInfo mutual_information_mc(const std::vector<Vector>& points, const MCConfig& cfg);

struct RedundancyOptions {
  int radii = 64;
  std::size_t sample_budget = 100000;
};

struct RedundancyBounds {
  double upper = 0.0;         // min_r log N(A, r) + r^2 / 2 (net mixture)
  double upper_radius = 0.0;
  double pinsker = 0.0;       // tau(rho)^2 / 2 for the farthest pair
  double packing = 0.0;       // log N - 3 over separated sets with r^2 >= 32 log N
  double lower = 0.0;         // max(pinsker, packing)
  std::string lower_route;    // "pinsker", "packing" or "trivial"
  // Two-point sets: the redundancy itself, by quadrature.
  bool has_exact = false;
  double exact = 0.0;
  double exact_error = 0.0;
  // One-dimensional finite sets with at most 16 points: the uniform mixture
  // brackets the redundancy between its mutual information and its sup KL.
  bool has_bracket = false;
  double bracket_lower = 0.0;
  double bracket_upper = 0.0;
};
RedundancyBounds redundancy_bounds(const SetSpec& s, const RedundancyOptions& opt = {});

struct TildeQ {
  GaussianDensity density;
  double sup_kl = 0.0;       // exact sup over the ellipsoid of KL(p_theta || q~)
  double proof_bound = 0.0;  // 1/2 sum_{a_i >= 2r} log(1 + a_i^2 / r^2) + 2 r^2, r = sqrt(lambda)
};
TildeQ tilde_q_redundancy(const Vector& axes, double lambda);

}  // namespace gauss_regret
