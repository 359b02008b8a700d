#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gauss_regret/rng.hpp"

namespace gauss_regret {

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

// One instance of a claim lhs <= rhs (or lhs == rhs for equality instances).
struct InstanceRecord {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double budget = 0.0;
  double margin = 0.0;  // rhs - lhs, or -|lhs - rhs| for equalities
  bool equality = false;
  bool violation = false;
  bool budget_dominated = false;  // |margin| within the budget
};

struct PropertyCheck {
  std::string name;
  std::string error_budget_policy;
  int instance_count = 0;
  int violations = 0;
  int budget_dominated = 0;
  double worst_margin = 0.0;
  Verdict verdict = Verdict::pass;
  std::vector<InstanceRecord> instances;
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyCheck> checks;
  Verdict verdict = Verdict::pass;
};

struct VerifyOptions {
  int trials = 100;
  std::uint64_t seed = 0;
  std::size_t mc_samples = 100000;
  double quad_tol = 1e-5;
};

// comparison, additive, scaling, width, redundancy, characterizations,
// volume_sequence
const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name, const VerifyOptions& opt);

// Worst verdict: fail > inconclusive > pass.
Verdict combine(const std::vector<SuiteReport>& reports);

std::string report_json(const std::vector<SuiteReport>& reports, const VerifyOptions& opt);
std::string summary_table(const std::vector<SuiteReport>& reports);

// inf_r { sum log(1 + a_i^2 / r^2) + r^2 }, exact (the stationarity equation
// r^2 = sum a_i^2 / (r^2 + a_i^2) is monotone in r^2).
double ellipsoid_regret_functional(const Vector& axes);
// inf_r { sum_{a_i >= 2r} log(a_i / r) + r^2 }, exact piecewise minimisation.
double ellipsoid_redundancy_functional(const Vector& axes);

}  // namespace gauss_regret
