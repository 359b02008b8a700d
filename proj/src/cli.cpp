#include "gauss_regret/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <json.hpp>

#include "gauss_regret/coding.hpp"
#include "gauss_regret/complexity.hpp"
#include "gauss_regret/errors.hpp"
#include "gauss_regret/geometry.hpp"
#include "gauss_regret/intrinsic.hpp"
#include "gauss_regret/regret.hpp"
#include "gauss_regret/spec_json.hpp"
#include "gauss_regret/verify.hpp"

namespace gauss_regret {

namespace {

using nlohmann::json;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json jnum(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : x < 0 ? "-inf" : "nan";
}

struct Common {
  std::string spec_path;
  std::uint64_t seed = 0;
  std::size_t samples = 200000;
  std::size_t batches = 32;
  bool bits = false;
  std::string format;

  MCConfig mc() const { return {samples, batches, seed}; }
  double unit() const { return bits ? kLog2 : 1.0; }
  const char* unit_name() const { return bits ? "bits" : "nats"; }
};

void add_mc_flags(CLI::App* sub, Common& c) {
  sub->add_option("--samples", c.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  sub->add_option("--batches", c.batches, "Monte Carlo batches (at least 16)")->check(CLI::Range(16, 1 << 20));
  sub->add_option("--seed", c.seed, "master seed (default: GAUSS_REGRET_SEED or 20240611)");
}

json estimate_json(const RegretEstimate& e, const Common& c) {
  return {{"value", jnum(e.value / c.unit())},
          {"units", c.unit_name()},
          {"method", to_string(e.method)},
          {"half_width", jnum(e.half_width / c.unit())},
          {"samples", e.samples},
          {"seed", e.seed},
          {"degenerate", e.degenerate}};
}

std::vector<Vector> read_rows(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file '" + path + "'");
  std::vector<Vector> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
    if (static_cast<int>(vals.size()) != dim)
      throw DimensionMismatch(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                              " values, got " + std::to_string(vals.size()));
    rows.push_back(Eigen::Map<Vector>(vals.data(), dim));
  }
  return rows;
}

// Greedy r-cover of a finite set, or of an r/10-dense sample of the spec.
std::vector<Vector> net_centers(const SetSpec& s, double r) {
  std::vector<Vector> pts;
  if (const auto* f = finite_points_of(s)) pts = *f;
  else pts = dense_sample(s, r / 10.0, 200000);
  std::vector<Vector> centers;
  for (const auto& p : pts)
    if (std::none_of(centers.begin(), centers.end(), [&](const Vector& c) { return (c - p).norm() <= r; }))
      centers.push_back(p);
  return centers;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimax regret, intrinsic volumes and metric complexity of Gaussian location families"};
  app.require_subcommand(1);
  Common c;
  c.seed = default_seed();

  // regret
  auto* reg = app.add_subcommand("regret", "minimax regret R*(A) in nats");
  std::string method = "auto";
  double tol = 0.0, sigma = 0.0, repeat_n = 0.0;
  reg->add_option("--spec", c.spec_path, "set spec (JSON)")->required();
  reg->add_option("--method", method, "auto|exact|quadrature|mc")
      ->check(CLI::IsMember({"auto", "exact", "quadrature", "mc"}));
  reg->add_option("--tol", tol, "quadrature tolerance (default 1e-6)");
  reg->add_option("--sigma", sigma, "noise level: R*(A, sigma^2) = R*(A / sigma)");
  reg->add_option("--repeat-n", repeat_n, "sample size: R*_n(A) = R*(sqrt(n) A)");
  reg->add_flag("--bits", c.bits, "report in bits");
  add_mc_flags(reg, c);

  // redundancy
  auto* red = app.add_subcommand("redundancy", "bounds on the minimax redundancy");
  red->add_option("--spec", c.spec_path, "set spec (JSON)")->required();
  red->add_flag("--bits", c.bits, "report in bits");

  // intrinsic
  auto* intr = app.add_subcommand("intrinsic", "intrinsic volumes V_j(K)");
  intr->add_option("--spec", c.spec_path, "set spec (JSON)")->required();
  intr->add_option("--format", c.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  add_mc_flags(intr, c);

  // complexity
  auto* cx = app.add_subcommand("complexity", "local widths, covering numbers and fixed points");
  std::string summary_path;
  int radii = 64;
  cx->add_option("--spec", c.spec_path, "set spec (JSON)")->required();
  cx->add_option("--format", c.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  cx->add_option("--summary", summary_path, "write the JSON summary to this file (default: stderr)");
  cx->add_option("--radii", radii, "radius grid size")->check(CLI::Range(2, 4096));
  add_mc_flags(cx, c);

  // predict
  auto* pr = app.add_subcommand("predict", "per-sequence losses and regret of a predictor");
  std::string predictor, input;
  double lambda = 0.0, radius = 0.5;
  bool auto_lambda = false;
  pr->add_option("--spec", c.spec_path, "comparator set spec (JSON)")->required();
  pr->add_option("--predictor", predictor, "nml|ridge|net")->required()->check(CLI::IsMember({"nml", "ridge", "net"}));
  auto* lam_opt = pr->add_option("--lambda", lambda, "ridge parameter");
  auto* auto_opt = pr->add_flag("--auto-lambda", auto_lambda, "choose lambda by minimising the regret bound");
  lam_opt->excludes(auto_opt);
  pr->add_option("--radius", radius, "net mixture cover radius")->check(CLI::PositiveNumber);
  pr->add_option("--input", input, "CSV, one sequence per row")->required();
  pr->add_flag("--bits", c.bits, "report in bits");
  add_mc_flags(pr, c);

  // verify
  auto* ver = app.add_subcommand("verify", "randomized property suites");
  std::string suite = "all";
  VerifyOptions vo;
  ver->add_option("--suite", suite, "suite name or all");
  ver->add_option("--trials", vo.trials, "instances per suite")->check(CLI::PositiveNumber);
  ver->add_option("--seed", c.seed, "master seed");
  ver->add_option("--samples", vo.mc_samples, "Monte Carlo samples per estimate")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (reg->parsed()) {
      if (tol != 0.0 && method != "quadrature") throw Error("--tol is only valid with --method quadrature");
      if (sigma != 0.0 && repeat_n != 0.0) throw Error("--sigma and --repeat-n are mutually exclusive");
      SetSpec s = spec_from_file(c.spec_path);
      if (sigma != 0.0) {
        if (!(sigma > 0.0)) throw Error("--sigma must be positive");
        s = SetSpec::scale(1.0 / sigma, s);
      }
      if (repeat_n != 0.0) {
        if (!(repeat_n > 0.0)) throw Error("--repeat-n must be positive");
        s = SetSpec::scale(std::sqrt(repeat_n), s);
      }
      RegretEstimate e;
      if (method == "exact") {
        e = regret_exact(s);
      } else if (method == "quadrature") {
        QuadratureOptions q;
        if (tol != 0.0) q.tol = tol;
        e = regret_quadrature(s, q);
      } else if (method == "mc") {
        e = regret_mc(s, c.mc());
      } else {
        RegretOptions o;
        o.mc = c.mc();
        e = regret(s, o);
      }
      json j = estimate_json(e, c);
      j["spec"] = type_name(s);
      j["dim"] = s.dim();
      out << j.dump(2) << "\n";
      return 0;
    }
    if (red->parsed()) {
      const SetSpec s = spec_from_file(c.spec_path);
      const RedundancyBounds rb = redundancy_bounds(s);
      const double u = c.unit();
      json j = {{"units", c.unit_name()},
                {"upper", jnum(rb.upper / u)},
                {"upper_radius", jnum(rb.upper_radius)},
                {"lower", jnum(rb.lower / u)},
                {"lower_route", rb.lower_route},
                {"pinsker", jnum(rb.pinsker / u)},
                {"packing", jnum(rb.packing / u)}};
      if (rb.has_exact) j["exact"] = {{"value", jnum(rb.exact / u)}, {"error", jnum(rb.exact_error / u)}};
      if (rb.has_bracket)
        j["uniform_mixture"] = {{"mutual_information", jnum(rb.bracket_lower / u)},
                                {"sup_kl", jnum(rb.bracket_upper / u)}};
      out << j.dump(2) << "\n";
      return 0;
    }
    if (intr->parsed()) {
      const SetSpec s = spec_from_file(c.spec_path);
      IntrinsicVolumeSeq seq;
      if (auto e = exact_volumes(s)) seq = *e;
      else seq = mc_intrinsic_volumes(s, c.mc());
      if (c.format == "json") {
        json j = {{"dim", seq.dim},
                  {"provenance", seq.provenance == Provenance::exact ? "exact" : "monte_carlo"}};
        json v = json::array();
        for (int k = 0; k <= seq.dim; ++k)
          v.push_back({{"j", k}, {"value", jnum(seq.values[k])}, {"se", jnum(seq.std_errors[k])}});
        j["volumes"] = v;
        out << j.dump(2) << "\n";
      } else {
        out << "j,V_j,se\n";
        for (int k = 0; k <= seq.dim; ++k) out << k << "," << num(seq.values[k]) << "," << num(seq.std_errors[k]) << "\n";
      }
      return 0;
    }
    if (cx->parsed()) {
      const SetSpec s = spec_from_file(c.spec_path);
      ProfileOptions po;
      po.mc = {c.samples == 200000 ? 20000 : c.samples, c.batches, c.seed};
      po.radii = radii;
      const ComplexityProfile p = complexity_profile(s, po);
      json summary = {{"diameter", jnum(p.diameter)},
                      {"diameter_exact", p.diameter_exact},
                      {"width_route", p.width_route},
                      {"covering_route", p.covering_route},
                      {"width_lower_bound_only", p.width_lower_bound_only},
                      {"r_star", {jnum(p.r_star.lo), jnum(p.r_star.hi)}},
                      {"r_tilde", {jnum(p.r_tilde.lo), jnum(p.r_tilde.hi)}},
                      {"inf_forms",
                       {{"width_plus_log_n", {jnum(p.inf.width_lo), jnum(p.inf.width_hi)}},
                        {"log_n_plus_r2", {jnum(p.inf.square_lo), jnum(p.inf.square_hi)}},
                        {"log_n_plus_half_r2_upper", jnum(p.inf.half_square_hi)},
                        {"fixed_point_relation", p.inf.fixed_point_relation}}}};
      json ent = json::array();
      for (const auto& e : p.entropy) ent.push_back({{"k", e.k}, {"lo", jnum(e.lo)}, {"hi", jnum(e.hi)}});
      summary["entropy_numbers"] = ent;
      if (c.format == "json") {
        json rows = json::array();
        for (const auto& r : p.rows)
          rows.push_back({{"r", r.r}, {"w", jnum(r.w)}, {"se", jnum(r.se)}, {"log_n_lo", jnum(r.log_n_lo)},
                          {"log_n_hi", jnum(r.log_n_hi)}, {"w_lo", jnum(r.w_lo)}, {"w_hi", jnum(r.w_hi)}});
        summary["profile"] = rows;
        out << summary.dump(2) << "\n";
        return 0;
      }
      out << "r,w,se,logN_lo,logN_hi,w_lo,w_hi\n";
      for (const auto& r : p.rows)
        out << num(r.r) << "," << num(r.w) << "," << num(r.se) << "," << num(r.log_n_lo) << "," << num(r.log_n_hi)
            << "," << num(r.w_lo) << "," << num(r.w_hi) << "\n";
      if (!summary_path.empty()) {
        std::ofstream f(summary_path);
        if (!f) throw Error("cannot write summary file '" + summary_path + "'");
        f << summary.dump(2) << "\n";
      } else {
        err << summary.dump(2) << "\n";
      }
      return 0;
    }
    if (pr->parsed()) {
      const SetSpec s = spec_from_file(c.spec_path);
      std::optional<Predictor> p;
      if (predictor == "nml") {
        RegretOptions o;
        o.mc = c.mc();
        p = make_nml(s, o);
      } else if (predictor == "ridge") {
        AffineView v = peel_affine(s);
        const auto* e = v.base.as<shape::Ellipsoid>();
        const auto* b = v.base.as<shape::Ball>();
        if ((!e && !b) || v.offset.norm() != 0.0 || (e && e->center.norm() != 0.0) || (b && b->center.norm() != 0.0))
          throw Unsupported("ridge predictor needs a centred ellipsoid comparator, got a " + type_name(s));
        Vector axes = e ? Vector(v.factor * e->axes) : Vector(Vector::Constant(s.dim(), v.factor * b->radius));
        if (!auto_lambda && lam_opt->count() == 0) throw Error("ridge predictor needs --lambda or --auto-lambda");
        const double lam = auto_lambda ? choose_lambda(axes).lambda : lambda;
        p = ridge_predictor(axes, lam);
      } else {
        p = uniform_mixture(net_centers(s, radius));
      }
      const std::vector<Vector> rows = read_rows(input, s.dim());
      const double u = c.unit();
      out << "row";
      for (int i = 1; i <= s.dim(); ++i) out << ",loss_" << i;
      out << ",cumulative,comparator_loss,regret\n";
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const LossRecord rec = regret_on_sequence(*p, s, rows[k]);
        out << k;
        for (int i = 0; i < s.dim(); ++i) out << "," << (rec.per_step.empty() ? "" : num(rec.per_step[i] / u));
        out << "," << num(rec.cumulative / u) << "," << num(rec.comparator_loss / u) << "," << num(rec.regret / u)
            << "\n";
      }
      return 0;
    }
    if (ver->parsed()) {
      vo.seed = c.seed;
      std::vector<std::string> names;
      if (suite == "all") names = suite_names();
      else names = {suite};
      std::vector<SuiteReport> reports;
      for (const auto& n : names) reports.push_back(run_suite(n, vo));
      out << report_json(reports, vo) << "\n";
      err << summary_table(reports);
      const Verdict v = combine(reports);
      return v == Verdict::pass ? 0 : v == Verdict::fail ? 1 : 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace gauss_regret
