#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gauss_regret/cli.hpp"
#include "gauss_regret/common.hpp"

using namespace gauss_regret;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gauss-regret");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_temp(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "gauss_regret_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p.string();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string l;
  while (std::getline(ss, l)) out.push_back(l);
  return out;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string c;
  while (std::getline(ss, c, ',')) out.push_back(c);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

TEST_CASE("regret subcommand") {
  const std::string seg = write_temp("seg.json", R"({"type":"segment","a":[0],"b":[7.5198277]})");
  const Run r = run({"regret", "--spec", seg});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["method"] == "exact");
  CHECK(j["units"] == "nats");
  CHECK(j["half_width"] == 0.0);
  CHECK(j["value"].get<double>() == Approx(std::log1p(7.5198277 / kSqrtTwoPi)));
  CHECK(j["dim"] == 1);

  const Run bits = run({"regret", "--spec", seg, "--bits"});
  CHECK(nlohmann::json::parse(bits.out)["value"].get<double>() ==
        Approx(std::log1p(7.5198277 / kSqrtTwoPi) / std::log(2.0)));
  CHECK(nlohmann::json::parse(bits.out)["units"] == "bits");

  const Run rep = run({"regret", "--spec", seg, "--repeat-n", "4"});
  CHECK(nlohmann::json::parse(rep.out)["value"].get<double>() == Approx(std::log1p(2.0 * 7.5198277 / kSqrtTwoPi)));
  const Run sig = run({"regret", "--spec", seg, "--sigma", "2"});
  CHECK(nlohmann::json::parse(sig.out)["value"].get<double>() == Approx(std::log1p(0.5 * 7.5198277 / kSqrtTwoPi)));

  const Run q = run({"regret", "--spec", seg, "--method", "quadrature", "--tol", "1e-7"});
  REQUIRE(q.code == 0);
  CHECK(nlohmann::json::parse(q.out)["method"] == "quadrature");

  // Monte Carlo on a set of moderate size (long sets make exp(sup) heavy tailed)
  const std::string shortseg = write_temp("short.json", R"({"type":"segment","a":[0],"b":[1.5]})");
  const Run mc = run({"regret", "--spec", shortseg, "--method", "mc", "--samples", "20000", "--seed", "5"});
  REQUIRE(mc.code == 0);
  const auto mj = nlohmann::json::parse(mc.out);
  CHECK(mj["seed"] == 5);
  CHECK(mj["samples"] == 20000);
  CHECK(std::abs(mj["value"].get<double>() - std::log1p(1.5 / kSqrtTwoPi)) <= 3.0 * mj["half_width"].get<double>());
}

TEST_CASE("regret errors") {
  const std::string seg = write_temp("seg2.json", R"({"type":"segment","a":[0],"b":[1]})");
  CHECK(run({"regret", "--spec", seg, "--tol", "1e-3"}).code == 1);
  CHECK(run({"regret", "--spec", seg, "--sigma", "2", "--repeat-n", "3"}).code == 1);
  CHECK(run({"regret", "--spec", seg, "--sigma", "-1"}).code == 1);
  CHECK(run({"regret", "--spec", seg, "--method", "magic"}).code != 0);
  CHECK(run({"regret", "--spec", seg, "--batches", "4"}).code != 0);
  CHECK(run({"regret"}).code != 0);
  CHECK(run({}).code != 0);
  const Run missing = run({"regret", "--spec", "/nonexistent/spec.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("error:") != std::string::npos);
  const std::string bad = write_temp("bad.json", R"({"type":"ball","center":[0,0],"radius":-2})");
  const Run b = run({"regret", "--spec", bad});
  CHECK(b.code == 1);
  CHECK(b.err.find("radius") != std::string::npos);
  const std::string ell = write_temp("ell.json", R"({"type":"ellipsoid","axes":[2,1]})");
  CHECK(run({"regret", "--spec", ell, "--method", "exact"}).code == 1);
}

TEST_CASE("redundancy subcommand") {
  const std::string two = write_temp("two.json", R"({"type":"finite_points","points":[[0],[2]]})");
  const Run r = run({"redundancy", "--spec", two});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["lower"].get<double>() <= j["exact"]["value"].get<double>() + 1e-9);
  CHECK(j["exact"]["value"].get<double>() <= j["upper"].get<double>() + 1e-9);
  CHECK(j.contains("uniform_mixture"));
}

TEST_CASE("intrinsic subcommand") {
  const std::string box = write_temp("box.json", R"({"type":"box","corner":[0,0,0],"sides":[1,2,3]})");
  const Run r = run({"intrinsic", "--spec", box});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "j,V_j,se");
  const double expect[] = {1, 6, 11, 6};
  for (int k = 0; k <= 3; ++k) {
    const auto c = cells(ls[k + 1]);
    CHECK(std::stoi(c[0]) == k);
    CHECK(std::stod(c[1]) == Approx(expect[k]));
    CHECK(std::stod(c[2]) == 0.0);
  }
  const Run js = run({"intrinsic", "--spec", box, "--format", "json"});
  CHECK(nlohmann::json::parse(js.out)["provenance"] == "exact");
  const std::string ell = write_temp("ell2.json", R"({"type":"ellipsoid","axes":[2,1]})");
  const Run mc = run({"intrinsic", "--spec", ell, "--format", "json", "--samples", "20000"});
  REQUIRE(mc.code == 0);
  CHECK(nlohmann::json::parse(mc.out)["provenance"] == "monte_carlo");
  CHECK(run({"intrinsic", "--spec", box, "--format", "xml"}).code != 0);
}

TEST_CASE("complexity subcommand") {
  const std::string two = write_temp("ten.json", R"({"type":"finite_points","points":[[0],[10]]})");
  const std::string summary = (fs::temp_directory_path() / "gauss_regret_cli_test" / "summary.json").string();
  const Run r = run({"complexity", "--spec", two, "--summary", summary});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  CHECK(ls[0] == "r,w,se,logN_lo,logN_hi,w_lo,w_hi");
  CHECK(ls.size() == 65);
  std::ifstream f(summary);
  const auto j = nlohmann::json::parse(f);
  CHECK(j["r_tilde"][0].get<double>() <= std::sqrt(std::log(2.0)) + 1e-9);
  CHECK(j["r_tilde"][1].get<double>() >= std::sqrt(std::log(2.0)) - 1e-9);
  CHECK(j["inf_forms"]["fixed_point_relation"] == true);
  CHECK(r.err.empty());
  const Run to_err = run({"complexity", "--spec", two, "--radii", "8"});
  CHECK(lines(to_err.out).size() == 9);
  CHECK(nlohmann::json::parse(to_err.err).contains("r_star"));
  const Run js = run({"complexity", "--spec", two, "--format", "json"});
  CHECK(nlohmann::json::parse(js.out)["profile"].size() == 64);
}

TEST_CASE("predict subcommand") {
  const std::string ell = write_temp("pell.json", R"({"type":"ellipsoid","axes":[2,1,0.5]})");
  const std::string input = write_temp("rows.csv", "0.1,0.2,0.3\n# comment\n\n1,-1,2\n");
  const Run r = run({"predict", "--spec", ell, "--predictor", "ridge", "--lambda", "0.5", "--input", input});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "row,loss_1,loss_2,loss_3,cumulative,comparator_loss,regret");
  for (int k = 1; k <= 2; ++k) {
    const auto c = cells(ls[k]);
    REQUIRE(c.size() == 7);
    const double sum = std::stod(c[1]) + std::stod(c[2]) + std::stod(c[3]);
    CHECK(sum == Approx(std::stod(c[4])).epsilon(1e-12));
    CHECK(std::stod(c[4]) - std::stod(c[5]) == Approx(std::stod(c[6])).epsilon(1e-12));
  }
  // the first row lies inside the ellipsoid: comparator loss is 3/2 log 2 pi
  CHECK(std::stod(cells(ls[1])[5]) == Approx(1.5 * std::log(kTwoPi)));

  CHECK(run({"predict", "--spec", ell, "--predictor", "ridge", "--auto-lambda", "--input", input}).code == 0);
  CHECK(run({"predict", "--spec", ell, "--predictor", "ridge", "--input", input}).code == 1);
  CHECK(run({"predict", "--spec", ell, "--predictor", "ridge", "--lambda", "1", "--auto-lambda", "--input", input}).code !=
        0);

  const Run nml = run({"predict", "--spec", ell, "--predictor", "nml", "--input", input, "--samples", "20000"});
  REQUIRE(nml.code == 0);
  const auto nl = lines(nml.out);
  CHECK(cells(nl[1])[1].empty());
  CHECK(std::stod(cells(nl[1])[6]) == Approx(std::stod(cells(nl[2])[6])).epsilon(1e-12));

  const std::string pts = write_temp("ppts.json", R"({"type":"finite_points","points":[[0,0,0],[1,0,0],[5,5,5]]})");
  const Run net = run({"predict", "--spec", pts, "--predictor", "net", "--radius", "0.5", "--input", input});
  REQUIRE(net.code == 0);
  CHECK(lines(net.out).size() == 3);

  const std::string bad_rows = write_temp("bad.csv", "1,2\n");
  const Run bad = run({"predict", "--spec", ell, "--predictor", "ridge", "--lambda", "1", "--input", bad_rows});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("expected 3 values") != std::string::npos);
  const std::string nan_rows = write_temp("nan.csv", "1,x,2\n");
  CHECK(run({"predict", "--spec", ell, "--predictor", "ridge", "--lambda", "1", "--input", nan_rows}).code == 1);
  const std::string shifted = write_temp("shift.json", R"({"type":"ellipsoid","center":[1,0,0],"axes":[2,1,0.5]})");
  CHECK(run({"predict", "--spec", shifted, "--predictor", "ridge", "--lambda", "1", "--input", input}).code == 1);
}

TEST_CASE("verify subcommand") {
  const Run r = run({"verify", "--suite", "volume_sequence", "--trials", "3", "--seed", "1"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "pass");
  CHECK(r.err.find("overall: pass") != std::string::npos);
  CHECK(run({"verify", "--suite", "bogus"}).code == 1);
}

TEST_CASE("same seed, same bytes") {
  const std::string ell = write_temp("det.json", R"({"type":"ellipsoid","axes":[2,1,0.5]})");
  const std::vector<std::vector<std::string>> cmds = {
      {"regret", "--spec", ell, "--method", "mc", "--samples", "20000", "--seed", "9"},
      {"intrinsic", "--spec", ell, "--samples", "20000", "--seed", "9"},
      {"complexity", "--spec", ell, "--samples", "20000", "--seed", "9"},
      {"verify", "--suite", "scaling", "--trials", "3", "--seed", "9"},
  };
  for (const auto& c : cmds) {
    const Run a = run(c), b = run(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
}
