#include "gauss_regret/spec_json.hpp"

#include <fstream>
#include <sstream>

#include "gauss_regret/errors.hpp"

namespace gauss_regret {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError("spec field '" + (path.empty() ? std::string("/") : path) + "': " + msg);
}

const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path, std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Vector vec(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], path + "/" + std::to_string(i));
  return v;
}

std::vector<Vector> points(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of points");
  std::vector<Vector> pts;
  for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(vec(j[i], path + "/" + std::to_string(i)));
  return pts;
}

SetSpec parse(const json& j, const std::string& path);

std::vector<SetSpec> parts(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of specs");
  std::vector<SetSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse(j[i], path + "/" + std::to_string(i)));
  return out;
}

SetSpec build(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const json& t = field(j, path, "type");
  if (!t.is_string()) fail(path + "/type", "expected a string");
  const std::string type = t.get<std::string>();
  auto sub = [&](const char* key) { return path + "/" + key; };
  if (type == "point") return SetSpec::point(vec(field(j, path, "v"), sub("v")));
  if (type == "finite_points") return SetSpec::finite_points(points(field(j, path, "points"), sub("points")));
  if (type == "ball")
    return SetSpec::ball(vec(field(j, path, "center"), sub("center")), number(field(j, path, "radius"), sub("radius")));
  if (type == "box")
    return SetSpec::box(vec(field(j, path, "corner"), sub("corner")), vec(field(j, path, "sides"), sub("sides")));
  if (type == "segment")
    return SetSpec::segment(vec(field(j, path, "a"), sub("a")), vec(field(j, path, "b"), sub("b")));
  if (type == "ellipsoid") {
    Vector axes = vec(field(j, path, "axes"), sub("axes"));
    if (j.contains("center")) return SetSpec::ellipsoid(vec(j.at("center"), sub("center")), axes);
    return SetSpec::ellipsoid(axes);
  }
  if (type == "l1_ball") {
    const json& d = field(j, path, "dim");
    if (!d.is_number_integer()) fail(sub("dim"), "expected an integer");
    return SetSpec::l1_ball(number(field(j, path, "alpha"), sub("alpha")), d.get<int>());
  }
  if (type == "convex_hull") return SetSpec::convex_hull(points(field(j, path, "points"), sub("points")));
  if (type == "scale")
    return SetSpec::scale(number(field(j, path, "factor"), sub("factor")), parse(field(j, path, "inner"), sub("inner")));
  if (type == "translate")
    return SetSpec::translate(vec(field(j, path, "v"), sub("v")), parse(field(j, path, "inner"), sub("inner")));
  if (type == "product") return SetSpec::product(parts(field(j, path, "parts"), sub("parts")));
  if (type == "union") return SetSpec::set_union(parts(field(j, path, "parts"), sub("parts")));
  if (type == "minkowski_sum") return SetSpec::minkowski_sum(parts(field(j, path, "parts"), sub("parts")));
  fail(path + "/type", "unknown type '" + type + "'");
}

SetSpec parse(const json& j, const std::string& path) {
  try {
    return build(j, path);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

json to_array(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_array(const std::vector<Vector>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(to_array(p));
  return a;
}

json to_array(const std::vector<SetSpec>& specs) {
  json a = json::array();
  for (const auto& s : specs) a.push_back(spec_to_json(s));
  return a;
}

}  // namespace

SetSpec spec_from_json(const nlohmann::json& j) { return parse(j, ""); }

SetSpec spec_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("spec syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     e.what());
  }
  return spec_from_json(j);
}

SetSpec spec_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return spec_from_string(ss.str());
}

nlohmann::json spec_to_json(const SetSpec& s) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, shape::Point>) return {{"type", "point"}, {"v", to_array(n.v)}};
        if constexpr (std::is_same_v<T, shape::FinitePoints>)
          return {{"type", "finite_points"}, {"points", to_array(n.points)}};
        if constexpr (std::is_same_v<T, shape::Ball>)
          return {{"type", "ball"}, {"center", to_array(n.center)}, {"radius", n.radius}};
        if constexpr (std::is_same_v<T, shape::Box>)
          return {{"type", "box"}, {"corner", to_array(n.corner)}, {"sides", to_array(n.sides)}};
        if constexpr (std::is_same_v<T, shape::Segment>)
          return {{"type", "segment"}, {"a", to_array(n.a)}, {"b", to_array(n.b)}};
        if constexpr (std::is_same_v<T, shape::Ellipsoid>)
          return {{"type", "ellipsoid"}, {"center", to_array(n.center)}, {"axes", to_array(n.axes)}};
        if constexpr (std::is_same_v<T, shape::L1Ball>) return {{"type", "l1_ball"}, {"alpha", n.alpha}, {"dim", n.dim}};
        if constexpr (std::is_same_v<T, shape::ConvexHull>)
          return {{"type", "convex_hull"}, {"points", to_array(n.points)}};
        if constexpr (std::is_same_v<T, shape::Scale>)
          return {{"type", "scale"}, {"factor", n.factor}, {"inner", spec_to_json(n.inner)}};
        if constexpr (std::is_same_v<T, shape::Translate>)
          return {{"type", "translate"}, {"v", to_array(n.v)}, {"inner", spec_to_json(n.inner)}};
        if constexpr (std::is_same_v<T, shape::Product>) return {{"type", "product"}, {"parts", to_array(n.parts)}};
        if constexpr (std::is_same_v<T, shape::Union>) return {{"type", "union"}, {"parts", to_array(n.parts)}};
        if constexpr (std::is_same_v<T, shape::MinkowskiSum>)
          return {{"type", "minkowski_sum"}, {"parts", to_array(n.parts)}};
      },
      s.node().v);
}

}  // namespace gauss_regret
