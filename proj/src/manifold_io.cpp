#include "ratnear/manifold_io.hpp"

#include "ratnear/error.hpp"

#include <fstream>

namespace ratnear {

using nlohmann::json;

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) return parse_rational(j.dump());
  throw ParseError("expected a number or rational string, got " + j.dump());
}

ManifoldChart chart_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const json& maps_json = j.at("maps");
    if (!maps_json.is_array()) throw ParseError("'maps' must be an array of expression strings");
    if (j.contains("R") && j.at("R").get<std::size_t>() != maps_json.size()) {
      throw ParseError("'R' does not match the number of maps");
    }
    const int smoothness = j.value("smoothness", kAnalyticSmoothness);
    std::vector<Rational> x0;
    if (j.contains("x0")) {
      for (const json& c : j.at("x0")) x0.push_back(rational_from_json(c));
    } else {
      x0.assign(static_cast<std::size_t>(n), Rational(0));
    }
    if (static_cast<int>(x0.size()) != n) throw DimensionError("'x0' must have n entries");
    std::vector<SmoothMap> maps;
    for (const json& m : maps_json) maps.push_back(SmoothMap::parse(m.get<std::string>(), n, smoothness));
    return ManifoldChart(std::move(x0), rational_from_json(j.at("eps0")), std::move(maps));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed manifold definition: ") + e.what());
  }
}

json chart_to_json(const ManifoldChart& chart) {
  json j;
  j["schema"] = "ratnear.manifold/1";
  j["n"] = chart.n();
  j["R"] = chart.R();
  json x0 = json::array();
  for (const Rational& c : chart.x0_exact()) x0.push_back(to_string(c));
  j["x0"] = x0;
  j["eps0"] = to_string(chart.eps0_exact());
  json maps = json::array();
  for (const SmoothMap& f : chart.maps()) maps.push_back(f.to_string());
  j["maps"] = maps;
  j["smoothness"] = chart.smoothness();
  return j;
}

ManifoldChart load_chart(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifold file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("manifold file " + path.string() + " is not valid JSON: " + e.what());
  }
  return chart_from_json(j);
}

void save_chart(const ManifoldChart& chart, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifold file " + path.string());
  out << chart_to_json(chart).dump(2) << "\n";
}

}  // namespace ratnear
