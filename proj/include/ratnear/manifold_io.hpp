#pragma once

#include "ratnear/funcspace.hpp"

#include "json.hpp"

#include <filesystem>

namespace ratnear {

/// Manifold file schema (JSON):
///   {
///     "schema": "ratnear.manifold/1",     optional
///     "n": 2, "R": 2,
///     "x0": ["0", "0"],                   numbers or exact rational strings
///     "eps0": "1/2",
///     "maps": ["x1*x2", "(x1^2 - x2^2)/2"],
///     "smoothness": 64                    optional
///   }
ManifoldChart chart_from_json(const nlohmann::json& j);
nlohmann::json chart_to_json(const ManifoldChart& chart);

ManifoldChart load_chart(const std::filesystem::path& path);
void save_chart(const ManifoldChart& chart, const std::filesystem::path& path);

/// Accepts a JSON number or a string such as "3/5".
Rational rational_from_json(const nlohmann::json& j);

}  // namespace ratnear
