#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "biasforge/verify.hpp"

namespace biasforge {

/// {"family": name, "params": {...}}, {"atoms": [[x, p], ...]},
/// {"samples": [...]}, {"csv": path} (one column of samples) or
/// {"mixture": [{"weight": w, "dist": {...}}, ...]}.
Distribution parse_distribution(std::string_view json_text);

/// Built-in names: "identity" (B = 1), "x", "x-plus", "x-mean", "sign",
/// "x-plus(a)", "sign(x-a)", "x-a", or a piecewise polynomial
/// {"pieces": [{"interval": [l, r], "coeffs": [c0, c1, ...]}]} with
/// coefficients in powers of x and null for an infinite end.
/// X is needed only for "x-mean".
BiasFunction parse_bias(std::string_view text, const Distribution* X = nullptr);

/// JSON array of node locations.
std::vector<double> parse_nodes(std::string_view json_text);

/// {"m": m, "B": [{"bias": ..., "nodes": [...]}, ...]}; entry j is B_j.
SteinOperator parse_operator(std::string_view json_text, const Distribution* X = nullptr);

/// Built-in bias names with a short description each.
struct BiasCatalogEntry {
    std::string name;
    std::string description;
};
const std::vector<BiasCatalogEntry>& bias_catalog();

std::string catalog_json();
std::string transform_json(const BiasedDistribution& law, int k, int m);
std::string suite_json(const SuiteReport& report);
std::string fixed_point_json(const FixedPointReport& report);
/// Machine-readable error object {"error": code, "message": text}.
std::string error_json(std::string_view code, std::string_view message);

/// Two-column CSV with a header line; values printed with 17 significant digits.
std::string csv_table(const std::string& a, const std::string& b, const std::vector<double>& x,
                      const std::vector<double>& y);
std::string csv_column(const std::string& name, const std::vector<double>& x);

}  // namespace biasforge
