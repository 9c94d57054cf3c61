#include "json_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <regex>
#include <sstream>

#include "biasforge/errors.hpp"

namespace biasforge {
namespace detail {
namespace {

double number(const json& j, std::string_view what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_null()) fail(ErrorCode::invalid_argument, std::string(what) + " is missing");
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    fail(ErrorCode::invalid_argument, std::string(what) + " must be a number, got " + j.dump());
}

double param(const json& params, const std::string& name, const std::string& family) {
    if (!params.is_object() || !params.contains(name))
        fail(ErrorCode::invalid_argument, "family '" + family + "' needs parameter '" + name + "'");
    return number(params.at(name), family + "." + name);
}

std::vector<double> read_csv_column(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::invalid_argument, "cannot open sample file '" + path + "'");
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const std::string cell = line.substr(first, line.find(',', first) - first);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
        } catch (const std::exception&) {
            if (out.empty()) continue;  // header line
            fail(ErrorCode::invalid_argument, "bad sample '" + cell + "' in '" + path + "'");
        }
    }
    return out;
}

const std::regex kNumber(R"(\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*)");

std::optional<double> shifted(const std::string& s, const std::string& head, const std::string& tail) {
    // head "(x-" a ")" style: returns a, with "x" alone meaning 0
    if (s.rfind(head, 0) != 0 || s.size() < head.size() + tail.size() ||
        s.compare(s.size() - tail.size(), tail.size(), tail) != 0)
        return std::nullopt;
    std::string mid = s.substr(head.size(), s.size() - head.size() - tail.size());
    std::smatch m;
    if (mid.empty()) return 0.0;
    if (std::regex_match(mid, m, kNumber)) return std::stod(m[1]);
    return std::nullopt;
}

}  // namespace

json parse_json(std::string_view text, std::string_view what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::invalid_argument, "cannot parse " + std::string(what) + " as JSON: " + e.what());
    }
}

Distribution distribution_from(const json& j) {
    if (j.is_string()) return distribution_from(parse_json(j.get<std::string>(), "distribution"));
    if (!j.is_object()) fail(ErrorCode::invalid_argument, "distribution must be a JSON object");
    if (j.contains("family")) {
        const std::string f = j.at("family").get<std::string>();
        const json params = j.value("params", json::object());
        if (f == "uniform") return uniform(param(params, "lo", f), param(params, "hi", f));
        if (f == "normal") return normal(param(params, "mean", f), param(params, "sd", f));
        if (f == "exponential") return exponential(param(params, "rate", f));
        if (f == "half_normal") return half_normal(param(params, "sigma", f));
        if (f == "negative_half_normal") return negative_half_normal(param(params, "sigma", f));
        if (f == "dirac") return dirac(param(params, "x", f));
        fail(ErrorCode::invalid_argument, "unknown family '" + f + "'");
    }
    if (j.contains("atoms")) {
        std::vector<Atom> atoms;
        for (const auto& a : j.at("atoms")) {
            if (!a.is_array() || a.size() != 2) fail(ErrorCode::invalid_argument, "atoms are [x, p] pairs");
            atoms.push_back({number(a[0], "atom location"), number(a[1], "atom mass")});
        }
        return discrete(std::move(atoms));
    }
    if (j.contains("samples")) {
        std::vector<double> xs;
        for (const auto& x : j.at("samples")) xs.push_back(number(x, "sample"));
        return empirical(std::move(xs));
    }
    if (j.contains("csv")) return empirical(read_csv_column(j.at("csv").get<std::string>()));
    if (j.contains("mixture")) {
        std::vector<Distribution> comps;
        std::vector<double> weights;
        for (const auto& c : j.at("mixture")) {
            weights.push_back(number(c.value("weight", json()), "mixture weight"));
            comps.push_back(distribution_from(c.at("dist")));
        }
        return make_mixture(std::move(comps), std::move(weights));
    }
    fail(ErrorCode::invalid_argument, "distribution needs one of family, atoms, samples, csv or mixture");
}

BiasFunction bias_from(const json& j, const Distribution* X) {
    if (j.is_number()) return BiasFunction::constant(j.get<double>());
    if (j.is_string()) {
        std::string s;
        for (char c : j.get<std::string>())
            if (c != ' ') s += c;
        if (!s.empty() && (s[0] == '{' || s[0] == '[')) return bias_from(parse_json(s, "bias"), X);
        if (s == "identity" || s == "one" || s == "1") return BiasFunction::constant(1.0);
        if (s == "x") return BiasFunction::linear(0.0);
        if (s == "x-plus") return BiasFunction::positive_part(0.0);
        if (s == "sign") return BiasFunction::sign(0.0);
        if (s == "x-mean") {
            require(X != nullptr, "x-mean needs the distribution");
            return BiasFunction::linear(moment(*X, 1));
        }
        if (auto a = shifted(s, "x-plus(", ")")) return BiasFunction::positive_part(*a);
        if (auto a = shifted(s, "sign(x", ")")) return BiasFunction::sign(-*a);
        if (auto a = shifted(s, "(x", ")+")) return BiasFunction::positive_part(-*a);
        if (auto a = shifted(s, "x", "")) return BiasFunction::linear(-*a);
        fail(ErrorCode::invalid_argument, "unknown bias '" + s + "'");
    }
    if (j.is_object() && j.contains("pieces")) {
        std::vector<PolyPiece> pieces;
        for (const auto& p : j.at("pieces")) {
            const auto& iv = p.at("interval");
            if (!iv.is_array() || iv.size() != 2) fail(ErrorCode::invalid_argument, "interval is [l, r]");
            const double lo = iv[0].is_null() ? -kInf : number(iv[0], "interval end");
            const double hi = iv[1].is_null() ? kInf : number(iv[1], "interval end");
            std::vector<double> coeffs;
            for (const auto& c : p.at("coeffs")) coeffs.push_back(number(c, "coefficient"));
            pieces.push_back({lo, hi, 0.0, Polynomial(std::move(coeffs))});
        }
        return BiasFunction::piecewise(PiecewisePolynomial(std::move(pieces)), j.value("name", "piecewise"));
    }
    fail(ErrorCode::invalid_argument, "bias must be a name or a pieces object");
}

std::vector<double> nodes_from(const json& j) {
    if (j.is_string()) return nodes_from(parse_json(j.get<std::string>(), "nodes"));
    if (j.is_number()) return {j.get<double>()};
    if (!j.is_array()) fail(ErrorCode::invalid_argument, "nodes must be a JSON array");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(number(x, "node"));
    return out;
}

SteinOperator operator_from(const json& j, const Distribution* X) {
    if (j.is_string()) return operator_from(parse_json(j.get<std::string>(), "operator"), X);
    SteinOperator op;
    op.m = j.at("m").get<int>();
    for (const auto& b : j.at("B"))
        op.B.push_back({bias_from(b.at("bias"), X), NodeSet(nodes_from(b.value("nodes", json::array())))});
    op.check();
    return op;
}

json to_json(const BiasedDistribution& law, int k, int m) {
    json steps = json::array();
    for (std::size_t i = 0; i < law.recipe.steps.size(); ++i)
        steps.push_back({{"step", law.recipe.steps[i]},
                         {"normalizer", i < law.recipe.step_normalizers.size() ? json(law.recipe.step_normalizers[i])
                                                                                : json()}});
    json out = {{"law", law.law.describe()},
                {"k", k},
                {"m", m},
                {"alpha", law.alpha},
                {"beta", law.beta ? json(*law.beta) : json()},
                {"recipe",
                 {{"description", law.recipe.description},
                  {"seed", law.recipe.seed ? json(law.recipe.seed->describe()) : json()},
                  {"beta_exponents", law.recipe.beta_exponents},
                  {"nodes", law.recipe.nodes},
                  {"steps", steps}}}};
    const Support s = law.law.effective_support();
    out["support"] = {std::isfinite(s.lo) ? json(s.lo) : json(), std::isfinite(s.hi) ? json(s.hi) : json()};
    return out;
}

json to_json(const SuiteReport& report) {
    json entries = json::array();
    for (const auto& e : report.entries) {
        json values = json::object();
        for (const auto& [k, v] : e.values) values[k] = std::isfinite(v) ? json(v) : json(std::to_string(v));
        entries.push_back({{"name", e.name}, {"pass", e.pass}, {"values", values}, {"note", e.note}});
    }
    return {{"suite", report.suite}, {"seed", report.seed}, {"n", report.n}, {"pass", report.pass()},
            {"entries", entries}};
}

json to_json(const FixedPointReport& r) {
    return {{"mode", r.mode},         {"residual", r.residual}, {"worst_at", r.worst_at},
            {"alpha", r.alpha},       {"probes", r.probes},     {"pass", r.pass}};
}

json to_json(const DistanceBound& b) {
    return {{"order", b.order},
            {"c", {{"c0", b.c.c0}, {"c1", b.c.c1}, {"c2", b.c.c2}, {"c3", b.c.c3}}},
            {"coupling_gap", b.coupling_gap},
            {"alpha_dev", b.alpha_dev},
            {"residuals", b.residuals},
            {"residual_factors", b.residual_factors},
            {"bound", b.bound}};
}

json to_json(const BoundEstimate& e) {
    json residuals = json::array();
    for (const auto& r : e.residuals) residuals.push_back({{"value", r.value}, {"se", r.se}});
    return {{"bound", to_json(e.bound)},
            {"bound_se", e.bound_se},
            {"coupling_gap", {{"value", e.coupling_gap.value}, {"se", e.coupling_gap.se}}},
            {"alpha", {{"value", e.alpha.value}, {"se", e.alpha.se}}},
            {"residuals", residuals},
            {"n", e.n},
            {"coupling", std::string(to_string(e.coupling))},
            {"x_seed", e.x_seed},
            {"transform_seed", e.transform_seed}};
}

}  // namespace detail

Distribution parse_distribution(std::string_view text) {
    return detail::distribution_from(detail::parse_json(text, "distribution"));
}

BiasFunction parse_bias(std::string_view text, const Distribution* X) {
    return detail::bias_from(detail::json(std::string(text)), X);
}

std::vector<double> parse_nodes(std::string_view text) {
    return detail::nodes_from(detail::parse_json(text, "nodes"));
}

SteinOperator parse_operator(std::string_view text, const Distribution* X) {
    return detail::operator_from(detail::parse_json(text, "operator"), X);
}

const std::vector<BiasCatalogEntry>& bias_catalog() {
    static const std::vector<BiasCatalogEntry> entries = {
        {"identity", "B = 1"},
        {"x", "B(x) = x"},
        {"x-a", "B(x) = x - a for a number a"},
        {"x-plus", "B(x) = max(x, 0)"},
        {"x-plus(a)", "B(x) = max(x - a, 0)"},
        {"sign", "B(x) = sign(x)"},
        {"sign(x-a)", "B(x) = sign(x - a)"},
        {"x-mean", "B(x) = x - E[X]"},
        {"{\"pieces\": [...]}", "piecewise polynomial, coefficients in powers of x"},
    };
    return entries;
}

std::string catalog_json() {
    detail::json dists = detail::json::array();
    for (const auto& e : catalog()) dists.push_back({{"family", e.family}, {"params", e.params}, {"description", e.description}});
    dists.push_back({{"family", "atoms"}, {"params", {"atoms"}}, {"description", "discrete law {\"atoms\": [[x, p], ...]}"}});
    dists.push_back({{"family", "samples"}, {"params", {"samples"}}, {"description", "empirical law of listed samples"}});
    dists.push_back({{"family", "csv"}, {"params", {"csv"}}, {"description", "empirical law from a one-column CSV"}});
    dists.push_back({{"family", "mixture"}, {"params", {"mixture"}}, {"description", "[{\"weight\": w, \"dist\": {...}}, ...]"}});
    detail::json biases = detail::json::array();
    for (const auto& e : bias_catalog()) biases.push_back({{"name", e.name}, {"description", e.description}});
    return detail::json{{"distributions", dists}, {"biases", biases}}.dump(2);
}

std::string transform_json(const BiasedDistribution& law, int k, int m) { return detail::to_json(law, k, m).dump(2); }
std::string suite_json(const SuiteReport& report) { return detail::to_json(report).dump(2); }
std::string fixed_point_json(const FixedPointReport& report) { return detail::to_json(report).dump(2); }

std::string error_json(std::string_view code, std::string_view message) {
    return detail::json{{"error", code}, {"message", message}}.dump();
}

std::string csv_table(const std::string& a, const std::string& b, const std::vector<double>& x,
                      const std::vector<double>& y) {
    require(x.size() == y.size(), "csv columns differ in length");
    std::ostringstream s;
    s << std::setprecision(17) << a << ',' << b << '\n';
    for (std::size_t i = 0; i < x.size(); ++i) s << x[i] << ',' << y[i] << '\n';
    return s.str();
}

std::string csv_column(const std::string& name, const std::vector<double>& x) {
    std::ostringstream s;
    s << std::setprecision(17) << name << '\n';
    for (double v : x) s << v << '\n';
    return s.str();
}

}  // namespace biasforge
