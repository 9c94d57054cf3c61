#include "biasforge/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "biasforge/errors.hpp"
#include "json_io.hpp"

namespace biasforge {
namespace {

using detail::json;

constexpr std::uint64_t kDefaultSeed = 20240101;

struct Options {
    std::string dist;
    std::string bias;
    std::string nodes = "[]";
    std::string op;
    std::string route = "spline";
    std::string out;
    std::optional<int> k;
    std::optional<int> m;
    std::optional<std::uint64_t> seed;
    std::size_t n = 100000;
    std::vector<double> grid;
    std::string suite;
    std::string spec;
    std::string csv;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("BIASFORGE_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        fail(ErrorCode::invalid_argument, std::string("BIASFORGE_SEED is not an unsigned integer: ") + env);
    }
    return kDefaultSeed;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) fail(ErrorCode::invalid_argument, "cannot write '" + path + "'");
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

BiasOptions bias_options(const Options& o) {
    BiasOptions b;
    if (o.route == "spline")
        b.route = DensityRoute::spline;
    else if (o.route == "grid")
        b.route = DensityRoute::iterated_grid;
    else
        fail(ErrorCode::invalid_argument, "route must be spline or grid");
    return b;
}

Distribution base_law(const Options& o) {
    if (o.dist.empty()) fail(ErrorCode::invalid_argument, "--dist is required");
    return parse_distribution(o.dist);
}

struct Built {
    BiasedDistribution law;
    int k;
    int m;
};

// The law requested by --bias/--nodes/--m or --operator; nullopt for X itself.
std::optional<Built> build(const Distribution& X, const Options& o) {
    const BiasOptions options = bias_options(o);
    if (!o.op.empty()) {
        if (!o.bias.empty()) fail(ErrorCode::invalid_argument, "--operator and --bias are exclusive");
        const SteinOperator op = parse_operator(o.op, &X);
        return Built{higher_order_transform(X, op, options), -1, op.m};
    }
    if (o.bias.empty()) return std::nullopt;
    const SignChangeSpec spec{parse_bias(o.bias, &X), NodeSet(parse_nodes(o.nodes))};
    if (o.k && *o.k != spec.k())
        fail(ErrorCode::invalid_argument,
             "--k " + std::to_string(*o.k) + " does not match " + std::to_string(spec.k()) + " node(s)");
    const int m = o.m.value_or(spec.k());
    return Built{bias_km(X, spec, m, options), spec.k(), m};
}

int cmd_catalog(std::ostream& out) {
    out << catalog_json() << '\n';
    return 0;
}

int cmd_transform(const Options& o, std::ostream& out) {
    const Distribution X = base_law(o);
    const auto b = build(X, o);
    if (!b) fail(ErrorCode::invalid_argument, "--bias or --operator is required");
    json j = detail::to_json(b->law, b->k, b->m);
    if (b->k < 0) j.erase("k");
    emit(o.out, j.dump(2), out);
    return 0;
}

int cmd_sample(const Options& o, std::ostream& out) {
    if (o.n < 1) fail(ErrorCode::invalid_argument, "--n must be at least 1");
    const Distribution X = base_law(o);
    const auto b = build(X, o);
    RandomSource rng = RandomSource(resolve_seed(o.seed)).derive(kTransformStream);
    const auto xs = sample(b ? b->law.law : X, rng, o.n);
    emit(o.out, csv_column("x", xs), out);
    return 0;
}

int cmd_density(const Options& o, std::ostream& out) {
    if (o.grid.size() != 3) fail(ErrorCode::invalid_argument, "--grid takes lo hi points");
    const double lo = o.grid[0];
    const double hi = o.grid[1];
    const double points = o.grid[2];
    if (!(points >= 2) || points != std::floor(points) || !(hi > lo))
        fail(ErrorCode::invalid_argument, "--grid needs lo < hi and an integer number of points >= 2");
    const Distribution X = base_law(o);
    const auto b = build(X, o);
    const Distribution& law = b ? b->law.law : X;
    if (!law.has_density()) fail(ErrorCode::invalid_argument, "the requested law has no density");
    const int n = static_cast<int>(points);
    std::vector<double> t(n), p(n);
    for (int i = 0; i < n; ++i) {
        t[i] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
        p[i] = law.density(t[i]);
    }
    emit(o.out, csv_table("t", "p", t, p), out);
    return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
    if (o.n < 2) fail(ErrorCode::invalid_argument, "--n must be at least 2");
    const SuiteReport r = run_suite(o.suite, resolve_seed(o.seed), o.n);
    emit(o.out, suite_json(r), out);
    return r.pass() ? 0 : 1;
}

BoundConstants constants_from(const json& j, int order) {
    BoundConstants c;
    if (j.is_array()) {
        const std::size_t want = order == 1 ? 3 : 4;
        if (j.size() != want)
            fail(ErrorCode::invalid_argument, "constants needs " + std::to_string(want) + " entries");
        c.c0 = j[0].get<double>();
        c.c1 = j[1].get<double>();
        c.c2 = j[2].get<double>();
        if (want == 4) c.c3 = j[3].get<double>();
    } else if (j.is_object()) {
        c.c0 = j.value("c0", 0.0);
        c.c1 = j.value("c1", 0.0);
        c.c2 = j.value("c2", 0.0);
        c.c3 = j.value("c3", 0.0);
    } else {
        fail(ErrorCode::invalid_argument, "constants must be an array or an object");
    }
    if (c.c0 < 0 || c.c1 < 0 || c.c2 < 0 || c.c3 < 0) fail(ErrorCode::invalid_argument, "constants must be nonnegative");
    return c;
}

std::string read_spec(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && s[first] == '{') return s;
    std::ifstream f(s);
    if (!f) fail(ErrorCode::invalid_argument, "cannot open experiment spec '" + s + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

int cmd_distance(const Options& o, std::ostream& out) {
    if (o.spec.empty()) fail(ErrorCode::invalid_argument, "--spec is required");
    const json spec = detail::parse_json(read_spec(o.spec), "experiment spec");
    try {
        const Distribution X = detail::distribution_from(spec.at("test_distribution"));
        const json& op = spec.at("operator");
        const int order = op.value("order", 1);
        const BoundConstants c = constants_from(spec.at("constants"), order);
        const long long n = spec.value("n_samples", 100000LL);
        if (n < 1) fail(ErrorCode::invalid_argument, "n_samples must be at least 1");
        const std::uint64_t seed =
            spec.contains("seed") ? spec.at("seed").get<std::uint64_t>() : resolve_seed(o.seed);
        const Coupling coupling = parse_coupling(spec.value("coupling", std::string("quantile")));

        BoundEstimate est;
        std::optional<FixedPointReport> fp;
        std::optional<Distribution> target;
        if (spec.contains("target") && !spec.at("target").is_null())
            target = detail::distribution_from(spec.at("target"));
        if (order == 1) {
            const SignChangeSpec s{detail::bias_from(op.at("bias"), &X),
                                   NodeSet(detail::nodes_from(op.value("nodes", json::array())))};
            std::optional<double> f_at_node;
            if (spec.contains("f_at_node")) f_at_node = spec.at("f_at_node").get<double>();
            est = estimate_first_order(X, s, c, static_cast<std::size_t>(n), seed, coupling, f_at_node);
            if (target && target->has_density()) fp = fixed_point_check(*target, s);
        } else if (order == 2) {
            const BiasFunction B0 = detail::bias_from(op.at("B0"), &X);
            const double a = op.value("a", 0.0);
            const SignChangeSpec B1{detail::bias_from(op.at("B1"), &X), NodeSet({a})};
            est = estimate_second_order(X, B0, B1, c, static_cast<std::size_t>(n), seed, coupling);
            if (target && target->has_density()) fp = fixed_point_check(*target, B0, B1);
        } else {
            fail(ErrorCode::invalid_argument, "operator order must be 1 or 2");
        }

        json report = detail::to_json(est);
        report["test_distribution"] = X.describe();
        report["target"] = target ? json(target->describe()) : json();
        report["target_fixed_point"] = fp ? detail::to_json(*fp) : json();
        report["seed"] = seed;
        emit(o.out, report.dump(2), out);

        if (!o.csv.empty()) {
            std::ostringstream s;
            s.precision(17);
            s << "ingredient,value,se\n";
            s << "coupling_gap," << est.coupling_gap.value << ',' << est.coupling_gap.se << '\n';
            s << "alpha," << est.alpha.value << ',' << est.alpha.se << '\n';
            const char* names1[] = {"b_mean"};
            const char* names2[] = {"slope_residual", "level_residual"};
            for (std::size_t i = 0; i < est.residuals.size(); ++i)
                s << (order == 1 ? names1[0] : names2[i]) << ',' << est.residuals[i].value << ','
                  << est.residuals[i].se << '\n';
            s << "bound," << est.bound.bound << ',' << est.bound_se << '\n';
            emit(o.csv, s.str(), out);
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::invalid_argument, std::string("experiment spec: ") + e.what());
    }
    return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized biased transforms: construction, sampling, densities and checks", "biasforge"};
    app.require_subcommand(1);
    Options o;

    auto law_flags = [&](CLI::App* c) {
        c->add_option("--dist", o.dist, "distribution JSON");
        c->add_option("--bias", o.bias, "bias name or pieces JSON");
        c->add_option("--nodes", o.nodes, "sign-change nodes as a JSON array");
        c->add_option("--m", o.m, "order m (defaults to the number of nodes)");
        c->add_option("--operator", o.op, "Stein operator JSON {\"m\": m, \"B\": [...]}");
        c->add_option("--route", o.route, "density route for k >= 2: spline or grid");
        c->add_option("--out", o.out, "output file (stdout when omitted)");
    };

    app.add_subcommand("catalog", "list distributions and bias functions");
    auto* transform = app.add_subcommand("transform", "construct a transform and print its JSON report");
    law_flags(transform);
    auto* km = app.add_subcommand("bias-km", "construct X^(B,m) and report its chain");
    law_flags(km);
    km->add_option("--k", o.k, "number of sign changes")->required();
    auto* samp = app.add_subcommand("sample", "draw samples as a one-column CSV");
    law_flags(samp);
    samp->add_option("--n", o.n, "number of draws");
    samp->add_option("--seed", o.seed, "seed (falls back to BIASFORGE_SEED)");
    auto* dens = app.add_subcommand("density", "tabulate a density as CSV t,p");
    law_flags(dens);
    dens->add_option("--grid", o.grid, "lo hi points")->expected(3)->required();
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("--suite", o.suite, "exact, mc, ambi or fixed-point")->required();
    ver->add_option("--seed", o.seed, "seed (falls back to BIASFORGE_SEED)");
    ver->add_option("--n", o.n, "Monte Carlo draws per report");
    ver->add_option("--out", o.out, "report file (stdout when omitted)");
    auto* dist = app.add_subcommand("distance", "estimate a distance bound from an experiment spec");
    dist->add_option("--spec", o.spec, "experiment JSON file or inline JSON")->required();
    dist->add_option("--seed", o.seed, "seed when the spec has none");
    dist->add_option("--out", o.out, "report file (stdout when omitted)");
    dist->add_option("--csv", o.csv, "per-ingredient estimates CSV");

    std::vector<char*> argv;
    std::string name = "biasforge";
    argv.push_back(name.data());
    for (auto& a : args) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << error_json("InvalidArgument", e.what()) << '\n';
        return 2;
    }

    try {
        if (app.got_subcommand("catalog")) return cmd_catalog(out);
        if (transform->parsed()) return cmd_transform(o, out);
        if (km->parsed()) return cmd_transform(o, out);
        if (samp->parsed()) return cmd_sample(o, out);
        if (dens->parsed()) return cmd_density(o, out);
        if (ver->parsed()) return cmd_verify(o, out);
        if (dist->parsed()) return cmd_distance(o, out);
    } catch (const Error& e) {
        err << error_json(to_string(e.code()), e.what()) << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << error_json("InternalError", e.what()) << '\n';
        return 1;
    }
    return 1;
}

}  // namespace biasforge
