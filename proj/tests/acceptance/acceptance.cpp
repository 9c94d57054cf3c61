// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "biasforge/verify.hpp"

using namespace biasforge;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double budget_s;
    std::function<Outcome()> run;
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

const SignChangeSpec kZeroBias{BiasFunction::linear(0.0), NodeSet({0.0})};

Outcome ambiguity() {
    const auto r = ambiguity_demo(1001, 1e-8);
    Outcome o;
    o.pass = r.pass && r.grid.size() == 1001;
    o.detail = "alpha-5/12=" + num(r.alpha - 5.0 / 12) + " beta-1/6=" + num(r.beta - 1.0 / 6) +
               " EB-1/4=" + num(r.b_mean - 0.25) + " sup|p|=" + num(r.p_error) + " sup|q|=" + num(r.q_error) +
               " relation=" + num(r.relation_error);
    return o;
}

Outcome sweep(bool chain) {
    const auto s = chain ? identity_sweep(303, 100, 8, 4, true, 8, 1e-9) : identity_sweep(202, 200, 8, 3, false, 6, 1e-10);
    Outcome o;
    o.pass = s.failures == 0 && s.configurations == (chain ? 100u : 200u);
    o.detail = std::to_string(s.configurations) + " configurations, " + std::to_string(s.checks) +
               " checks, worst error/tolerance " + num(s.worst_ratio);
    if (!s.first_failure.empty()) o.detail += "; first failure: " + s.first_failure;
    return o;
}

Outcome coefficients() {
    RandomSource rng(404);
    double worst_rel = 0.0;
    double worst_vanish = 0.0;
    for (int t = 0; t < 500; ++t) {
        const int k = 1 + t % 6;
        std::vector<double> v;
        while (static_cast<int>(v.size()) < k) {
            const double x = -2.0 + 4.0 * rng.uniform();
            bool ok = true;
            for (double y : v) ok = ok && std::abs(x - y) >= 0.05;
            if (ok) v.push_back(x);
        }
        std::sort(v.begin(), v.end());
        const NodeSet nodes(v);
        for (int j = 0; j <= 6; ++j)
            for (int i = 0; i <= j; ++i) {
                const double a = a_coeff(nodes, i, j, CoeffMethod::power_sum);
                const double b = a_coeff(nodes, i, j, CoeffMethod::symmetric);
                const double scale = std::max(std::abs(a), std::abs(b));
                if (scale > 0) worst_rel = std::max(worst_rel, std::abs(a - b) / scale);
            }
        for (int n = 0; n <= k - 2; ++n) worst_vanish = std::max(worst_vanish, std::abs(divided_power_sum(nodes, n)));
    }
    return {worst_rel <= 1e-9 && worst_vanish <= 1e-9,
            "500 node sets, worst relative gap " + num(worst_rel) + ", worst vanishing sum " + num(worst_vanish)};
}

Outcome fixed_points() {
    const auto r = run_suite("fixed-point", 1, 0);
    Outcome o;
    for (const auto& e : r.entries) {
        if (e.values.count("sup_gap") == 0) continue;
        o.pass = o.pass && e.pass;
        o.detail += (o.detail.empty() ? "" : ", ") + e.name + " " + num(e.values.at("sup_gap"));
    }
    return o;
}

Outcome hat_identity() {
    const Distribution X = uniform(-1.0, 1.0);
    const SignChangeSpec one{BiasFunction::constant(1.0), NodeSet{}};
    const double beta = beta_of(X, one, 2);
    const auto bank = TestFunctionBank::standard(2, 606, 6, 0, 13, -1.0, 1.0).members_of(2);
    Outcome o;
    o.pass = std::abs(beta - 1.0 / 6) <= 1e-12 && bank.size() == 20;
    double worst = 0.0;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const auto r = check_identity_mc(X, one, 2, bank[i], 100000, 6000 + i);
        o.pass = o.pass && r.pass;
        worst = std::max(worst, std::abs(r.z));
    }
    const auto a = check_identity_mc(X, one, 2, bank.back(), 100000, 6019);
    const auto b = check_identity_mc(X, one, 2, bank.back(), 100000, 6019);
    const bool same = a.lhs == b.lhs && a.rhs == b.rhs && a.z == b.z;
    o.pass = o.pass && same;
    o.detail = "beta-1/6=" + num(beta - 1.0 / 6) + ", " + std::to_string(bank.size()) + " functions, max|z| " +
               num(worst) + (same ? ", reruns identical" : ", reruns differ");
    return o;
}

Outcome sampler_agreement() {
    const Distribution U = uniform(-1.0, 1.0);
    const SignChangeSpec xplus{BiasFunction::positive_part(0.0), NodeSet({0.0})};
    const SignChangeSpec xplus_low{BiasFunction::positive_part(0.0), NodeSet({-1.0})};
    const SignChangeSpec sgn{BiasFunction::sign(0.0), NodeSet({0.0})};
    std::vector<std::pair<std::string, Distribution>> laws = {
        {"U[-1,1] x-plus node -1", bias(U, xplus_low).law},
        {"U[-1,1] x-plus node 0", bias(U, xplus).law},
        {"zero bias N(0,1)", bias(normal(0, 1), kZeroBias).law},
        {"equilibrium Exp(1)", bias(exponential(1.0), sgn).law},
        {"U[-1,1] k=0 m=2", bias_km(U, {BiasFunction::constant(1.0), NodeSet{}}, 2).law},
    };
    for (double w : {0.25, 0.5, 1.0}) {
        std::vector<Distribution> comps{half_normal(1.5)};
        std::vector<double> ws{w};
        if (w < 1) comps.push_back(negative_half_normal(1.5)), ws.push_back(1 - w);
        laws.push_back({"zero bias half-normal mixture w=" + num(w), bias(make_mixture(comps, ws), kZeroBias).law});
    }
    const std::size_t n = 100000;
    const double crit = ks_critical_1pct(n);
    Outcome o;
    double worst = 0.0;
    std::uint64_t seed = 700;
    for (const auto& [name, law] : laws) {
        RandomSource rng(seed++);
        const TabulatedCdf cdf(law);
        const double d = ks_statistic(sample(law, rng, n), [&](double x) { return cdf(x); });
        worst = std::max(worst, d);
        if (d >= crit) {
            o.pass = false;
            o.detail += name + " D=" + num(d) + "; ";
        }
    }
    o.detail += std::to_string(laws.size()) + " laws, worst D " + num(worst) + " vs " + num(crit);
    return o;
}

Outcome distance_sanity() {
    const auto e = estimate_first_order(normal(0, 1), kZeroBias, {1, 1, 1, 0}, 100000, 808, Coupling::self);
    const auto b = first_order_bound({0.1, 0.95, 0.02, std::nullopt}, {1, 1, 1, 0});
    const double formula = 1 * 0.1 + 1 * std::abs(1 - 0.95) + 1 * 0.02;
    const double eps = std::numeric_limits<double>::epsilon();
    Outcome o;
    o.pass = e.bound.bound <= 5 * e.bound_se && b.bound == formula && std::abs(b.bound - 0.17) <= 4 * eps;
    o.detail = "self-coupling bound " + num(e.bound.bound) + " (se " + num(e.bound_se) + "), hand case " +
               std::to_string(b.bound);
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "ambiguity example", 1.0, ambiguity},
        {2, "exact identity, k = m", 5.0, [] { return sweep(false); }},
        {3, "exact identity, k < m chains", 10.0, [] { return sweep(true); }},
        {4, "coefficient equivalence", 1.0, coefficients},
        {5, "fixed points", 10.0, fixed_points},
        {6, "second-order Taylor identity", 30.0, hat_identity},
        {7, "sampler and density agreement", 60.0, sampler_agreement},
        {8, "distance bound sanity", 30.0, distance_sanity},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = s < c.budget_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("%s criterion %d: %s (%.2f s of %.0f s) %s%s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(), s,
                    c.budget_s, o.detail.c_str(), in_time ? "" : " [over time budget]");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
