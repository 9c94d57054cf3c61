#include "biasforge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "biasforge/errors.hpp"

namespace biasforge {
namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

struct MeanSe {
    double mean;
    double se;
};

MeanSe mean_se(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    long double sum = 0.0L;
    for (double x : v) sum += x;
    const double mean = static_cast<double>(sum / n);
    long double ss = 0.0L;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(static_cast<double>(ss / (n - 1))) : 0.0;
    return {mean, sd / std::sqrt(n)};
}

// R_F and L_F for F with k nodes and order m.
std::pair<Polynomial, Polynomial> correction_terms(const SignChangeSpec& spec, int m, const BankFunction& F) {
    std::vector<double> derivs;
    for (int i = spec.k(); i < m; ++i) derivs.push_back(F.derivative(i, 0.0));
    Polynomial R = build_RF(derivs, spec.nodes, m);
    Polynomial L = spec.nodes.empty() ? Polynomial{} : lagrange(spec.nodes, [&](double x) { return F(x); });
    return {std::move(R), std::move(L)};
}

std::string describe(const Distribution& X, const SignChangeSpec& spec, int m, const BankFunction& F) {
    std::ostringstream s;
    s << X.describe() << ", B=" << spec.B.name() << ", k=" << spec.k() << ", m=" << m << ", F=" << F.name;
    return s.str();
}

std::string monomial_name(int d) {
    if (d == 0) return "1";
    if (d == 1) return "x";
    return "x^" + std::to_string(d);
}

}  // namespace

// ------------------------------------------------------------------- the bank

BankFunction TestFunctionBank::monomial(int degree) {
    require(degree >= 0, "monomial degree must be nonnegative");
    return {monomial_name(degree), "monomial", kSmooth, PiecewisePolynomial::global(Polynomial::monomial(degree))};
}

BankFunction TestFunctionBank::piecewise_linear(std::vector<double> knots, std::vector<double> slopes,
                                                double value_at_first) {
    require(!knots.empty(), "piecewise-linear function needs a knot");
    require(slopes.size() == knots.size() + 1, "need one slope per linear segment");
    require(std::is_sorted(knots.begin(), knots.end()) &&
                std::adjacent_find(knots.begin(), knots.end()) == knots.end(),
            "knots must be strictly increasing");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<PolyPiece> pieces;
    pieces.push_back({-inf, knots[0], knots[0], Polynomial({value_at_first, slopes[0]})});
    double v = value_at_first;
    std::ostringstream name;
    name << "pl(";
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const double hi = i + 1 < knots.size() ? knots[i + 1] : inf;
        pieces.push_back({knots[i], hi, knots[i], Polynomial({v, slopes[i + 1]})});
        if (i + 1 < knots.size()) v += slopes[i + 1] * (knots[i + 1] - knots[i]);
        name << (i ? "," : "") << fmt(knots[i]);
    }
    name << ")";
    return {name.str(), "piecewise-linear", 1, PiecewisePolynomial(std::move(pieces))};
}

BankFunction TestFunctionBank::bump(double center, double width, int m, double height) {
    require(width > 0.0 && m >= 0, "bump needs a positive width and m >= 0");
    const Polynomial base({1.0, 0.0, -1.0 / (width * width)});
    Polynomial p = Polynomial::constant(height);
    for (int i = 0; i <= m; ++i) p = p * base;
    std::ostringstream name;
    name << "bump(" << fmt(center) << "," << fmt(width) << ",m=" << m << ")";
    return {name.str(), "bump", m + 1,
            PiecewisePolynomial({PolyPiece{center - width, center + width, center, std::move(p)}})};
}

TestFunctionBank TestFunctionBank::standard(int m, std::uint64_t seed, int d_max, int n_piecewise, int n_bumps,
                                            double lo, double hi) {
    TestFunctionBank bank;
    for (int d = 0; d <= d_max; ++d) bank.add(monomial(d));
    RandomSource rng(seed);
    auto u = [&](double a, double b) { return a + (b - a) * rng.uniform(); };
    for (int i = 0; i < n_piecewise; ++i) {
        const int nk = 1 + static_cast<int>(rng.uniform() * 5);
        std::vector<double> knots;
        while (static_cast<int>(knots.size()) < nk) {
            const double x = u(lo, hi);
            bool ok = true;
            for (double y : knots) ok = ok && std::abs(x - y) > 1e-3;
            if (ok) knots.push_back(x);
        }
        std::sort(knots.begin(), knots.end());
        std::vector<double> slopes;
        for (int j = 0; j <= nk; ++j) slopes.push_back(u(-2.0, 2.0));
        bank.add(piecewise_linear(std::move(knots), std::move(slopes), u(-1.0, 1.0)));
    }
    for (int i = 0; i < n_bumps; ++i) bank.add(bump(u(lo, hi), u(0.3, 1.5), std::max(m, 0)));
    return bank;
}

std::vector<BankFunction> TestFunctionBank::members_of(int m) const {
    std::vector<BankFunction> out;
    for (const auto& f : members_)
        if (f.smoothness >= m) out.push_back(f);
    return out;
}

// ------------------------------------------------------------ identity checks

IdentityReport check_identity_exact(const Distribution& X, const SignChangeSpec& spec, int m, const BankFunction& F,
                                    double tolerance, double coefficient_scale) {
    require(X.is_discrete(), "the exact route needs a discrete X");
    IdentityReport r;
    r.description = describe(X, spec, m, F);
    r.tolerance = tolerance;
    const auto [R, L] = correction_terms(spec, m, F);
    long double lhs = 0.0L;
    long double scale = 0.0L;
    for (const auto& a : X.atoms()) {
        const double b = spec.B(a.x);
        const double f = F(a.x);
        const double rv = R(a.x);
        const double lv = L(a.x);
        lhs += static_cast<long double>(a.p) * b * ((static_cast<long double>(f) - rv) - lv);
        scale += static_cast<long double>(a.p) * std::abs(b) * (std::abs(f) + std::abs(rv) + std::abs(lv));
    }
    r.lhs = static_cast<double>(lhs);

    const BiasedDistribution law = bias_km(X, spec, m);
    const double c = (spec.k() == m ? law.alpha : *law.beta) * coefficient_scale;
    const PiecewisePolynomial G = F.f.derivative(m);
    double expectation;
    if (law.law.is_discrete()) {
        r.method = "exact-atoms";
        long double s = 0.0L;
        for (const auto& a : law.law.atoms()) s += static_cast<long double>(a.p) * G(a.x);
        expectation = static_cast<double>(s);
    } else if (auto g = G.as_polynomial()) {
        r.method = "exact-atoms";
        const auto mom = moments(law.law, std::max(g->degree(), 0));
        long double s = 0.0L;
        for (int i = 0; i <= g->degree(); ++i) s += static_cast<long double>(g->coefficient(i)) * mom[static_cast<std::size_t>(i)];
        expectation = static_cast<double>(s);
    } else {
        r.method = "quadrature";
        expectation = expect(law.law, [&](double x) { return G(x); }, {}, G.breakpoints());
    }
    r.rhs = c * expectation;
    r.scale = std::max({static_cast<double>(scale), std::abs(r.lhs), std::abs(r.rhs)});
    r.pass = std::abs(r.lhs - r.rhs) <= tolerance * r.scale;
    return r;
}

IdentityReport check_identity_mc(const Distribution& X, const SignChangeSpec& spec, int m, const BankFunction& F,
                                 std::size_t n, std::uint64_t seed, const BiasOptions& options,
                                 const std::optional<Distribution>& transform_override) {
    require(F.smoothness >= m, "F must belong to F^m");
    require(n >= 2, "need at least two samples");
    IdentityReport r;
    r.method = "monte-carlo";
    r.description = describe(X, spec, m, F);
    r.tolerance = kZThreshold;
    r.n = n;
    const RandomSource root(seed);
    RandomSource rx = root.derive(kSampleStream);
    RandomSource rt = root.derive(kTransformStream);
    r.x_seed = rx.seed();
    r.transform_seed = rt.seed();

    const auto [R, L] = correction_terms(spec, m, F);
    const auto xs = sample(X, rx, n);
    std::vector<double> lhs(n);
    for (std::size_t i = 0; i < n; ++i) lhs[i] = spec.B(xs[i]) * (F(xs[i]) - R(xs[i]) - L(xs[i]));

    const BiasedDistribution law = bias_km(X, spec, m, options);
    const double c = spec.k() == m ? law.alpha : *law.beta;
    const Distribution& target = transform_override ? *transform_override : law.law;
    if (transform_override) r.description += " [transform replaced by " + target.describe() + "]";
    const PiecewisePolynomial G = F.f.derivative(m);
    const auto ys = sample(target, rt, n);
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = c * G(ys[i]);

    const auto l = mean_se(lhs);
    const auto h = mean_se(rhs);
    r.lhs = l.mean;
    r.lhs_se = l.se;
    r.rhs = h.mean;
    r.rhs_se = h.se;
    const double pooled = std::hypot(l.se, h.se);
    const double diff = r.lhs - r.rhs;
    r.z = pooled > 0.0 ? diff / pooled : (diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff));
    r.scale = pooled;
    r.pass = std::abs(r.z) <= kZThreshold;
    return r;
}

// ------------------------------------------------------------------- sweeps

Distribution random_discrete(RandomSource& rng, int max_atoms) {
    const int n = 1 + static_cast<int>(rng.uniform() * max_atoms);
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        atoms.push_back({-3.0 + 6.0 * rng.uniform(), 0.05 + rng.uniform()});
        total += atoms.back().p;
    }
    double s = 0.0;
    for (auto& a : atoms) s += (a.p /= total);
    atoms.back().p += 1.0 - s;
    return discrete(std::move(atoms));
}

SignChangeSpec random_spec(RandomSource& rng, int k) {
    std::vector<double> nodes;
    while (static_cast<int>(nodes.size()) < k) {
        const double x = -2.0 + 4.0 * rng.uniform();
        bool ok = true;
        for (double y : nodes) ok = ok && std::abs(x - y) > 0.05;
        if (ok) nodes.push_back(x);
    }
    std::sort(nodes.begin(), nodes.end());
    const Polynomial pi = Polynomial::from_roots(nodes);
    const double c = -2.0 + 4.0 * rng.uniform();
    const double u = rng.uniform();
    if (u < 0.5) {
        const Polynomial g({-c, 1.0});
        return {BiasFunction::piecewise(PiecewisePolynomial::global(pi * (g * g + Polynomial::constant(0.1))),
                                        "prod(x-x_j)((x-" + fmt(c) + ")^2+0.1)"),
                NodeSet(nodes)};
    }
    if (u < 0.8) {
        return {BiasFunction::custom([pi, c](double x) { return pi(x) * (std::max(x - c, 0.0) + 0.2); },
                                     "prod(x-x_j)((x-" + fmt(c) + ")^+ + 0.2)", {c}),
                NodeSet(nodes)};
    }
    const double scale = 0.5 + rng.uniform();
    return {BiasFunction::piecewise(PiecewisePolynomial::global(pi * Polynomial::constant(scale)),
                                    fmt(scale) + "*prod(x-x_j)"),
            NodeSet(nodes)};
}

SweepResult identity_sweep(std::uint64_t seed, int configurations, int max_atoms, int max_m, bool chain,
                           int max_degree, double tolerance) {
    SweepResult out;
    RandomSource rng(seed);
    // Degenerate draws are redrawn, so exactly `configurations` are checked.
    for (int attempt = 0; static_cast<int>(out.configurations) < configurations && attempt < 20 * configurations;
         ++attempt) {
        const int c = static_cast<int>(out.configurations);
        int m, k;
        if (chain) {
            m = 1 + c % max_m;
            k = (c / max_m) % 2 == 0 ? m % 2 : m;
            if (k == m && m >= 2 && rng.uniform() < 0.5) k = m - 2;
        } else {
            m = c % (max_m + 1);
            k = m;
        }
        const Distribution X = random_discrete(rng, max_atoms);
        const SignChangeSpec spec = random_spec(rng, k);
        // A law and spec with alpha = 0 (all atoms on nodes) carries no transform.
        try {
            if (std::abs(raw_alpha(X, spec)) <= kAlphaTolerance) continue;
            if (k < m && raw_beta(X, spec, m) <= kAlphaTolerance) continue;
        } catch (const Error&) {
            continue;
        }
        ++out.configurations;
        for (int d = 0; d <= max_degree; ++d) {
            const auto r = check_identity_exact(X, spec, m, TestFunctionBank::monomial(d), tolerance);
            ++out.checks;
            const double ratio = std::abs(r.lhs - r.rhs) / (tolerance * r.scale);
            if (std::isfinite(ratio)) out.worst_ratio = std::max(out.worst_ratio, ratio);
            if (!r.pass) {
                ++out.failures;
                if (out.first_failure.empty())
                    out.first_failure = r.description + ": lhs " + fmt(r.lhs) + " rhs " + fmt(r.rhs);
            }
        }
    }
    return out;
}

// -------------------------------------------------------------- ambiguity

AmbiguityReport ambiguity_demo(int points, double tolerance) {
    require(points >= 2, "grid needs at least two points");
    AmbiguityReport r;
    const Distribution X = uniform(-1.0, 1.0);
    const BiasFunction B = BiasFunction::positive_part(0.0);
    const SignChangeSpec at_a{B, NodeSet({-1.0})};
    const SignChangeSpec at_b{B, NodeSet({0.0})};
    const BiasedDistribution P = bias(X, at_a);
    const BiasedDistribution Q = bias(X, at_b);
    r.alpha = P.alpha;
    r.beta = Q.alpha;
    r.b_mean = expect(X, [&](double x) { return B(x); }, {}, B.breakpoints());
    for (int i = 0; i < points; ++i) {
        const double t = -1.0 + 2.0 * i / (points - 1);
        r.grid.push_back(t);
        const double p = P.density(t);
        const double q = Q.density(t);
        r.p.push_back(p);
        r.q.push_back(q);
        const double p_exact = t >= 0.0 ? 0.6 * (1 - t * t) : 0.6;
        const double q_exact = t >= 0.0 ? 1.5 * (1 - t * t) : 0.0;
        r.p_error = std::max(r.p_error, std::abs(p - p_exact));
        r.q_error = std::max(r.q_error, std::abs(q - q_exact));
        const double jump = t < 0.0 ? r.b_mean : 0.0;
        r.relation_error = std::max(r.relation_error, std::abs(r.alpha * p - r.beta * q - jump));
    }
    r.pass = std::abs(r.alpha - 5.0 / 12) <= 1e-10 && std::abs(r.beta - 1.0 / 6) <= 1e-10 &&
             std::abs(r.b_mean - 0.25) <= 1e-10 && r.p_error <= tolerance && r.q_error <= tolerance &&
             r.relation_error <= tolerance;
    return r;
}

// ------------------------------------------------------------------- suites

bool SuiteReport::pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const SuiteEntry& e) { return e.pass; });
}

namespace {

SuiteEntry from_identity(std::string name, const IdentityReport& r) {
    SuiteEntry e{std::move(name), r.pass, {{"lhs", r.lhs}, {"rhs", r.rhs}}, r.description + " (" + r.method + ")"};
    if (r.method == "monte-carlo") {
        e.values["lhs_se"] = r.lhs_se;
        e.values["rhs_se"] = r.rhs_se;
        e.values["z"] = r.z;
    }
    return e;
}

SuiteEntry from_sweep(std::string name, const SweepResult& s, double tolerance) {
    SuiteEntry e{std::move(name), s.failures == 0 && s.checks > 0,
                 {{"configurations", static_cast<double>(s.configurations)},
                  {"checks", static_cast<double>(s.checks)},
                  {"failures", static_cast<double>(s.failures)},
                  {"worst_ratio", s.worst_ratio},
                  {"tolerance", tolerance}},
                 s.first_failure};
    return e;
}

double sup_gap(const Distribution& a, const Distribution& b, double lo, double hi, int points, double skip = kInf) {
    double gap = 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = lo + (hi - lo) * i / (points - 1);
        if (std::abs(t - skip) < 1e-12) continue;
        gap = std::max(gap, std::abs(a.density(t) - b.density(t)));
    }
    return gap;
}

SuiteReport exact_suite(std::uint64_t seed) {
    SuiteReport r;
    const SignChangeSpec zb{BiasFunction::linear(0.0), NodeSet({0.0})};
    const auto x3 = check_identity_exact(discrete({{-1, 1.0 / 3}, {0, 1.0 / 3}, {2, 1.0 / 3}}), zb, 1,
                                         TestFunctionBank::monomial(3));
    auto e = from_identity("atoms {-1,0,2}, B=x, F=x^3", x3);
    e.pass = e.pass && std::abs(x3.lhs - 17.0 / 3) <= 1e-12;
    r.entries.push_back(e);
    const auto pm = check_identity_exact(discrete({{-1, 0.5}, {1, 0.5}}), zb, 1, TestFunctionBank::monomial(2));
    e = from_identity("fair +-1, B=x, F=x^2", pm);
    e.pass = e.pass && pm.lhs == 0.0 && pm.rhs == 0.0;
    r.entries.push_back(e);

    RandomSource rng(seed);
    const auto bank = TestFunctionBank::standard(0, seed);
    bool all = true;
    for (int i = 0; i < 5; ++i) {
        const auto X = random_discrete(rng, 6);
        for (const auto& F : bank.members()) all = all && check_identity_exact(X, SignChangeSpec{BiasFunction::constant(1.0), NodeSet{}}, 0, F).pass;
    }
    r.entries.push_back({"k = m = 0 with bounded tables", all, {}, "tilted law against atom sums"});

    r.entries.push_back(from_sweep("k = m <= 3, 200 configurations", identity_sweep(seed + 1, 200, 8, 3, false, 6, 1e-10), 1e-10));
    r.entries.push_back(from_sweep("k < m chains, 100 configurations", identity_sweep(seed + 2, 100, 6, 4, true, 7, 1e-9), 1e-9));

    // Sensitivity: a 1e-3 perturbation of the coefficient must be caught.
    RandomSource srng(seed + 3);
    int caught = 0;
    int tried = 0;
    while (tried < 20) {
        const auto X = random_discrete(srng, 6);
        const int k = 1 + tried % 3;
        const auto spec = random_spec(srng, k);
        if (std::abs(raw_alpha(X, spec)) <= kAlphaTolerance) continue;
        ++tried;
        bool flipped = false;
        for (int d = k; d <= k + 3; ++d)
            flipped = flipped || !check_identity_exact(X, spec, k, TestFunctionBank::monomial(d), kExactTolerance, 1.001).pass;
        caught += flipped;
    }
    r.entries.push_back({"alpha perturbed by 1e-3 is detected", caught == tried,
                         {{"configurations", static_cast<double>(tried)}, {"detected", static_cast<double>(caught)}},
                         ""});
    return r;
}

SuiteReport mc_suite(std::uint64_t seed, std::size_t n) {
    SuiteReport r;
    const SignChangeSpec xplus{BiasFunction::positive_part(0.0), NodeSet({0.0})};
    const SignChangeSpec zb{BiasFunction::linear(0.0), NodeSet({0.0})};
    const auto pl = TestFunctionBank::piecewise_linear({-0.5, 0.2, 0.7}, {0.3, -1.0, 2.0, 0.5}, 0.1);
    r.entries.push_back(from_identity("U[-1,1], B=x^+, piecewise-linear F",
                                      check_identity_mc(uniform(-1, 1), xplus, 1, pl, n, seed)));
    const auto bump = TestFunctionBank::bump(0.3, 1.2, 1);
    r.entries.push_back(from_identity("N(0,1), B=x, bump F", check_identity_mc(normal(0, 1), zb, 1, bump, n, seed + 1)));
    r.entries.push_back(from_identity("N(0,1) as its own zero-bias law",
                                      check_identity_mc(normal(0, 1), zb, 1, bump, n, seed + 2, {}, normal(0, 1))));

    // U[0,1] posing as a zero-bias fixed point must be caught by some bank member.
    const auto bank = TestFunctionBank::standard(1, seed + 3, 4, 6, 6, 0.0, 1.0);
    double worst = 0.0;
    for (const auto& F : bank.members_of(1)) {
        const auto rep = check_identity_mc(uniform(0, 1), zb, 1, F, n, seed + 4, {}, uniform(0, 1));
        worst = std::max(worst, std::abs(rep.z));
    }
    r.entries.push_back({"U[0,1] is not a zero-bias fixed point", worst > kZThreshold, {{"max_abs_z", worst}},
                         "largest |z| over the bank"});
    return r;
}

SuiteReport ambi_suite() {
    SuiteReport r;
    const auto a = ambiguity_demo();
    r.entries.push_back({"alpha = 5/12", std::abs(a.alpha - 5.0 / 12) <= 1e-10, {{"alpha", a.alpha}}, ""});
    r.entries.push_back({"beta = 1/6", std::abs(a.beta - 1.0 / 6) <= 1e-10, {{"beta", a.beta}}, ""});
    r.entries.push_back({"E[B(X)] = 1/4", std::abs(a.b_mean - 0.25) <= 1e-10, {{"b_mean", a.b_mean}}, ""});
    r.entries.push_back({"p closed form", a.p_error <= 1e-8, {{"sup_error", a.p_error}}, "1001-point grid"});
    r.entries.push_back({"q closed form", a.q_error <= 1e-8, {{"sup_error", a.q_error}}, "1001-point grid"});
    r.entries.push_back({"alpha p - beta q = E[B] 1[-1,0)", a.relation_error <= 1e-8, {{"sup_error", a.relation_error}}, ""});
    return r;
}

SuiteReport fixed_point_suite() {
    SuiteReport r;
    const SignChangeSpec zb{BiasFunction::linear(0.0), NodeSet({0.0})};
    const Distribution Z = normal(0, 1);
    const double gz = sup_gap(bias(Z, zb).law, Z, -4, 4, 801);
    r.entries.push_back({"zero bias of N(0,1)", gz <= 1e-3, {{"sup_gap", gz}}, "[-4, 4]"});
    for (double w : {0.0, 0.25, 0.5, 1.0}) {
        std::vector<Distribution> comps;
        std::vector<double> ws;
        if (w > 0) comps.push_back(half_normal(1.5)), ws.push_back(w);
        if (w < 1) comps.push_back(negative_half_normal(1.5)), ws.push_back(1 - w);
        const Distribution M = make_mixture(comps, ws);
        const double g = sup_gap(bias(M, zb).law, M, -6, 6, 801, 0.0);
        r.entries.push_back({"half-normal mixture w=" + fmt(w), g <= 1e-3, {{"sup_gap", g}}, "[-6, 6] without 0"});
    }
    const Distribution E = exponential(1.0);
    const double ge = sup_gap(bias(E, {BiasFunction::sign(0.0), NodeSet({0.0})}).law, E, 0, 8, 801);
    r.entries.push_back({"equilibrium transform of Exp(1)", ge <= 1e-3, {{"sup_gap", ge}}, "[0, 8]"});

    auto add = [&](std::string name, const FixedPointReport& f) {
        r.entries.push_back({std::move(name), f.pass, {{"residual", f.residual}, {"alpha", f.alpha}}, f.mode});
    };
    add("log-derivative of N(0,1) under B=x", fixed_point_check(Z, zb));
    add("log-derivative of Exp(1) under B=sign", fixed_point_check(E, {BiasFunction::sign(0.0), NodeSet({0.0})}));
    add("log-derivative of half-normal(1.5) under B=x", fixed_point_check(half_normal(1.5), zb));
    add("second-order equation for N(0,1), B_1=x", fixed_point_check(Z, BiasFunction::constant(0.0), zb));
    return r;
}

}  // namespace

SuiteReport run_suite(const std::string& name, std::uint64_t seed, std::size_t n) {
    SuiteReport r;
    if (name == "exact")
        r = exact_suite(seed);
    else if (name == "mc")
        r = mc_suite(seed, n);
    else if (name == "ambi")
        r = ambi_suite();
    else if (name == "fixed-point")
        r = fixed_point_suite();
    else
        fail(ErrorCode::invalid_argument, "unknown suite '" + name + "' (exact, mc, ambi, fixed-point)");
    r.suite = name;
    r.seed = seed;
    r.n = n;
    return r;
}

}  // namespace biasforge
