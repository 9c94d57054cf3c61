#include "biasforge/stein_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "biasforge/errors.hpp"

namespace biasforge {
namespace {

QuadratureConfig tight(const QuadratureConfig& c) {
    QuadratureConfig q = c;
    q.abs_tol = std::min(c.abs_tol, 1e-12);
    q.rel_tol = std::min(c.rel_tol, 1e-11);
    return q;
}

void check_signs(const Distribution& X, const BiasFunction& B0, const SignChangeSpec& B1) {
    require(B1.k() == 1, "B_1 needs exactly one sign-change node (the location a)");
    const auto r1 = validate(B1, X);
    if (!r1.pass) fail(ErrorCode::sign_violation, r1.message);
    const auto r0 = validate(SignChangeSpec{B0, NodeSet{}}, X);
    if (!r0.pass) fail(ErrorCode::sign_violation, "B_0 must be nonnegative: " + r0.message);
}

// alpha_1 = E[B_0(X)(X - a)^2] / 2, exact through moments for polynomial B_0.
double alpha_one(const Distribution& X, const BiasFunction& B0, double a, const QuadratureConfig& config) {
    if (auto p = B0.polynomial(); p && !X.is_discrete()) {
        const Polynomial sq = Polynomial({-a, 1.0}) * Polynomial({-a, 1.0});
        return 0.5 * normalizer(X, Weight::polynomial(*p * sq), config);
    }
    std::vector<double> breaks = B0.breakpoints();
    breaks.push_back(a);
    return 0.5 * expect(X, [&](double x) { return B0(x) * (x - a) * (x - a); }, config, breaks);
}

struct SecondOrderAlphas {
    double a1;
    double a2;
};

SecondOrderAlphas second_order_alphas(const Distribution& X, const BiasFunction& B0, const SignChangeSpec& B1,
                                      const QuadratureConfig& config) {
    const double a1 = alpha_one(X, B0, B1.nodes[0], config);
    const double a2 = raw_alpha(X, B1, config);
    std::ostringstream msg;
    msg << "alpha_1 = " << a1 << ", alpha_2 = " << a2 << " under " << X.describe();
    if (a2 < -kAlphaTolerance) fail(ErrorCode::negative_alpha, msg.str());
    if (!(a1 + a2 > kAlphaTolerance)) fail(ErrorCode::degenerate_alpha, msg.str());
    return {a1, a2};
}

Estimate mean_se(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    return {mean, sd / std::sqrt(n)};
}

Estimate coupling_gap(std::vector<double> xs, const Distribution& transform, RandomSource& rng, Coupling coupling) {
    if (coupling == Coupling::self) return {0.0, 0.0};
    std::vector<double> ys = sample(transform, rng, xs.size());
    if (coupling == Coupling::quantile) {
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
    }
    std::vector<double> d(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) d[i] = std::abs(xs[i] - ys[i]);
    return mean_se(d);
}

// Central difference with one Richardson step.
double first_derivative(const Distribution& Z, double t, double h) {
    auto D = [&](double s) { return (Z.density(t + s) - Z.density(t - s)) / (2 * s); };
    return (4 * D(h / 2) - D(h)) / 3;
}

double second_derivative(const Distribution& Z, double t, double h) {
    const double p = Z.density(t);
    auto S = [&](double s) { return (Z.density(t + s) - 2 * p + Z.density(t - s)) / (s * s); };
    return (4 * S(h / 2) - S(h)) / 3;
}

// Grid over the effective support away from the nodes, the support ends and
// the density's own breakpoints, where one-sided limits may differ.
std::vector<double> probe_grid(const Distribution& Z, std::vector<double> avoid, int points) {
    const Support e = Z.effective_support();
    require(e.bounded(), "fixed point check needs a bounded effective support");
    avoid.push_back(e.lo);
    avoid.push_back(e.hi);
    for (double b : Z.breakpoints()) avoid.push_back(b);
    std::vector<double> out;
    for (int i = 0; i < points; ++i) {
        const double t = e.lo + (e.hi - e.lo) * i / (points - 1);
        bool ok = true;
        for (double b : avoid) ok = ok && std::abs(t - b) > 1e-2;
        if (ok) out.push_back(t);
    }
    return out;
}

constexpr double kDiffStep = 1e-4;
constexpr double kDensityFloor = 1e-6;

}  // namespace

void SteinOperator::check() const {
    require(m >= 1, "Stein operator order must be at least 1");
    require(static_cast<int>(B.size()) == m, "Stein operator needs one coefficient per order 0..m-1");
    for (int j = 0; j < m; ++j) {
        const int k = B[static_cast<std::size_t>(j)].k();
        if (k > m - j || (m - j - k) % 2 != 0) {
            std::ostringstream msg;
            msg << "B_" << j << " has " << k << " sign changes; need k_j <= " << m - j << " with matching parity";
            fail(ErrorCode::parity_mismatch, msg.str());
        }
    }
}

BiasedDistribution second_order_transform(const Distribution& X, const BiasFunction& B0, const SignChangeSpec& B1,
                                          const BiasOptions& options) {
    check_signs(X, B0, B1);
    const double a = B1.nodes[0];
    const auto [a1, a2] = second_order_alphas(X, B0, B1, options.quadrature);
    const double alpha = a1 + a2;

    std::vector<Distribution> parts;
    std::vector<double> weights;
    Recipe recipe;
    recipe.nodes = {a};
    if (a1 > kAlphaTolerance) {
        // hat_a of the B_0-tilted law: alpha_1 E f''(Y_1) = E[B_0(X)(f(X) - f(a) - f'(a)(X - a))].
        const Distribution tilted = tilt(X, SignChangeSpec{B0, NodeSet{}}.tilt_weight(), options.quadrature);
        parts.push_back(hat_transform(tilted, a, options).law);
        weights.push_back(a1 / alpha);
        recipe.steps.push_back("Y_1 = hat_a(tilt(X, B_0))");
    }
    if (a2 > kAlphaTolerance) {
        parts.push_back(bias(X, B1, options).law);
        weights.push_back(a2 / alpha);
        recipe.steps.push_back("Y_2 = bias(X, B_1)");
    }
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    weights.back() += 1.0 - sum;
    recipe.step_normalizers = {a1, a2};
    recipe.description = "X* = Y_I with P(I = j) = alpha_j / alpha";
    return {make_mixture(std::move(parts), std::move(weights)), alpha, std::nullopt, std::move(recipe)};
}

double second_order_density(const Distribution& X, const BiasFunction& B0, const SignChangeSpec& B1, double t,
                            const QuadratureConfig& config) {
    require(B1.k() == 1, "B_1 needs exactly one sign-change node (the location a)");
    const double a = B1.nodes[0];
    const auto [a1, a2] = second_order_alphas(X, B0, B1, config);
    std::vector<double> breaks = B1.breakpoints();
    for (double b : B0.breakpoints()) breaks.push_back(b);
    breaks.push_back(t);
    auto g = [&](double x) { return B1.B(x) + B0(x) * (x - t); };
    const QuadratureConfig q = tight(config);
    const double v = t >= a ? expect_on(X, g, Window{t, kInf, true, true}, q, breaks)
                            : -expect_on(X, g, Window{-kInf, t, true, false}, q, breaks);
    return std::max(0.0, v / (a1 + a2));
}

BiasedDistribution higher_order_transform(const Distribution& X, const SteinOperator& op, const BiasOptions& options) {
    op.check();
    std::vector<double> betas;
    std::vector<Distribution> parts;
    std::vector<double> weights;
    Recipe recipe;
    double total = 0.0;
    for (int j = 0; j < op.m; ++j) {
        const auto& spec = op.B[static_cast<std::size_t>(j)];
        const auto report = validate(spec, X);
        if (!report.pass) fail(ErrorCode::sign_violation, "B_" + std::to_string(j) + ": " + report.message);
        const double b = raw_beta(X, spec, op.m - j, options.quadrature);
        if (b < -kAlphaTolerance) fail(ErrorCode::negative_alpha, "negative beta_" + std::to_string(j));
        betas.push_back(std::max(b, 0.0));
        if (b <= kAlphaTolerance) continue;
        parts.push_back(bias_km(X, spec, op.m - j, options).law);
        weights.push_back(b);
        recipe.steps.push_back("Y_" + std::to_string(j) + " = X-(B_" + std::to_string(j) + ", " +
                               std::to_string(op.m - j) + ") law");
        total += b;
    }
    if (!(total > kAlphaTolerance)) fail(ErrorCode::all_beta_zero, "every beta_j is zero");
    for (double& w : weights) w /= total;
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    weights.back() += 1.0 - sum;
    recipe.step_normalizers = betas;
    recipe.description = "X* = Y_I with P(I = j) = beta_j / beta";
    return {make_mixture(std::move(parts), std::move(weights)), total, total, std::move(recipe)};
}

DistanceBound first_order_bound(const FirstOrderStats& s, const BoundConstants& c) {
    DistanceBound d;
    d.order = 1;
    d.c = c;
    d.coupling_gap = s.coupling_gap;
    d.alpha_dev = std::abs(1.0 - s.alpha);
    d.residuals = {std::abs(s.b_mean)};
    d.residual_factors = {s.f_at_node ? std::abs(*s.f_at_node) : c.c0};
    d.bound = c.c2 * d.coupling_gap + c.c1 * d.alpha_dev + d.residual_factors[0] * d.residuals[0];
    return d;
}

DistanceBound second_order_bound(const SecondOrderStats& s, const BoundConstants& c) {
    DistanceBound d;
    d.order = 2;
    d.c = c;
    d.coupling_gap = s.coupling_gap;
    d.alpha_dev = std::abs(1.0 - s.alpha);
    d.residuals = {std::abs(s.slope_residual), std::abs(s.level_residual)};
    d.residual_factors = {s.fprime_at_a ? std::abs(*s.fprime_at_a) : c.c1, s.f_at_a ? std::abs(*s.f_at_a) : c.c0};
    d.bound = c.c3 * d.coupling_gap + c.c2 * d.alpha_dev + d.residual_factors[0] * d.residuals[0] +
              d.residual_factors[1] * d.residuals[1];
    return d;
}

std::string_view to_string(Coupling c) noexcept {
    switch (c) {
        case Coupling::self: return "self";
        case Coupling::quantile: return "quantile";
        case Coupling::independent: return "independent";
    }
    return "?";
}

Coupling parse_coupling(std::string_view name) {
    if (name == "self") return Coupling::self;
    if (name == "quantile") return Coupling::quantile;
    if (name == "independent") return Coupling::independent;
    fail(ErrorCode::invalid_argument, "unknown coupling '" + std::string(name) + "'");
}

BoundEstimate estimate_first_order(const Distribution& X, const SignChangeSpec& spec, const BoundConstants& c,
                                   std::size_t n, std::uint64_t seed, Coupling coupling,
                                   std::optional<double> f_at_node, const BiasOptions& options) {
    require(spec.k() == 1, "first-order bounds need exactly one sign-change node");
    require(n >= 2, "need at least two samples");
    const RandomSource root(seed);
    RandomSource rx = root.derive(kSampleStream);
    RandomSource rt = root.derive(kTransformStream);
    const auto xs = sample(X, rx, n);
    const double x1 = spec.nodes[0];
    std::vector<double> wa(n), wb(n);
    for (std::size_t i = 0; i < n; ++i) {
        wb[i] = spec.B(xs[i]);
        wa[i] = wb[i] * (xs[i] - x1);
    }
    BoundEstimate out;
    out.n = n;
    out.coupling = coupling;
    out.x_seed = rx.seed();
    out.transform_seed = rt.seed();
    out.alpha = mean_se(wa);
    const Estimate b = mean_se(wb);
    out.residuals = {b};
    out.coupling_gap = coupling == Coupling::self ? Estimate{}
                                                  : coupling_gap(xs, bias(X, spec, options).law, rt, coupling);
    out.bound = first_order_bound({out.coupling_gap.value, out.alpha.value, b.value, f_at_node}, c);
    out.bound_se = c.c2 * out.coupling_gap.se + c.c1 * out.alpha.se + out.bound.residual_factors[0] * b.se;
    return out;
}

BoundEstimate estimate_second_order(const Distribution& X, const BiasFunction& B0, const SignChangeSpec& B1,
                                    const BoundConstants& c, std::size_t n, std::uint64_t seed, Coupling coupling,
                                    const BiasOptions& options) {
    require(B1.k() == 1, "B_1 needs exactly one sign-change node (the location a)");
    require(n >= 2, "need at least two samples");
    const RandomSource root(seed);
    RandomSource rx = root.derive(kSampleStream);
    RandomSource rt = root.derive(kTransformStream);
    const auto xs = sample(X, rx, n);
    const double a = B1.nodes[0];
    std::vector<double> wa(n), ws(n), wl(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = xs[i] - a;
        const double b0 = B0(xs[i]);
        const double b1 = B1.B(xs[i]);
        wa[i] = 0.5 * b0 * d * d + b1 * d;
        ws[i] = b0 * d + b1;
        wl[i] = b0;
    }
    BoundEstimate out;
    out.n = n;
    out.coupling = coupling;
    out.x_seed = rx.seed();
    out.transform_seed = rt.seed();
    out.alpha = mean_se(wa);
    out.residuals = {mean_se(ws), mean_se(wl)};
    out.coupling_gap = coupling == Coupling::self
                           ? Estimate{}
                           : coupling_gap(xs, second_order_transform(X, B0, B1, options).law, rt, coupling);
    SecondOrderStats s;
    s.coupling_gap = out.coupling_gap.value;
    s.alpha = out.alpha.value;
    s.slope_residual = out.residuals[0].value;
    s.level_residual = out.residuals[1].value;
    out.bound = second_order_bound(s, c);
    out.bound_se = c.c3 * out.coupling_gap.se + c.c2 * out.alpha.se +
                   out.bound.residual_factors[0] * out.residuals[0].se +
                   out.bound.residual_factors[1] * out.residuals[1].se;
    return out;
}

FixedPointReport fixed_point_check(const Distribution& Z, const SignChangeSpec& spec, double tolerance, int probes) {
    require(Z.has_density(), "fixed point check needs a density");
    require(spec.k() == 1, "first-order fixed point check needs one node");
    FixedPointReport r;
    r.mode = "first-order";
    r.alpha = alpha_of(Z, spec);
    std::vector<double> avoid = spec.breakpoints();
    for (double t : probe_grid(Z, avoid, probes)) {
        const double p = Z.density(t);
        if (!(p > kDensityFloor)) continue;
        ++r.probes;
        const double v = std::abs(first_derivative(Z, t, kDiffStep) / p + spec.B(t) / r.alpha);
        if (v > r.residual) {
            r.residual = v;
            r.worst_at = t;
        }
    }
    r.pass = r.probes > 0 && r.residual <= tolerance;
    return r;
}

FixedPointReport fixed_point_check(const Distribution& Z, const BiasFunction& B0, const SignChangeSpec& B1,
                                   double tolerance, int probes) {
    require(Z.has_density(), "fixed point check needs a density");
    require(B1.k() == 1, "B_1 needs exactly one sign-change node (the location a)");
    FixedPointReport r;
    r.mode = "second-order";
    const auto [a1, a2] = second_order_alphas(Z, B0, B1, {});
    r.alpha = a1 + a2;
    std::vector<double> avoid = B1.breakpoints();
    for (double b : B0.breakpoints()) avoid.push_back(b);
    for (double t : probe_grid(Z, avoid, probes)) {
        const double p = Z.density(t);
        if (!(p > kDensityFloor)) continue;
        ++r.probes;
        const double lhs = r.alpha * second_derivative(Z, t, kDiffStep);
        const double rhs = (B0(t) - B1.B.derivative(t)) * p - B1.B(t) * first_derivative(Z, t, kDiffStep);
        const double v = std::abs(lhs - rhs);
        if (v > r.residual) {
            r.residual = v;
            r.worst_at = t;
        }
    }
    r.pass = r.probes > 0 && r.residual <= tolerance;
    return r;
}

}  // namespace biasforge
