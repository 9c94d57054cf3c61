#include "biasforge/bias_transform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "biasforge/errors.hpp"

namespace biasforge {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

long double binom(int n, int r) {
    long double c = 1.0L;
    for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return c;
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::erase_if(v, [](double x) { return !std::isfinite(x); });
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::string describe_nodes(const NodeSet& nodes) {
    std::ostringstream s;
    s << "{";
    for (std::size_t i = 0; i < nodes.size(); ++i) s << (i ? "," : "") << nodes[i];
    s << "}";
    return s.str();
}

QuadratureConfig tight(const QuadratureConfig& c) {
    QuadratureConfig q = c;
    q.abs_tol = std::min(c.abs_tol, 1e-12);
    q.rel_tol = std::min(c.rel_tol, 1e-11);
    return q;
}

/// Moments of x + U (W - x), U ~ Beta(j, 1), from those of W.
std::vector<long double> shrink_moments(const std::vector<long double>& w, double x, int j) {
    const int n_max = static_cast<int>(w.size()) - 1;
    std::vector<long double> central(w.size(), 0.0L);
    for (int r = 0; r <= n_max; ++r) {
        long double s = 0.0L;
        for (int q = 0; q <= r; ++q) s += binom(r, q) * w[q] * std::pow(-static_cast<long double>(x), r - q);
        central[r] = s * j / (j + r);
    }
    std::vector<long double> out(w.size(), 0.0L);
    for (int n = 0; n <= n_max; ++n) {
        long double s = 0.0L;
        for (int r = 0; r <= n; ++r) s += binom(n, r) * std::pow(static_cast<long double>(x), n - r) * central[r];
        out[n] = s;
    }
    return out;
}

/// m |d|^(m-1) int_{|d|}^inf p(x_m + sign(d) v) v^(-m) dv for p piecewise linear on a grid.
double iter_piecewise_linear(const std::vector<double>& xs, const std::vector<double>& ps, double x_m, int m,
                             double t) {
    const double d = t - x_m;
    if (d == 0.0) {
        // Limit of the integral: m/(m-1) p(x_m).
        auto it = std::lower_bound(xs.begin(), xs.end(), x_m);
        if (it == xs.end() || it == xs.begin()) return 0.0;
        const auto i = static_cast<std::size_t>(it - xs.begin());
        const double w = (x_m - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return m / (m - 1.0) * ((1 - w) * ps[i - 1] + w * ps[i]);
    }
    const double sgn = d > 0 ? 1.0 : -1.0;
    const double ad = std::abs(d);
    // Antiderivatives of v^(-m) and v^(1-m).
    auto P0 = [m](double v) { return std::pow(v, 1 - m) / (1 - m); };
    auto P1 = [m](double v) { return m == 2 ? std::log(v) : std::pow(v, 2 - m) / (2 - m); };
    long double total = 0.0L;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        // Segment in v: v = sgn (x - x_m).
        double va = sgn * (xs[i] - x_m);
        double vb = sgn * (xs[i + 1] - x_m);
        double pa = ps[i];
        double pb = ps[i + 1];
        if (va > vb) {
            std::swap(va, vb);
            std::swap(pa, pb);
        }
        const double lo = std::max(va, ad);
        const double hi = vb;
        if (!(lo < hi) || vb == va) continue;
        // p linear in v: p = a + b v.
        const double b = (pb - pa) / (vb - va);
        const double a = pa - b * va;
        total += a * (P0(hi) - P0(lo)) + b * (P1(hi) - P1(lo));
    }
    return std::max(0.0, static_cast<double>(m * std::pow(ad, m - 1) * total));
}

struct GridLevel {
    std::vector<double> xs;
    std::vector<double> ps;
};

std::vector<double> level_grid(Support range, std::span<const double> breaks, int points) {
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(range.lo + (range.hi - range.lo) * i / (points - 1));
    const double delta = 1e-9 * (range.hi - range.lo);
    for (double b : breaks) {
        if (b <= range.lo || b >= range.hi) continue;
        g.push_back(b - delta);
        g.push_back(b + delta);
    }
    return sorted_unique(std::move(g));
}

}  // namespace

Weight SignChangeSpec::tilt_weight() const {
    if (auto p = B.polynomial()) {
        if (nodes.empty() && *p == Polynomial::constant(1.0)) return Weight::unit();
        return Weight::polynomial(Polynomial::from_roots(nodes.values()) * *p,
                                  "prod(y-x_j)*" + B.name());
    }
    if (B.shape() == BiasFunction::Shape::sign && nodes.k() == 1 && nodes[0] == B.parameter())
        return Weight::abs_power(nodes[0], 1);
    auto self = *this;
    return Weight([self](double y) { return std::max(0.0, self.weight(y)); }, "prod(y-x_j)*" + B.name(),
                  breakpoints());
}

std::vector<double> SignChangeSpec::breakpoints() const {
    std::vector<double> b = B.breakpoints();
    b.insert(b.end(), nodes.begin(), nodes.end());
    return sorted_unique(std::move(b));
}

ValidationReport validate(const SignChangeSpec& spec, std::span<const double> probes) {
    ValidationReport r;
    r.probes = probes.size();
    double worst = kInf;
    double best = -kInf;
    double at = 0.0;
    for (double x : probes) {
        const double v = spec.weight(x);
        if (v < worst) {
            worst = v;
            at = x;
        }
        best = std::max(best, v);
    }
    r.worst_value = probes.empty() ? 0.0 : worst;
    if (!probes.empty() && worst < -kValidationTolerance) {
        r.pass = false;
        r.violation = at;
        r.reversed = best <= kValidationTolerance;
        std::ostringstream msg;
        msg << "prod(x - x_j) B(x) = " << worst << " < 0 at x = " << at << " for B = " << spec.B.name()
            << ", nodes " << describe_nodes(spec.nodes);
        if (r.reversed) msg << " (B has the opposite orientation; it must be nonnegative on the last interval)";
        r.message = msg.str();
    } else {
        r.message = "ok";
    }
    return r;
}

ValidationReport validate(const SignChangeSpec& spec, const Distribution& probe) {
    std::vector<double> extra = spec.B.breakpoints();
    for (double x : spec.nodes) {
        extra.push_back(x);
        extra.push_back(x - 1e-6);
        extra.push_back(x + 1e-6);
    }
    return validate(spec, validation_grid(probe, extra));
}

double raw_alpha(const Distribution& X, const SignChangeSpec& spec, const QuadratureConfig& config) {
    const double kf = factorial(spec.k());
    if (const Weight w = spec.tilt_weight(); w.abs_power_form() && !X.is_discrete()) return normalizer(X, w, config) / kf;
    if (auto p = spec.B.polynomial(); p && !X.is_discrete())
        return normalizer(X, Weight::polynomial(Polynomial::from_roots(spec.nodes.values()) * *p), config) / kf;
    auto breaks = spec.breakpoints();
    return expect(X, [&](double x) { return spec.weight(x); }, config, breaks) / kf;
}

double alpha_of(const Distribution& X, const SignChangeSpec& spec, const QuadratureConfig& config) {
    const double a = raw_alpha(X, spec, config);
    std::ostringstream msg;
    msg << "alpha = " << a << " for B = " << spec.B.name() << ", nodes " << describe_nodes(spec.nodes)
        << " under " << X.describe();
    if (a < -kAlphaTolerance) fail(ErrorCode::negative_alpha, msg.str());
    if (std::abs(a) <= kAlphaTolerance) fail(ErrorCode::degenerate_alpha, msg.str());
    return a;
}

double density_m1(const Distribution& X, const SignChangeSpec& spec, double alpha, double t,
                  const QuadratureConfig& config) {
    require(spec.k() == 1, "density_m1 needs exactly one node");
    const double x1 = spec.nodes[0];
    const auto breaks = spec.breakpoints();
    const QuadratureConfig q = tight(config);
    auto B = [&](double x) { return spec.B(x); };
    double v;
    if (t >= x1)
        v = expect_on(X, B, Window{t, kInf, true, true}, q, breaks);
    else
        v = -expect_on(X, B, Window{-kInf, t, true, false}, q, breaks);
    return std::max(0.0, v / alpha);
}

double density_m1(const Distribution& X, const SignChangeSpec& spec, double t, const QuadratureConfig& config) {
    return density_m1(X, spec, alpha_of(X, spec, config), t, config);
}

double density_iter(const RealFunction& inner_density, double x_m, int m, double t, Support inner_support,
                    std::span<const double> breakpoints, const QuadratureConfig& config) {
    require(m >= 2, "density_iter needs m >= 2");
    const double d = t - x_m;
    if (d == 0.0) return m / (m - 1.0) * inner_density(x_m);
    const double ad = std::abs(d);
    const double sgn = d > 0 ? 1.0 : -1.0;
    // v runs over [|d|, edge of the inner support on the side of d].
    const double edge = d > 0 ? inner_support.hi - x_m : x_m - inner_support.lo;
    if (!(edge > ad)) return 0.0;
    std::vector<double> vb;
    for (double b : breakpoints) vb.push_back(sgn * (b - x_m));
    const double integral = integrate(
        [&](double v) {
            const double p = inner_density(x_m + sgn * v);
            return p == 0.0 ? 0.0 : p * std::pow(v, -m);
        },
        ad, edge, vb, tight(config));
    return std::max(0.0, m * std::pow(ad, m - 1) * integral);
}

double bspline_density(std::vector<double> knots, double t) {
    const int n = static_cast<int>(knots.size());
    require(n >= 2, "bspline_density needs at least two knots");
    std::sort(knots.begin(), knots.end());
    if (t < knots.front() || t >= knots.back()) return 0.0;
    // Order-1 pieces, then raise the order with the normalized Cox-de Boor recursion.
    std::vector<double> M(static_cast<std::size_t>(n - 1), 0.0);
    for (int i = 0; i + 1 < n; ++i)
        if (knots[i] <= t && t < knots[i + 1]) M[i] = 1.0 / (knots[i + 1] - knots[i]);
    for (int r = 2; r < n; ++r) {
        for (int i = 0; i + r < n; ++i) {
            const double span = knots[i + r] - knots[i];
            M[i] = span > 0 ? r / (r - 1.0) * ((t - knots[i]) * M[i] + (knots[i + r] - t) * M[i + 1]) / span : 0.0;
        }
    }
    return std::max(0.0, M[0]);
}

namespace {

Distribution spline_law(const Distribution& X, const SignChangeSpec& spec, const Distribution& Y, double alpha,
                        const BiasOptions& options) {
    const std::vector<double> nodes(spec.nodes.begin(), spec.nodes.end());
    const int k = spec.k();
    ConstructedParts parts;
    parts.description = "bias(" + X.describe() + ", B=" + spec.B.name() + ", nodes " + describe_nodes(spec.nodes) + ")";
    Support s = Y.support();
    Support e = Y.effective_support();
    for (double x : nodes) {
        s = hull(s, x);
        e = hull(e, x);
    }
    parts.support = s;
    parts.effective_support = e;
    parts.draw = [Y, nodes](RandomSource& rng) {
        double w = Y.draw(rng);
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const double u = std::pow(rng.uniform(), 1.0 / static_cast<double>(j + 1));
            w = nodes[j] + u * (w - nodes[j]);
        }
        return w;
    };
    const QuadratureConfig q = options.quadrature;
    parts.moments = [Y, nodes, q](int n_max) {
        const auto ym = moments(Y, n_max, q);
        std::vector<long double> w(ym.begin(), ym.end());
        for (std::size_t j = 0; j < nodes.size(); ++j) w = shrink_moments(w, nodes[j], static_cast<int>(j) + 1);
        std::vector<double> out(w.begin(), w.end());
        out[0] = 1.0;
        return out;
    };
    std::vector<double> breaks = nodes;
    for (const auto& a : Y.atoms()) breaks.push_back(a.x);
    for (double b : Y.breakpoints()) breaks.push_back(b);
    breaks = sorted_unique(std::move(breaks));
    parts.breakpoints = breaks;

    if (options.route == DensityRoute::spline) {
        if (Y.is_discrete()) {
            parts.density = [Y, nodes](double t) {
                double p = 0.0;
                std::vector<double> knots = nodes;
                knots.push_back(0.0);
                for (const auto& a : Y.atoms()) {
                    knots.back() = a.x;
                    p += a.p * bspline_density(knots, t);
                }
                return p;
            };
        } else {
            parts.density = [Y, nodes, q](double t) {
                const Support ye = Y.effective_support();
                std::vector<double> b = nodes;
                b.push_back(t);
                for (double x : Y.breakpoints()) b.push_back(x);
                std::vector<double> knots = nodes;
                knots.push_back(0.0);
                const double v = integrate(
                    [&](double y) {
                        const double py = Y.density(y);
                        if (py == 0.0) return 0.0;
                        knots.back() = y;
                        return py * bspline_density(knots, t);
                    },
                    ye.lo, ye.hi, b, tight(q));
                return std::max(0.0, v);
            };
        }
        return constructed(std::move(parts));
    }

    // Iterated grid route: innermost level has node x_1 and B_1 = prod_{i>=2} (x - x_i) B.
    const SignChangeSpec inner{
        BiasFunction::custom(
            [spec, nodes](double x) {
                double p = spec.B(x);
                for (std::size_t i = 1; i < nodes.size(); ++i) p *= x - nodes[i];
                return p;
            },
            "prod_{i>=2}(x-x_i)*" + spec.B.name(), spec.B.breakpoints()),
        NodeSet({nodes[0]})};
    const double alpha1 = alpha * factorial(k);  // E[B_1(X)(X - x_1)]
    const Support range = e;
    auto level = std::make_shared<GridLevel>();
    level->xs = level_grid(range, breaks, options.grid_points);
    for (double x : level->xs) level->ps.push_back(density_m1(X, inner, alpha1, x, q));
    for (int j = 2; j < k; ++j) {
        auto next = std::make_shared<GridLevel>();
        next->xs = level->xs;
        for (double x : next->xs) next->ps.push_back(iter_piecewise_linear(level->xs, level->ps, nodes[j - 1], j, x));
        level = next;
    }
    const double last = nodes.back();
    parts.density = [level, last, k](double t) { return iter_piecewise_linear(level->xs, level->ps, last, k, t); };
    return constructed(std::move(parts));
}

}  // namespace

BiasedDistribution bias(const Distribution& X, const SignChangeSpec& spec, const BiasOptions& options) {
    const auto report = validate(spec, X);
    if (!report.pass) fail(ErrorCode::sign_violation, report.message);
    const double alpha = alpha_of(X, spec, options.quadrature);
    const Weight w = spec.tilt_weight();

    Distribution Y = [&] {
        try {
            return tilt(X, w, options.quadrature);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::zero_normalizer) fail(ErrorCode::degenerate_alpha, e.what());
            throw;
        }
    }();

    Recipe recipe;
    recipe.seed = Y;
    recipe.nodes.assign(spec.nodes.begin(), spec.nodes.end());
    for (int j = 1; j <= spec.k(); ++j) recipe.beta_exponents.push_back(j);
    recipe.description = "Y ~ tilt(X, " + w.name() + ")";
    if (spec.k() > 0) recipe.description += "; W_j = x_j + U_j (W_{j-1} - x_j), U_j ~ Beta(j,1), W_0 = Y";

    if (spec.k() == 0) return {Y, alpha, std::nullopt, std::move(recipe)};

    if (spec.k() == 1) {
        const QuadratureConfig q = options.quadrature;
        // Nested laws about the same center flatten; their generic density avoids
        // stacking one quadrature per stage.
        const RadialForm* r = X.radial();
        if (r && w.abs_power_form() && r->center == spec.nodes[0])
            return {radial_law({spec.nodes[0], {1}, Y}), alpha, std::nullopt, std::move(recipe)};
        auto law = radial_law({spec.nodes[0], {1}, Y},
                              [X, spec, alpha, q](double t) { return density_m1(X, spec, alpha, t, q); });
        return {law, alpha, std::nullopt, std::move(recipe)};
    }
    return {spline_law(X, spec, Y, alpha, options), alpha, std::nullopt, std::move(recipe)};
}

BiasedDistribution mixture_bias(const std::vector<Distribution>& components, const std::vector<double>& gamma,
                                const SignChangeSpec& spec, const BiasOptions& options) {
    if (components.size() != gamma.size() || components.empty())
        fail(ErrorCode::weight_mismatch, "mixture_bias needs one weight per component");
    std::vector<Distribution> laws;
    std::vector<double> weights;
    double total = 0.0;
    for (std::size_t s = 0; s < components.size(); ++s) {
        if (gamma[s] == 0.0) continue;
        const auto report = validate(spec, components[s]);
        if (!report.pass) fail(ErrorCode::sign_violation, report.message);
        const double a = raw_alpha(components[s], spec, options.quadrature);
        if (a < -kAlphaTolerance) fail(ErrorCode::negative_alpha, "negative alpha for component " + components[s].describe());
        if (a <= kAlphaTolerance) continue;  // carries no mass in the biased mixture
        laws.push_back(bias(components[s], spec, options).law);
        weights.push_back(a * gamma[s]);
        total += a * gamma[s];
    }
    if (!(total > kAlphaTolerance)) fail(ErrorCode::degenerate_alpha, "sum of alpha_s gamma_s is zero");
    for (double& w : weights) w /= total;
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    weights.back() += 1.0 - sum;
    Recipe recipe;
    recipe.description = "X_J^(B) with P(J = s) = alpha_s gamma_s / alpha";
    recipe.nodes.assign(spec.nodes.begin(), spec.nodes.end());
    recipe.step_normalizers = weights;
    return {make_mixture(std::move(laws), std::move(weights)), total, std::nullopt, std::move(recipe)};
}

}  // namespace biasforge
