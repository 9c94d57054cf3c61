#include "biasforge/higher_bias.hpp"

#include <cmath>
#include <sstream>

#include "biasforge/errors.hpp"

namespace biasforge {
namespace {

void check_parity(int k, int m) {
    if (k > m || (m - k) % 2 != 0) {
        std::ostringstream msg;
        msg << "need k <= m with k = m (mod 2), got k=" << k << ", m=" << m;
        fail(ErrorCode::parity_mismatch, msg.str());
    }
}

}  // namespace

long long falling_factorial(int n, int j) {
    require(j >= 0, "falling factorial needs j >= 0");
    long long r = 1;
    for (int i = 0; i < j; ++i) r *= n - i;
    return r;
}

BiasedDistribution hat_transform(const Distribution& X, double a, const BiasOptions& options) {
    const double spread = normalizer(X, Weight::abs_power(a, 2), options.quadrature);
    if (!(spread > kAlphaTolerance)) {
        std::ostringstream msg;
        msg << "E[(X - a)^2] = " << spread << " at a = " << a << " under " << X.describe();
        fail(ErrorCode::degenerate_alpha, msg.str());
    }
    const SignChangeSpec step{BiasFunction::sign(a), NodeSet({a})};
    const BiasedDistribution once = bias(X, step, options);
    BiasedDistribution twice = bias(once.law, step, options);
    twice.alpha = 0.5 * spread;
    twice.recipe.description = "hat_a: two sign(x - a) bias stages at a = " + std::to_string(a);
    twice.recipe.steps = {"bias(sign, node a)", "bias(sign, node a)"};
    twice.recipe.step_normalizers = {once.alpha, twice.alpha / once.alpha};
    return twice;
}

double raw_beta(const Distribution& X, const SignChangeSpec& spec, int m, const QuadratureConfig& config) {
    const int k = spec.k();
    check_parity(k, m);
    // x^m - L(x) = prod (x - x_j) h_{m-k}(x_1, ..., x_k, x), and the h factor
    // expands as sum_i x^i h_{m-k-i}(x_1, ..., x_k).
    const auto nodes = spec.nodes.values();
    std::vector<double> h(static_cast<std::size_t>(m - k) + 1);
    for (int i = 0; i <= m - k; ++i) h[static_cast<std::size_t>(i)] = complete_homogeneous(nodes, m - k - i);
    const Polynomial hx(h);
    double mf = 1.0;
    for (int i = 2; i <= m; ++i) mf *= i;

    if (auto p = spec.B.polynomial(); p && !X.is_discrete())
        return normalizer(X, Weight::polynomial(Polynomial::from_roots(nodes) * *p * hx), config) / mf;
    const auto breaks = spec.breakpoints();
    return expect(X, [&](double x) { return spec.weight(x) * hx(x); }, config, breaks) / mf;
}

double beta_of(const Distribution& X, const SignChangeSpec& spec, int m, const QuadratureConfig& config) {
    const double beta = raw_beta(X, spec, m, config);
    if (!(beta > kAlphaTolerance)) {
        std::ostringstream msg;
        msg << "beta = " << beta << " for B = " << spec.B.name() << ", m = " << m << " under " << X.describe();
        fail(ErrorCode::degenerate_beta, msg.str());
    }
    return beta;
}

BiasedDistribution bias_km(const Distribution& X, const SignChangeSpec& spec, int m, const BiasOptions& options) {
    check_parity(spec.k(), m);
    BiasedDistribution out = bias(X, spec, options);
    out.beta = beta_of(X, spec, m, options.quadrature);
    for (int l = 1; l <= (m - spec.k()) / 2; ++l) {
        BiasedDistribution step = [&] {
            try {
                return hat_transform(out.law, 0.0, options);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::degenerate_alpha) fail(ErrorCode::degenerate_beta, e.what());
                throw;
            }
        }();
        out.law = step.law;
        out.recipe.steps.push_back("hat_0 #" + std::to_string(l));
        out.recipe.step_normalizers.push_back(step.alpha);
    }
    if (!out.recipe.steps.empty())
        out.recipe.description += "; then " + std::to_string(out.recipe.steps.size()) + " hat_0 step(s)";
    return out;
}

}  // namespace biasforge
