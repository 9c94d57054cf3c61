#include "biasforge/poly_interp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "biasforge/errors.hpp"

namespace biasforge {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
    canonicalize();
}

void Polynomial::canonicalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

Polynomial Polynomial::monomial(int degree, double coefficient) {
    require(degree >= 0, "monomial degree must be nonnegative");
    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    c.back() = coefficient;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(std::span<const double> roots) {
    Polynomial p = constant(1.0);
    for (double r : roots) p = p * Polynomial({-r, 1.0});
    return p;
}

double Polynomial::operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative(int order) const {
    require(order >= 0, "derivative order must be nonnegative");
    std::vector<double> c = coeffs_;
    for (int o = 0; o < order && !c.empty(); ++o) {
        for (std::size_t i = 1; i < c.size(); ++i) c[i - 1] = c[i] * static_cast<double>(i);
        c.pop_back();
    }
    return Polynomial(std::move(c));
}

Polynomial Polynomial::antiderivative() const {
    std::vector<double> c(coeffs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
    return Polynomial(std::move(c));
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    canonicalize();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    canonicalize();
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    canonicalize();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
}

NodeSet::NodeSet(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        require(std::isfinite(nodes_[i]), "nodes must be finite");
        if (i > 0 && !(nodes_[i] - nodes_[i - 1] >= min_gap)) {
            std::ostringstream msg;
            msg << "nodes must be strictly increasing with gap >= " << min_gap << " (got "
                << nodes_[i - 1] << ", " << nodes_[i] << ")";
            fail(ErrorCode::invalid_argument, msg.str());
        }
    }
}

NodeSet NodeSet::drop_last() const {
    require(!nodes_.empty(), "cannot drop a node from an empty set");
    return NodeSet(std::vector<double>(nodes_.begin(), nodes_.end() - 1));
}

double NodeSet::node_product(double x) const noexcept {
    double p = 1.0;
    for (double n : nodes_) p *= (x - n);
    return p;
}

Polynomial lagrange(const NodeSet& nodes, std::span<const double> values) {
    require(values.size() == nodes.size(), "lagrange: one value per node is required");
    Polynomial result;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        Polynomial basis = Polynomial::constant(values[k]);
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (j == k) continue;
            double d = nodes[k] - nodes[j];
            basis = basis * Polynomial({-nodes[j] / d, 1.0 / d});
        }
        result += basis;
    }
    return result;
}

Polynomial lagrange(const NodeSet& nodes, const RealFunction& f) {
    std::vector<double> v;
    v.reserve(nodes.size());
    for (double x : nodes) v.push_back(f(x));
    return lagrange(nodes, v);
}

double lagrange_at(const NodeSet& nodes, std::span<const double> values, double x) {
    require(values.size() == nodes.size(), "lagrange_at: one value per node is required");
    const std::size_t k = nodes.size();
    if (k == 0) return 0.0;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        if (x == nodes[j]) return values[j];
        double w = 1.0;
        for (std::size_t r = 0; r < k; ++r)
            if (r != j) w /= (nodes[j] - nodes[r]);
        double t = w / (x - nodes[j]);
        num += t * values[j];
        den += t;
    }
    return num / den;
}

double divided_power_sum(const NodeSet& nodes, int n) {
    require(!nodes.empty(), "divided_power_sum needs at least one node");
    require(n >= 0, "divided_power_sum exponent must be nonnegative");
    // Extended precision: the terms cancel heavily for clustered nodes.
    long double total = 0.0L;
    for (std::size_t l = 0; l < nodes.size(); ++l) {
        const long double xl = nodes[l];
        long double denom = 1.0L;
        for (std::size_t r = 0; r < nodes.size(); ++r)
            if (r != l) denom *= xl - static_cast<long double>(nodes[r]);
        total += std::pow(xl, static_cast<long double>(n)) / denom;
    }
    return static_cast<double>(total);
}

double complete_homogeneous(std::span<const double> vars, int degree) {
    if (degree < 0) return 0.0;
    // h[d] over the variables seen so far; h_d(x_1..x_r) = h_d(x_1..x_{r-1}) + x_r h_{d-1}(x_1..x_r).
    std::vector<long double> h(static_cast<std::size_t>(degree) + 1, 0.0L);
    h[0] = 1.0L;
    for (double x : vars)
        for (int d = 1; d <= degree; ++d) h[d] += static_cast<long double>(x) * h[d - 1];
    if (vars.empty()) return degree == 0 ? 1.0 : 0.0;
    return static_cast<double>(h[degree]);
}

double a_coeff(const NodeSet& nodes, int i, int j, CoeffMethod method) {
    require(!nodes.empty(), "a_coeff needs at least one node");
    require(i >= 0 && j >= i, "a_coeff needs j >= i >= 0");
    if (method == CoeffMethod::power_sum) return divided_power_sum(nodes, nodes.k() + j - i - 1);
    return complete_homogeneous(nodes.values(), j - i);
}

Polynomial build_RF(std::span<const double> derivs_at_zero, const NodeSet& nodes, int m) {
    const int k = nodes.k();
    if (k > m || (m - k) % 2 != 0) {
        std::ostringstream msg;
        msg << "R_F needs k <= m with equal parity (k=" << k << ", m=" << m << ")";
        fail(ErrorCode::parity_mismatch, msg.str());
    }
    require(static_cast<int>(derivs_at_zero.size()) == m - k,
            "build_RF: expected F^(k)(0), ..., F^(m-1)(0)");
    auto factorial = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    if (k == 0) {
        std::vector<double> c(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) c[j] = derivs_at_zero[j] / factorial(j);
        return Polynomial(std::move(c));
    }
    std::vector<double> inner(static_cast<std::size_t>(m - k), 0.0);
    for (int i = 0; i < m - k; ++i)
        for (int j = i; j < m - k; ++j)
            inner[i] += derivs_at_zero[j] * a_coeff(nodes, i, j) / factorial(k + j);
    return Polynomial::from_roots(nodes.values()) * Polynomial(std::move(inner));
}

double iterated_antiderivative(const RealFunction& f, double a, int m, double x,
                               const QuadratureConfig& config) {
    require(m >= 1, "iterated_antiderivative needs m >= 1");
    double fact = 1.0;
    for (int i = 2; i < m; ++i) fact *= i;
    RealFunction kernel = [&](double t) { return f(t) * std::pow(x - t, m - 1) / fact; };
    return integrate(kernel, a, x, {}, config);
}

SignCompatiblePrimitive::SignCompatiblePrimitive(RealFunction f, NodeSet nodes, QuadratureConfig config)
    : f_(std::move(f)), nodes_(std::move(nodes)), config_(config) {
    require(!nodes_.empty(), "sign-compatible primitive needs at least one node");
    const double anchor = nodes_.back();
    for (double x : nodes_)
        g_at_nodes_.push_back(iterated_antiderivative(f_, anchor, nodes_.k(), x, config_));
}

double SignCompatiblePrimitive::operator()(double x) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (x == nodes_[i]) return 0.0;
    double g = iterated_antiderivative(f_, nodes_.back(), nodes_.k(), x, config_);
    return g - lagrange_at(nodes_, g_at_nodes_, x);
}

double sign_compatible_primitive(const RealFunction& f, const NodeSet& nodes, double x,
                                 const QuadratureConfig& config) {
    return SignCompatiblePrimitive(f, nodes, config)(x);
}

}  // namespace biasforge
