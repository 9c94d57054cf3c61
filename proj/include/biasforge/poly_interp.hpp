#pragma once

#include <functional>
#include <span>
#include <vector>

#include "biasforge/quadrature.hpp"

namespace biasforge {

/// Dense real polynomial in the monomial basis, lowest degree first.
/// Trailing zeros are stripped, so the zero polynomial has no coefficients.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coefficients);

    static Polynomial constant(double c) { return Polynomial({c}); }
    static Polynomial monomial(int degree, double coefficient = 1.0);
    /// Monic product of (x - r) over the roots.
    static Polynomial from_roots(std::span<const double> roots);

    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    double coefficient(int i) const noexcept {
        return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : 0.0;
    }

    double operator()(double x) const noexcept;

    Polynomial derivative(int order = 1) const;
    /// Primitive vanishing at 0.
    Polynomial antiderivative() const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(double s);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

  private:
    void canonicalize();
    std::vector<double> coeffs_;
};

/// Strictly increasing interpolation / sign-change nodes x_1 < ... < x_k.
class NodeSet {
  public:
    /// Adjacent nodes closer than this are rejected.
    static constexpr double min_gap = 1e-8;

    NodeSet() = default;
    explicit NodeSet(std::vector<double> nodes);

    std::size_t size() const noexcept { return nodes_.size(); }
    int k() const noexcept { return static_cast<int>(nodes_.size()); }
    bool empty() const noexcept { return nodes_.empty(); }
    double operator[](std::size_t i) const { return nodes_[i]; }
    double front() const { return nodes_.front(); }
    double back() const { return nodes_.back(); }
    std::span<const double> values() const noexcept { return nodes_; }
    auto begin() const noexcept { return nodes_.begin(); }
    auto end() const noexcept { return nodes_.end(); }

    /// Nodes without the last one (x_1..x_{k-1}).
    NodeSet drop_last() const;
    /// Product of (x - x_j) over all nodes; 1 for the empty set.
    double node_product(double x) const noexcept;

  private:
    std::vector<double> nodes_;
};

/// Interpolation polynomial of degree <= k-1 through (x_j, values_j).
/// The zero polynomial when there are no nodes.
Polynomial lagrange(const NodeSet& nodes, std::span<const double> values);

/// Barycentric evaluation of the same interpolant at a point, without forming
/// monomial coefficients.
double lagrange_at(const NodeSet& nodes, std::span<const double> values, double x);

/// Lagrange interpolant of f at the nodes.
Polynomial lagrange(const NodeSet& nodes, const RealFunction& f);

enum class CoeffMethod { power_sum, symmetric };

/// sum_l x_l^n / prod_{r != l} (x_l - x_r). Vanishes for n <= k-2.
double divided_power_sum(const NodeSet& nodes, int n);

/// Complete homogeneous symmetric polynomial h_d(vars); h_0 = 1, h_d = 0 for d < 0.
double complete_homogeneous(std::span<const double> vars, int degree);

/// Coefficient a_i^(j) of the remainder polynomial, j >= i >= 0, nonempty nodes.
/// Both methods compute the same number; symmetric is the better conditioned.
double a_coeff(const NodeSet& nodes, int i, int j, CoeffMethod method = CoeffMethod::symmetric);

/// Correction polynomial R_F for k = |nodes| sign changes and derivative order m.
/// derivs_at_zero holds F^(k)(0), ..., F^(m-1)(0). For k = 0 it is the Maclaurin
/// polynomial of degree m-1; it is zero when k = m.
/// Throws Error(parity_mismatch) unless k <= m and k = m (mod 2).
Polynomial build_RF(std::span<const double> derivs_at_zero, const NodeSet& nodes, int m);

/// (I_a^m f)(x): the m-fold iterated integral from a, via the Cauchy formula
/// int_a^x f(t) (x-t)^(m-1)/(m-1)! dt.
double iterated_antiderivative(const RealFunction& f, double a, int m, double x,
                               const QuadratureConfig& config = {});

/// F = G - L_G with G = I_{x_k}^k f: the unique k-th primitive of a nonnegative f
/// that vanishes at the nodes and satisfies (-1)^(k+1-i) F >= 0 on J_i.
class SignCompatiblePrimitive {
  public:
    SignCompatiblePrimitive(RealFunction f, NodeSet nodes, QuadratureConfig config = {});
    double operator()(double x) const;
    const NodeSet& nodes() const noexcept { return nodes_; }

  private:
    RealFunction f_;
    NodeSet nodes_;
    QuadratureConfig config_;
    std::vector<double> g_at_nodes_;
};

double sign_compatible_primitive(const RealFunction& f, const NodeSet& nodes, double x,
                                 const QuadratureConfig& config = {});

}  // namespace biasforge
