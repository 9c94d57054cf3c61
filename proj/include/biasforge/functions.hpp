#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biasforge/poly_interp.hpp"

namespace biasforge {

/// One polynomial piece, evaluated in the local variable (x - origin) on [lo, hi).
struct PolyPiece {
    double lo;
    double hi;
    double origin = 0.0;
    Polynomial poly;
};

/// Piecewise polynomial on the line; zero outside every piece.
class PiecewisePolynomial {
  public:
    PiecewisePolynomial() = default;
    explicit PiecewisePolynomial(std::vector<PolyPiece> pieces);

    static PiecewisePolynomial global(Polynomial p);

    double operator()(double x) const;
    /// Piecewise derivative; equals the derivative wherever it exists.
    PiecewisePolynomial derivative(int order = 1) const;
    std::vector<double> breakpoints() const;
    /// The polynomial, when one piece with origin 0 covers the whole line.
    std::optional<Polynomial> as_polynomial() const;
    const std::vector<PolyPiece>& pieces() const noexcept { return pieces_; }

  private:
    std::vector<PolyPiece> pieces_;
};

/// A biasing function B. Structured shapes are kept so that tilting weights
/// built from B can be recognised as polynomials or powers of |y - c|.
class BiasFunction {
  public:
    enum class Shape { constant, linear, positive_part, sign, piecewise, custom };

    /// B(x) = c. The CLI name "identity" is B = 1.
    static BiasFunction constant(double c);
    /// B(x) = x - shift.
    static BiasFunction linear(double shift = 0.0);
    /// B(x) = max(x - shift, 0).
    static BiasFunction positive_part(double shift = 0.0);
    /// B(x) = sign(x - center), with sign(0) = 0.
    static BiasFunction sign(double center = 0.0);
    static BiasFunction piecewise(PiecewisePolynomial p, std::string name = "piecewise");
    static BiasFunction custom(RealFunction f, std::string name, std::vector<double> breakpoints = {});

    double operator()(double x) const { return fn_(x); }
    const RealFunction& function() const noexcept { return fn_; }
    const std::string& name() const noexcept { return name_; }
    Shape shape() const noexcept { return shape_; }
    /// Location parameter of the linear / positive_part / sign shapes.
    double parameter() const noexcept { return param_; }
    std::optional<Polynomial> polynomial() const;
    const std::vector<double>& breakpoints() const noexcept { return breaks_; }
    /// Derivative where it exists (polynomial pieces exactly, others numerically).
    double derivative(double x) const;

  private:
    BiasFunction(Shape shape, double param, RealFunction fn, std::string name,
                 std::vector<double> breaks);

    Shape shape_;
    double param_;
    RealFunction fn_;
    std::string name_;
    std::vector<double> breaks_;
    std::optional<PiecewisePolynomial> pieces_;
};

}  // namespace biasforge
