#include "biasforge/functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "biasforge/errors.hpp"

namespace biasforge {

PiecewisePolynomial::PiecewisePolynomial(std::vector<PolyPiece> pieces) : pieces_(std::move(pieces)) {
    std::sort(pieces_.begin(), pieces_.end(),
              [](const PolyPiece& a, const PolyPiece& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        require(pieces_[i].lo < pieces_[i].hi, "piece intervals must have lo < hi");
        if (i > 0) require(pieces_[i - 1].hi <= pieces_[i].lo, "pieces must not overlap");
    }
}

PiecewisePolynomial PiecewisePolynomial::global(Polynomial p) {
    const double inf = std::numeric_limits<double>::infinity();
    return PiecewisePolynomial({PolyPiece{-inf, inf, 0.0, std::move(p)}});
}

double PiecewisePolynomial::operator()(double x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const PolyPiece& p) { return v < p.lo; });
    if (it == pieces_.begin()) return 0.0;
    --it;
    if (x >= it->hi) return 0.0;
    return it->poly(x - it->origin);
}

PiecewisePolynomial PiecewisePolynomial::derivative(int order) const {
    std::vector<PolyPiece> d;
    d.reserve(pieces_.size());
    for (const auto& p : pieces_) d.push_back({p.lo, p.hi, p.origin, p.poly.derivative(order)});
    PiecewisePolynomial out;
    out.pieces_ = std::move(d);
    return out;
}

std::vector<double> PiecewisePolynomial::breakpoints() const {
    std::vector<double> b;
    for (const auto& p : pieces_) {
        if (std::isfinite(p.lo)) b.push_back(p.lo);
        if (std::isfinite(p.hi)) b.push_back(p.hi);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

std::optional<Polynomial> PiecewisePolynomial::as_polynomial() const {
    if (pieces_.empty()) return Polynomial{};
    if (pieces_.size() == 1 && std::isinf(pieces_[0].lo) && std::isinf(pieces_[0].hi) &&
        pieces_[0].origin == 0.0)
        return pieces_[0].poly;
    return std::nullopt;
}

BiasFunction::BiasFunction(Shape shape, double param, RealFunction fn, std::string name,
                           std::vector<double> breaks)
    : shape_(shape), param_(param), fn_(std::move(fn)), name_(std::move(name)),
      breaks_(std::move(breaks)) {}

namespace {
std::string with_shift(const std::string& base, double shift) {
    if (shift == 0.0) return base;
    std::ostringstream s;
    s << base << (shift > 0 ? "-" : "+") << std::abs(shift);
    return s.str();
}
}  // namespace

BiasFunction BiasFunction::constant(double c) {
    std::ostringstream s;
    s << c;
    return BiasFunction(Shape::constant, c, [c](double) { return c; }, c == 1.0 ? "identity" : s.str(),
                        {});
}

BiasFunction BiasFunction::linear(double shift) {
    return BiasFunction(Shape::linear, shift, [shift](double x) { return x - shift; },
                        with_shift("x", shift), {});
}

BiasFunction BiasFunction::positive_part(double shift) {
    return BiasFunction(
        Shape::positive_part, shift, [shift](double x) { return x > shift ? x - shift : 0.0; },
        "(" + with_shift("x", shift) + ")+", {shift});
}

BiasFunction BiasFunction::sign(double center) {
    return BiasFunction(
        Shape::sign, center,
        [center](double x) { return x > center ? 1.0 : (x < center ? -1.0 : 0.0); },
        "sign(" + with_shift("x", center) + ")", {center});
}

BiasFunction BiasFunction::piecewise(PiecewisePolynomial p, std::string name) {
    auto breaks = p.breakpoints();
    BiasFunction b(Shape::piecewise, 0.0, [p](double x) { return p(x); }, std::move(name),
                   std::move(breaks));
    b.pieces_ = std::move(p);
    return b;
}

BiasFunction BiasFunction::custom(RealFunction f, std::string name, std::vector<double> breakpoints) {
    return BiasFunction(Shape::custom, 0.0, std::move(f), std::move(name), std::move(breakpoints));
}

std::optional<Polynomial> BiasFunction::polynomial() const {
    switch (shape_) {
    case Shape::constant: return Polynomial::constant(param_);
    case Shape::linear: return Polynomial({-param_, 1.0});
    case Shape::piecewise: return pieces_->as_polynomial();
    default: return std::nullopt;
    }
}

double BiasFunction::derivative(double x) const {
    switch (shape_) {
    case Shape::constant: return 0.0;
    case Shape::linear: return 1.0;
    case Shape::positive_part: return x > param_ ? 1.0 : 0.0;
    case Shape::sign: return 0.0;
    case Shape::piecewise: return pieces_->derivative()(x);
    case Shape::custom: break;
    }
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    return (fn_(x + h) - fn_(x - h)) / (2 * h);
}

}  // namespace biasforge
