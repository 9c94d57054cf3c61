#include "biasforge/dist_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "biasforge/errors.hpp"

namespace biasforge {

namespace {

// Distance (in standard deviations) where a Gaussian falls to 1e-16 of its peak.
const double kGaussTail = std::sqrt(2.0 * std::log(1e16));
const double kExpTail = std::log(1e16);
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrtPi = 1.7724538509055160;

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

std::vector<double> merge_points(std::vector<double> a, std::span<const double> b) {
    a.insert(a.end(), b.begin(), b.end());
    std::erase_if(a, [](double x) { return !std::isfinite(x); });
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

double binomial(int n, int r) {
    double c = 1.0;
    for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return c;
}

}  // namespace

Support hull(Support a, Support b) noexcept { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }
Support hull(Support a, double x) noexcept { return {std::min(a.lo, x), std::max(a.hi, x)}; }

std::string_view to_string(DistributionKind kind) noexcept {
    switch (kind) {
    case DistributionKind::catalog: return "analytic-catalog";
    case DistributionKind::atoms: return "discrete-atoms";
    case DistributionKind::empirical: return "empirical-sample";
    case DistributionKind::tilted: return "tilted";
    case DistributionKind::mixture: return "mixture";
    case DistributionKind::constructed: return "constructed";
    }
    return "unknown";
}

double DistributionImpl::density(double) const {
    fail(ErrorCode::invalid_argument, describe() + " has no density");
}

double DistributionImpl::cdf(double) const {
    fail(ErrorCode::invalid_argument, describe() + " has no closed-form cdf");
}

double DistributionImpl::expect(const RealFunction& f, const Window& w, const QuadratureConfig& config,
                                std::span<const double> extra_breaks) const {
    if (auto at = atoms(); !at.empty()) {
        long double s = 0.0L;
        for (const auto& a : at)
            if (w.contains(a.x)) s += static_cast<long double>(a.p) * f(a.x);
        return static_cast<double>(s);
    }
    if (auto xs = samples(); !xs.empty()) {
        long double s = 0.0L;
        for (double x : xs)
            if (w.contains(x)) s += f(x);
        return static_cast<double>(s / xs.size());
    }
    if (!has_density()) fail(ErrorCode::non_integrable, describe() + " has no density, atoms or samples");
    const Support eff = effective_support();
    const double lo = std::max(w.lo, eff.lo);
    const double hi = std::min(w.hi, eff.hi);
    if (!(lo < hi)) return 0.0;
    auto breaks = merge_points(breakpoints(), extra_breaks);
    return integrate([&](double x) { return f(x) * density(x); }, lo, hi, breaks, config);
}

std::vector<double> DistributionImpl::moments(int n_max, const QuadratureConfig& config) const {
    std::vector<double> m(static_cast<std::size_t>(n_max) + 1, 1.0);
    for (int n = 1; n <= n_max; ++n)
        m[n] = expect([n](double x) { return std::pow(x, n); }, Window{}, config, {});
    return m;
}

Distribution::Distribution(std::shared_ptr<const DistributionImpl> impl) : impl_(std::move(impl)) {
    require(impl_ != nullptr, "distribution implementation must not be null");
}

double Distribution::draw(RandomSource& rng) const {
    if (!impl_->has_sampler()) fail(ErrorCode::no_sampler, describe() + " has no sampling route");
    return impl_->draw(rng);
}

// ---------------------------------------------------------------- catalog

namespace {

enum class Family { uniform, normal, exponential, half_normal, negative_half_normal };

class CatalogImpl final : public DistributionImpl {
  public:
    CatalogImpl(Family family, double a, double b) : fam_(family), a_(a), b_(b) {}

    DistributionKind kind() const override { return DistributionKind::catalog; }

    std::string describe() const override {
        switch (fam_) {
        case Family::uniform: return "uniform(lo=" + fmt(a_) + ", hi=" + fmt(b_) + ")";
        case Family::normal: return "normal(mean=" + fmt(a_) + ", sd=" + fmt(b_) + ")";
        case Family::exponential: return "exponential(rate=" + fmt(a_) + ")";
        case Family::half_normal: return "half_normal(sigma=" + fmt(a_) + ")";
        case Family::negative_half_normal: return "negative_half_normal(sigma=" + fmt(a_) + ")";
        }
        return "catalog";
    }

    Support support() const override {
        switch (fam_) {
        case Family::uniform: return {a_, b_};
        case Family::normal: return {-kInf, kInf};
        case Family::exponential:
        case Family::half_normal: return {0.0, kInf};
        case Family::negative_half_normal: return {-kInf, 0.0};
        }
        return {};
    }

    Support effective_support() const override {
        switch (fam_) {
        case Family::uniform: return {a_, b_};
        case Family::normal: return {a_ - kGaussTail * b_, a_ + kGaussTail * b_};
        case Family::exponential: return {0.0, kExpTail / a_};
        case Family::half_normal: return {0.0, kGaussTail * a_};
        case Family::negative_half_normal: return {-kGaussTail * a_, 0.0};
        }
        return {};
    }

    bool has_density() const override { return true; }

    double density(double x) const override {
        switch (fam_) {
        case Family::uniform: return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
        case Family::normal: {
            const double z = (x - a_) / b_;
            return std::exp(-0.5 * z * z) / (b_ * kSqrt2 * kSqrtPi);
        }
        case Family::exponential: return x >= 0.0 ? a_ * std::exp(-a_ * x) : 0.0;
        case Family::half_normal:
            return x >= 0.0 ? kSqrt2 / (a_ * kSqrtPi) * std::exp(-0.5 * x * x / (a_ * a_)) : 0.0;
        case Family::negative_half_normal:
            return x < 0.0 ? kSqrt2 / (a_ * kSqrtPi) * std::exp(-0.5 * x * x / (a_ * a_)) : 0.0;
        }
        return 0.0;
    }

    bool has_cdf() const override { return true; }

    double cdf(double x) const override {
        switch (fam_) {
        case Family::uniform: return std::clamp((x - a_) / (b_ - a_), 0.0, 1.0);
        case Family::normal: return 0.5 * std::erfc(-(x - a_) / (b_ * kSqrt2));
        case Family::exponential: return x <= 0.0 ? 0.0 : -std::expm1(-a_ * x);
        case Family::half_normal: return x <= 0.0 ? 0.0 : std::erf(x / (a_ * kSqrt2));
        case Family::negative_half_normal: return x >= 0.0 ? 1.0 : std::erfc(-x / (a_ * kSqrt2));
        }
        return 0.0;
    }

    double draw(RandomSource& rng) const override {
        const double u = rng.uniform();
        switch (fam_) {
        case Family::uniform: return a_ + (b_ - a_) * u;
        case Family::normal: return a_ - b_ * kSqrt2 * boost::math::erfc_inv(2.0 * u);
        case Family::exponential: return -std::log(u) / a_;
        case Family::half_normal: return a_ * kSqrt2 * boost::math::erfc_inv(u);
        case Family::negative_half_normal: return -a_ * kSqrt2 * boost::math::erfc_inv(u);
        }
        return 0.0;
    }

    std::vector<double> moments(int n_max, const QuadratureConfig&) const override {
        std::vector<double> m(static_cast<std::size_t>(n_max) + 1, 1.0);
        for (int n = 1; n <= n_max; ++n) {
            switch (fam_) {
            case Family::uniform:
                m[n] = (std::pow(b_, n + 1) - std::pow(a_, n + 1)) / ((n + 1) * (b_ - a_));
                break;
            case Family::normal:
                m[n] = a_ * m[n - 1] + (n >= 2 ? (n - 1) * b_ * b_ * m[n - 2] : 0.0);
                break;
            case Family::exponential: m[n] = m[n - 1] * n / a_; break;
            case Family::half_normal:
            case Family::negative_half_normal: {
                double v = std::pow(a_, n) * std::pow(2.0, 0.5 * n) * std::tgamma(0.5 * (n + 1)) / kSqrtPi;
                m[n] = (fam_ == Family::negative_half_normal && n % 2 == 1) ? -v : v;
                break;
            }
            }
        }
        return m;
    }

    std::vector<double> breakpoints() const override {
        switch (fam_) {
        case Family::uniform: return {a_, b_};
        case Family::normal: return {};
        default: return {0.0};
        }
    }

  private:
    Family fam_;
    double a_;
    double b_;
};

// ---------------------------------------------------------------- atoms

class AtomsImpl final : public DistributionImpl {
  public:
    explicit AtomsImpl(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        double c = 0.0;
        for (const auto& a : atoms_) cumulative_.push_back(c += a.p);
    }

    DistributionKind kind() const override { return DistributionKind::atoms; }
    std::string describe() const override {
        if (atoms_.size() == 1) return "dirac(" + fmt(atoms_[0].x) + ")";
        return "atoms(n=" + std::to_string(atoms_.size()) + ")";
    }
    Support support() const override { return {atoms_.front().x, atoms_.back().x}; }
    std::span<const Atom> atoms() const override { return atoms_; }
    bool has_cdf() const override { return true; }
    double cdf(double x) const override {
        auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                                   [](double v, const Atom& a) { return v < a.x; });
        if (it == atoms_.begin()) return 0.0;
        return std::min(1.0, cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1]);
    }
    double draw(RandomSource& rng) const override {
        const double u = rng.uniform() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it == cumulative_.end()) --it;
        return atoms_[static_cast<std::size_t>(it - cumulative_.begin())].x;
    }
    std::vector<double> moments(int n_max, const QuadratureConfig&) const override {
        std::vector<long double> m(static_cast<std::size_t>(n_max) + 1, 0.0L);
        for (const auto& a : atoms_) {
            long double p = a.p;
            for (int n = 0; n <= n_max; ++n) {
                m[n] += p;
                p *= a.x;
            }
        }
        return {m.begin(), m.end()};
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> b;
        for (const auto& a : atoms_) b.push_back(a.x);
        return b;
    }

  private:
    std::vector<Atom> atoms_;
    std::vector<double> cumulative_;
};

// ---------------------------------------------------------------- empirical

class EmpiricalImpl final : public DistributionImpl {
  public:
    explicit EmpiricalImpl(std::vector<double> xs) : xs_(std::move(xs)) {
        auto [lo, hi] = std::minmax_element(xs_.begin(), xs_.end());
        support_ = {*lo, *hi};
    }

    DistributionKind kind() const override { return DistributionKind::empirical; }
    std::string describe() const override { return "empirical(n=" + std::to_string(xs_.size()) + ")"; }
    Support support() const override { return support_; }
    std::span<const double> samples() const override { return xs_; }
    double draw(RandomSource& rng) const override {
        auto i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(xs_.size()));
        return xs_[std::min(i, xs_.size() - 1)];
    }
    std::vector<double> moments(int n_max, const QuadratureConfig&) const override {
        std::vector<long double> m(static_cast<std::size_t>(n_max) + 1, 0.0L);
        for (double x : xs_) {
            long double p = 1.0L;
            for (int n = 0; n <= n_max; ++n) {
                m[n] += p;
                p *= x;
            }
        }
        std::vector<double> out;
        for (auto v : m) out.push_back(static_cast<double>(v / xs_.size()));
        return out;
    }

  private:
    std::vector<double> xs_;
    Support support_;
};

// ---------------------------------------------------------------- tilted

class TiltedImpl final : public DistributionImpl {
  public:
    TiltedImpl(Distribution base, Weight w, double z, const QuadratureConfig& config)
        : base_(std::move(base)), w_(std::move(w)), z_(z), config_(config) {
        double peak = 0.0;
        for (double x : validation_grid(base_, w_.breakpoints())) peak = std::max(peak, w_(x));
        envelope_ = 1.1 * peak;
    }

    DistributionKind kind() const override { return DistributionKind::tilted; }
    std::string describe() const override { return "tilt(" + base_.describe() + ", " + w_.name() + ")"; }
    Support support() const override { return base_.support(); }
    Support effective_support() const override { return base_.effective_support(); }
    bool has_density() const override { return base_.has_density(); }
    double density(double x) const override {
        const double p = base_.density(x);
        return p == 0.0 ? 0.0 : w_(x) * p / z_;
    }
    bool has_sampler() const override { return base_.has_sampler() && envelope_ > 0.0; }
    double draw(RandomSource& rng) const override {
        for (int i = 0; i < 1'000'000; ++i) {
            const double y = base_.draw(rng);
            if (rng.uniform() * envelope_ <= w_(y)) return y;
        }
        fail(ErrorCode::rejection_exhausted,
             "rejection sampler for " + describe() + " exceeded 1e6 proposals");
    }
    std::vector<double> moments(int n_max, const QuadratureConfig& config) const override {
        if (const auto& p = w_.polynomial_form()) {
            const auto bm = base_.impl().moments(n_max + std::max(p->degree(), 0), config);
            std::vector<double> m(static_cast<std::size_t>(n_max) + 1, 0.0);
            for (int n = 0; n <= n_max; ++n) {
                long double s = 0.0L;
                for (int i = 0; i <= p->degree(); ++i)
                    s += static_cast<long double>(p->coefficient(i)) * bm[n + i];
                m[n] = static_cast<double>(s / z_);
            }
            m[0] = 1.0;
            return m;
        }
        return DistributionImpl::moments(n_max, config);
    }
    double expect(const RealFunction& f, const Window& win, const QuadratureConfig& config,
                  std::span<const double> extra) const override {
        auto breaks = merge_points(w_.breakpoints(), extra);
        return base_.impl().expect([&](double x) { return f(x) * w_(x); }, win, config, breaks) / z_;
    }
    std::vector<double> breakpoints() const override {
        return merge_points(base_.breakpoints(), w_.breakpoints());
    }

    const Distribution& base() const noexcept { return base_; }
    const Weight& weight() const noexcept { return w_; }
    double z() const noexcept { return z_; }

  private:
    Distribution base_;
    Weight w_;
    double z_;
    QuadratureConfig config_;
    double envelope_ = 0.0;
};

// ---------------------------------------------------------------- mixture

class MixtureImpl final : public DistributionImpl {
  public:
    MixtureImpl(std::vector<Distribution> comps, std::vector<double> weights)
        : comps_(std::move(comps)), weights_(std::move(weights)) {
        double c = 0.0;
        for (double w : weights_) cumulative_.push_back(c += w);
    }

    DistributionKind kind() const override { return DistributionKind::mixture; }
    std::string describe() const override {
        std::string s = "mixture(";
        for (std::size_t i = 0; i < comps_.size(); ++i)
            s += (i ? ", " : "") + fmt(weights_[i]) + "*" + comps_[i].describe();
        return s + ")";
    }
    Support support() const override {
        Support s = comps_[0].support();
        for (const auto& c : comps_) s = hull(s, c.support());
        return s;
    }
    Support effective_support() const override {
        Support s = comps_[0].effective_support();
        for (const auto& c : comps_) s = hull(s, c.effective_support());
        return s;
    }
    bool has_density() const override {
        return std::all_of(comps_.begin(), comps_.end(), [](const auto& c) { return c.has_density(); });
    }
    double density(double x) const override {
        double s = 0.0;
        for (std::size_t i = 0; i < comps_.size(); ++i) s += weights_[i] * comps_[i].density(x);
        return s;
    }
    bool has_cdf() const override {
        return std::all_of(comps_.begin(), comps_.end(), [](const auto& c) { return c.has_cdf(); });
    }
    double cdf(double x) const override {
        double s = 0.0;
        for (std::size_t i = 0; i < comps_.size(); ++i) s += weights_[i] * comps_[i].cdf(x);
        return s;
    }
    bool has_sampler() const override {
        return std::all_of(comps_.begin(), comps_.end(), [](const auto& c) { return c.has_sampler(); });
    }
    double draw(RandomSource& rng) const override {
        const double u = rng.uniform() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it == cumulative_.end()) --it;
        return comps_[static_cast<std::size_t>(it - cumulative_.begin())].draw(rng);
    }
    std::vector<double> moments(int n_max, const QuadratureConfig& config) const override {
        std::vector<double> m(static_cast<std::size_t>(n_max) + 1, 0.0);
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            auto cm = comps_[i].impl().moments(n_max, config);
            for (int n = 0; n <= n_max; ++n) m[n] += weights_[i] * cm[n];
        }
        m[0] = 1.0;
        return m;
    }
    double expect(const RealFunction& f, const Window& w, const QuadratureConfig& config,
                  std::span<const double> extra) const override {
        double s = 0.0;
        for (std::size_t i = 0; i < comps_.size(); ++i)
            s += weights_[i] * comps_[i].impl().expect(f, w, config, extra);
        return s;
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> b;
        for (const auto& c : comps_) b = merge_points(std::move(b), c.breakpoints());
        return b;
    }

    const std::vector<Distribution>& components() const noexcept { return comps_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

  private:
    std::vector<Distribution> comps_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

// ---------------------------------------------------------------- constructed

class ConstructedImpl final : public DistributionImpl {
  public:
    explicit ConstructedImpl(ConstructedParts parts) : parts_(std::move(parts)) {}

    DistributionKind kind() const override { return DistributionKind::constructed; }
    std::string describe() const override { return parts_.description; }
    Support support() const override { return parts_.support; }
    Support effective_support() const override { return parts_.effective_support; }
    bool has_density() const override { return static_cast<bool>(parts_.density); }
    double density(double x) const override {
        if (!parts_.density) return DistributionImpl::density(x);
        return parts_.density(x);
    }
    bool has_sampler() const override { return static_cast<bool>(parts_.draw); }
    double draw(RandomSource& rng) const override { return parts_.draw(rng); }
    std::vector<double> moments(int n_max, const QuadratureConfig& config) const override {
        if (parts_.moments) return parts_.moments(n_max);
        return DistributionImpl::moments(n_max, config);
    }
    std::vector<double> breakpoints() const override { return parts_.breakpoints; }

  private:
    ConstructedParts parts_;
};

class RadialImpl final : public DistributionImpl {
  public:
    RadialImpl(RadialForm form, RealFunction override_density)
        : form_(std::move(form)), override_(std::move(override_density)) {}

    DistributionKind kind() const override { return DistributionKind::constructed; }
    std::string describe() const override {
        std::string s = "radial(center=" + fmt(form_.center) + ", beta exponents {";
        for (std::size_t i = 0; i < form_.exponents.size(); ++i)
            s += (i ? "," : "") + std::to_string(form_.exponents[i]);
        return s + "}, " + form_.base.describe() + ")";
    }
    Support support() const override { return hull(form_.base.support(), form_.center); }
    Support effective_support() const override {
        return hull(form_.base.effective_support(), form_.center);
    }
    bool has_density() const override { return true; }
    double density(double x) const override {
        if (override_) return override_(x);
        const double c = form_.center;
        const auto& base = form_.base;
        if (base.is_discrete()) {
            double s = 0.0;
            for (const auto& a : base.atoms()) {
                const double d = a.x - c;
                if (d == 0.0) continue;
                const double r = (x - c) / d;
                const bool inside = d > 0 ? (r >= 0.0 && r <= 1.0) : (r > 0.0 && r < 1.0);
                if (inside) s += a.p * product_beta_density(form_.exponents, r) / std::abs(d);
            }
            return s;
        }
        const double d = x - c;
        const Support eff = base.effective_support();
        std::vector<double> breaks;
        for (double b : base.breakpoints()) breaks.push_back(b - c);
        QuadratureConfig q;
        q.abs_tol = 1e-11;
        q.rel_tol = 1e-10;
        if (d == 0.0) {
            const double py = base.density(c);
            const int jmin = *std::min_element(form_.exponents.begin(), form_.exponents.end());
            if (jmin > 1) {
                // E[1/S] p_Y(c); the density is continuous here.
                double inv = 1.0;
                for (int j : form_.exponents) inv *= static_cast<double>(j) / (j - 1);
                return py * inv;
            }
            if (py > 0.0) return kInf;
            // Right-hand limit f_S(0) int_{u > 0} p_Y(c + u) / u du.
            if (!(eff.hi > c)) return 0.0;
            return product_beta_density(form_.exponents, 0.0) *
                   integrate([&](double u) { return u > 0.0 ? base.density(c + u) / u : 0.0; }, 0.0, eff.hi - c,
                             breaks, q);
        }
        // Substitute u = d / s, so u runs over [d, edge of the base support] on the side of d.
        double lo;
        double hi;
        if (d > 0) {
            lo = d;
            hi = eff.hi - c;
        } else {
            lo = eff.lo - c;
            hi = d;
        }
        if (!(lo < hi)) return 0.0;
        return integrate(
            [&](double u) {
                const double py = base.density(c + u);
                if (py == 0.0) return 0.0;
                return product_beta_density(form_.exponents, d / u) * py / std::abs(u);
            },
            lo, hi, breaks, q);
    }
    double draw(RandomSource& rng) const override {
        double s = 1.0;
        for (int j : form_.exponents) s *= std::pow(rng.uniform(), 1.0 / j);
        const double y = form_.base.draw(rng);
        return form_.center + s * (y - form_.center);
    }
    bool has_sampler() const override { return form_.base.has_sampler(); }
    std::vector<double> moments(int n_max, const QuadratureConfig& config) const override {
        const double c = form_.center;
        const auto ym = form_.base.impl().moments(n_max, config);
        std::vector<double> m(static_cast<std::size_t>(n_max) + 1, 0.0);
        for (int n = 0; n <= n_max; ++n) {
            long double total = 0.0L;
            for (int r = 0; r <= n; ++r) {
                // E[(Y - c)^r]
                long double central = 0.0L;
                for (int q = 0; q <= r; ++q)
                    central += binomial(r, q) * static_cast<long double>(ym[q]) * std::pow(-c, r - q);
                long double es = 1.0L;
                for (int j : form_.exponents) es *= static_cast<long double>(j) / (j + r);
                total += binomial(n, r) * std::pow(static_cast<long double>(c), n - r) * es * central;
            }
            m[n] = static_cast<double>(total);
        }
        m[0] = 1.0;
        return m;
    }
    std::vector<double> breakpoints() const override {
        auto b = merge_points(form_.base.breakpoints(), std::vector<double>{form_.center});
        for (const auto& a : form_.base.atoms()) b.push_back(a.x);
        return merge_points(std::move(b), {});
    }
    const RadialForm* radial() const override { return &form_; }

  private:
    RadialForm form_;
    RealFunction override_;
};

Distribution to_atoms(const Distribution& d) {
    if (d.is_discrete()) return d;
    auto xs = d.impl().samples();
    std::vector<Atom> atoms;
    const double p = 1.0 / static_cast<double>(xs.size());
    for (double x : xs) atoms.push_back({x, p});
    return discrete(std::move(atoms));
}

void check_nonnegative(const Distribution& d, const Weight& w) {
    for (double x : validation_grid(d, w.breakpoints())) {
        const double v = w(x);
        if (v < -kWeightTolerance || std::isnan(v)) {
            std::ostringstream msg;
            msg << "weight " << w.name() << " is negative at " << x << " (" << v << ")";
            fail(ErrorCode::negative_weight, msg.str());
        }
    }
}

}  // namespace

Distribution uniform(double lo, double hi) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform needs finite lo < hi");
    return Distribution(std::make_shared<CatalogImpl>(Family::uniform, lo, hi));
}

Distribution normal(double mean, double sd) {
    require(std::isfinite(mean) && std::isfinite(sd) && sd > 0, "normal needs finite mean and sd > 0");
    return Distribution(std::make_shared<CatalogImpl>(Family::normal, mean, sd));
}

Distribution exponential(double rate) {
    require(std::isfinite(rate) && rate > 0, "exponential needs rate > 0");
    return Distribution(std::make_shared<CatalogImpl>(Family::exponential, rate, 0.0));
}

Distribution half_normal(double sigma) {
    require(std::isfinite(sigma) && sigma > 0, "half_normal needs sigma > 0");
    return Distribution(std::make_shared<CatalogImpl>(Family::half_normal, sigma, 0.0));
}

Distribution negative_half_normal(double sigma) {
    require(std::isfinite(sigma) && sigma > 0, "negative_half_normal needs sigma > 0");
    return Distribution(std::make_shared<CatalogImpl>(Family::negative_half_normal, sigma, 0.0));
}

Distribution dirac(double x) { return discrete({{x, 1.0}}); }

Distribution discrete(std::vector<Atom> atoms) {
    std::map<double, double> merged;
    double total = 0.0;
    for (const auto& a : atoms) {
        require(std::isfinite(a.x) && std::isfinite(a.p), "atoms must be finite");
        if (a.p < 0) fail(ErrorCode::invalid_argument, "atom masses must be nonnegative");
        total += a.p;
        if (a.p > 0) merged[a.x] += a.p;
    }
    if (merged.empty()) fail(ErrorCode::invalid_argument, "a discrete law needs positive mass");
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "atom masses must sum to 1 within 1e-12 (sum " << total << ")";
        fail(ErrorCode::invalid_argument, msg.str());
    }
    std::vector<Atom> out;
    for (auto [x, p] : merged) out.push_back({x, p});
    return Distribution(std::make_shared<AtomsImpl>(std::move(out)));
}

Distribution empirical(std::vector<double> samples) {
    require(!samples.empty(), "empirical law needs at least one sample");
    for (double x : samples) require(std::isfinite(x), "samples must be finite");
    return Distribution(std::make_shared<EmpiricalImpl>(std::move(samples)));
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"uniform", {"lo", "hi"}, "uniform law on [lo, hi]"},
        {"normal", {"mean", "sd"}, "normal law N(mean, sd^2)"},
        {"exponential", {"rate"}, "exponential law on [0, inf)"},
        {"half_normal", {"sigma"}, "law of sigma |Z| on [0, inf)"},
        {"negative_half_normal", {"sigma"}, "law of -sigma |Z| on (-inf, 0]"},
        {"dirac", {"x"}, "point mass at x"},
    };
    return entries;
}

Distribution constructed(ConstructedParts parts) {
    return Distribution(std::make_shared<ConstructedImpl>(std::move(parts)));
}

Distribution radial_law(RadialForm form, RealFunction density_override) {
    require(!form.exponents.empty(), "radial law needs at least one exponent");
    // Flatten nested radial laws with the same center.
    if (const auto* inner = form.base.radial(); inner && inner->center == form.center) {
        RadialForm flat = *inner;
        flat.exponents.insert(flat.exponents.end(), form.exponents.begin(), form.exponents.end());
        std::sort(flat.exponents.begin(), flat.exponents.end());
        if (std::adjacent_find(flat.exponents.begin(), flat.exponents.end()) == flat.exponents.end())
            return Distribution(std::make_shared<RadialImpl>(std::move(flat), std::move(density_override)));
    }
    std::sort(form.exponents.begin(), form.exponents.end());
    require(std::adjacent_find(form.exponents.begin(), form.exponents.end()) == form.exponents.end(),
            "radial exponents must be distinct");
    for (int j : form.exponents) require(j >= 1, "radial exponents must be positive");
    return Distribution(std::make_shared<RadialImpl>(std::move(form), std::move(density_override)));
}

double product_beta_density(std::span<const int> exponents, double s) {
    if (s < 0.0 || s > 1.0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        double c = 1.0;
        for (std::size_t l = 0; l < exponents.size(); ++l)
            if (l != i) c *= static_cast<double>(exponents[l]) / (exponents[l] - exponents[i]);
        total += c * exponents[i] * std::pow(s, exponents[i] - 1);
    }
    return std::max(total, 0.0);
}

// ---------------------------------------------------------------- weights

Weight::Weight(RealFunction fn, std::string name, std::vector<double> breakpoints)
    : fn_(std::move(fn)), name_(std::move(name)), breaks_(std::move(breakpoints)) {}

Weight Weight::unit() {
    Weight w([](double) { return 1.0; }, "1");
    w.poly_ = Polynomial::constant(1.0);
    w.unit_ = true;
    return w;
}

Weight Weight::polynomial(Polynomial p, std::string name) {
    if (name.empty()) name = "poly(deg " + std::to_string(p.degree()) + ")";
    Weight w([p](double y) { return p(y); }, std::move(name));
    w.poly_ = std::move(p);
    return w;
}

Weight Weight::abs_power(double center, int power) {
    require(power >= 1, "abs_power needs power >= 1");
    Weight w([center, power](double y) { return std::pow(std::abs(y - center), power); },
             "|y-" + fmt(center) + "|^" + std::to_string(power), {center});
    w.abs_ = AbsPower{center, power};
    if (power % 2 == 0) {
        Polynomial p = Polynomial::constant(1.0);
        for (int i = 0; i < power; ++i) p = p * Polynomial({-center, 1.0});
        w.poly_ = std::move(p);
    }
    return w;
}

Weight operator*(const Weight& a, const Weight& b) {
    if (a.unit_) return b;
    if (b.unit_) return a;
    if (a.abs_ && b.abs_ && a.abs_->center == b.abs_->center)
        return Weight::abs_power(a.abs_->center, a.abs_->power + b.abs_->power);
    Weight w([fa = a.fn_, fb = b.fn_](double y) { return fa(y) * fb(y); }, a.name_ + "*" + b.name_,
             merge_points(a.breaks_, b.breaks_));
    if (a.poly_ && b.poly_) w.poly_ = *a.poly_ * *b.poly_;
    return w;
}

// ---------------------------------------------------------------- operations

double moment(const Distribution& d, int n, const QuadratureConfig& config) {
    require(n >= 0, "moment order must be nonnegative");
    return d.impl().moments(n, config)[static_cast<std::size_t>(n)];
}

std::vector<double> moments(const Distribution& d, int n_max, const QuadratureConfig& config) {
    require(n_max >= 0, "moment order must be nonnegative");
    return d.impl().moments(n_max, config);
}

std::vector<double> sample(const Distribution& d, RandomSource& rng, std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(d.draw(rng));
    return out;
}

double expect(const Distribution& d, const RealFunction& f, const QuadratureConfig& config,
              std::span<const double> extra_breaks) {
    return d.impl().expect(f, Window{}, config, extra_breaks);
}

double expect_on(const Distribution& d, const RealFunction& f, const Window& w,
                 const QuadratureConfig& config, std::span<const double> extra_breaks) {
    return d.impl().expect(f, w, config, extra_breaks);
}

double normalizer(const Distribution& d, const Weight& w, const QuadratureConfig& config) {
    if (w.is_unit()) return 1.0;
    if (const auto& a = w.abs_power_form(); a && !d.is_discrete()) {
        // E|c + S(Y - c) - c|^p = E[S^p] E|Y - c|^p.
        if (const auto* r = d.radial(); r && r->center == a->center) {
            double es = 1.0;
            for (int j : r->exponents) es *= static_cast<double>(j) / (j + a->power);
            return es * normalizer(r->base, w, config);
        }
        if (d.kind() == DistributionKind::tilted) {
            const auto& t = static_cast<const TiltedImpl&>(d.impl());
            return normalizer(t.base(), t.weight() * w, config) / t.z();
        }
    }
    if (const auto& p = w.polynomial_form(); p && !d.is_discrete()) {
        if (p->is_zero()) return 0.0;
        const auto m = d.impl().moments(p->degree(), config);
        long double s = 0.0L;
        for (int i = 0; i <= p->degree(); ++i) s += static_cast<long double>(p->coefficient(i)) * m[i];
        return static_cast<double>(s);
    }
    return d.impl().expect(w, Window{}, config, w.breakpoints());
}

Distribution tilt(const Distribution& d, const Weight& w, const QuadratureConfig& config) {
    if (w.is_unit()) return d;
    check_nonnegative(d, w);

    auto zero_normalizer = [&](double z) {
        std::ostringstream msg;
        msg << "E[w(X)] = " << z << " for weight " << w.name() << " under " << d.describe();
        fail(ErrorCode::zero_normalizer, msg.str());
    };

    if (d.is_discrete() || d.kind() == DistributionKind::empirical) {
        const Distribution a = to_atoms(d);
        std::vector<Atom> out;
        long double z = 0.0L;
        for (const auto& atom : a.atoms()) {
            const double v = std::max(0.0, w(atom.x));
            out.push_back({atom.x, atom.p * v});
            z += static_cast<long double>(atom.p) * v;
        }
        if (!(z > kNormalizerTolerance)) zero_normalizer(static_cast<double>(z));
        // Renormalize, then fix the sum exactly on the largest atom.
        double sum = 0.0;
        for (auto& atom : out) sum += (atom.p = static_cast<double>(atom.p / z));
        auto big = std::max_element(out.begin(), out.end(),
                                    [](const Atom& l, const Atom& r) { return l.p < r.p; });
        big->p += 1.0 - sum;
        return discrete(std::move(out));
    }

    if (d.kind() == DistributionKind::mixture) {
        const auto& mix = static_cast<const MixtureImpl&>(d.impl());
        std::vector<Distribution> comps;
        std::vector<double> zs;
        double total = 0.0;
        for (std::size_t i = 0; i < mix.components().size(); ++i) {
            const double zi = normalizer(mix.components()[i], w, config);
            if (zi > kNormalizerTolerance) {
                comps.push_back(tilt(mix.components()[i], w, config));
                zs.push_back(mix.weights()[i] * zi);
                total += mix.weights()[i] * zi;
            }
        }
        if (!(total > kNormalizerTolerance)) zero_normalizer(total);
        for (double& z : zs) z /= total;
        const double sum = std::accumulate(zs.begin(), zs.end(), 0.0);
        zs.back() += 1.0 - sum;
        return make_mixture(std::move(comps), std::move(zs));
    }

    if (const auto* r = d.radial(); r && w.abs_power_form() && w.abs_power_form()->center == r->center) {
        const int p = w.abs_power_form()->power;
        RadialForm form{r->center, r->exponents, tilt(r->base, w, config)};
        for (int& j : form.exponents) j += p;
        return radial_law(std::move(form));
    }

    if (d.kind() == DistributionKind::tilted) {
        const auto& t = static_cast<const TiltedImpl&>(d.impl());
        return tilt(t.base(), t.weight() * w, config);
    }

    const double z = normalizer(d, w, config);
    if (!(z > kNormalizerTolerance)) zero_normalizer(z);
    return Distribution(std::make_shared<TiltedImpl>(d, w, z, config));
}

Distribution make_mixture(std::vector<Distribution> components, std::vector<double> weights) {
    if (components.size() != weights.size() || components.empty())
        fail(ErrorCode::weight_mismatch, "mixture needs one weight per component");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) fail(ErrorCode::weight_mismatch, "mixture weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "mixture weights must sum to 1 within 1e-12 (sum " << sum << ")";
        fail(ErrorCode::weight_mismatch, msg.str());
    }
    std::vector<Distribution> comps;
    std::vector<double> ws;
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (weights[i] == 0.0) continue;
        comps.push_back(components[i]);
        ws.push_back(weights[i]);
    }
    if (comps.size() == 1) return comps[0];
    if (std::all_of(comps.begin(), comps.end(), [](const auto& c) { return c.is_discrete(); })) {
        std::vector<Atom> atoms;
        for (std::size_t i = 0; i < comps.size(); ++i)
            for (const auto& a : comps[i].atoms()) atoms.push_back({a.x, ws[i] * a.p});
        return discrete(std::move(atoms));
    }
    return Distribution(std::make_shared<MixtureImpl>(std::move(comps), std::move(ws)));
}

std::vector<double> validation_grid(const Distribution& d, std::span<const double> extra, int points) {
    std::vector<double> g;
    const bool sampled = d.is_discrete() || !d.impl().samples().empty();
    const Support eff = d.effective_support();
    if (!sampled && std::isfinite(eff.lo) && std::isfinite(eff.hi) && eff.lo < eff.hi && points >= 2) {
        g.reserve(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) g.push_back(eff.lo + (eff.hi - eff.lo) * i / (points - 1));
        for (double b : d.breakpoints())
            if (eff.contains(b)) g.push_back(b);
    }
    for (const auto& a : d.atoms()) g.push_back(a.x);
    for (double x : d.impl().samples()) g.push_back(x);
    g.insert(g.end(), extra.begin(), extra.end());
    return merge_points(std::move(g), {});
}

TabulatedCdf::TabulatedCdf(const Distribution& d, int cells, const QuadratureConfig& config) {
    require(d.has_density(), "tabulated cdf needs a density");
    require(cells >= 1, "tabulated cdf needs at least one cell");
    const Support eff = d.effective_support();
    require(std::isfinite(eff.lo) && std::isfinite(eff.hi), "tabulated cdf needs a finite effective support");
    std::vector<double> g;
    for (int i = 0; i <= cells; ++i) g.push_back(eff.lo + (eff.hi - eff.lo) * i / cells);
    for (double b : d.breakpoints())
        if (b > eff.lo && b < eff.hi) g.push_back(b);
    grid_ = merge_points(std::move(g), {});
    QuadratureConfig cell = config;
    cell.abs_tol = std::min(config.abs_tol, 1e-11);
    values_.assign(grid_.size(), 0.0);
    RealFunction p = [&](double x) { return d.density(x); };
    slope_right_.assign(grid_.size(), 0.0);
    slope_left_.assign(grid_.size(), 0.0);
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        const double a = grid_[i - 1];
        const double b = grid_[i];
        const double eps = 1e-9 * (b - a);
        values_[i] = values_[i - 1] + integrate(p, a, b, {}, cell);
        slope_right_[i - 1] = d.density(a + eps);
        slope_left_[i] = d.density(b - eps);
    }
}

double TabulatedCdf::operator()(double x) const {
    if (x <= grid_.front()) return 0.0;
    if (x >= grid_.back()) return values_.back();
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    const auto i = static_cast<std::size_t>(it - grid_.begin());
    const double h = grid_[i] - grid_[i - 1];
    const double t = (x - grid_[i - 1]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double v = (2 * t3 - 3 * t2 + 1) * values_[i - 1] + (t3 - 2 * t2 + t) * h * slope_right_[i - 1] +
                     (-2 * t3 + 3 * t2) * values_[i] + (t3 - t2) * h * slope_left_[i];
    return std::clamp(v, values_[i - 1], values_[i]);
}

double ks_statistic(std::vector<double> samples, const RealFunction& cdf) {
    require(!samples.empty(), "ks_statistic needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double ks_critical_1pct(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

}  // namespace biasforge
