#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biasforge/poly_interp.hpp"
#include "biasforge/quadrature.hpp"
#include "biasforge/random.hpp"

namespace biasforge {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval [lo, hi]; either end may be infinite.
struct Support {
    double lo = -kInf;
    double hi = kInf;

    bool bounded() const noexcept { return lo > -kInf && hi < kInf; }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

Support hull(Support a, Support b) noexcept;
Support hull(Support a, double x) noexcept;

struct Atom {
    double x;
    double p;
};

/// Integration window with explicit end closedness (only matters for atoms).
struct Window {
    double lo = -kInf;
    double hi = kInf;
    bool lo_closed = true;
    bool hi_closed = true;

    bool contains(double x) const noexcept {
        return (x > lo || (lo_closed && x == lo)) && (x < hi || (hi_closed && x == hi));
    }
};

enum class DistributionKind { catalog, atoms, empirical, tilted, mixture, constructed };

std::string_view to_string(DistributionKind kind) noexcept;

struct RadialForm;

/// Behaviour behind a Distribution handle. Implementations are immutable.
class DistributionImpl {
  public:
    virtual ~DistributionImpl() = default;

    virtual DistributionKind kind() const = 0;
    virtual std::string describe() const = 0;
    virtual Support support() const = 0;
    /// Finite range outside which the density is below 1e-16 of its peak.
    virtual Support effective_support() const { return support(); }

    virtual bool has_density() const { return false; }
    virtual double density(double x) const;
    virtual bool has_cdf() const { return false; }
    virtual double cdf(double x) const;
    virtual std::span<const Atom> atoms() const { return {}; }
    virtual std::span<const double> samples() const { return {}; }

    virtual bool has_sampler() const { return true; }
    virtual double draw(RandomSource& rng) const = 0;

    /// E[X^0], ..., E[X^n_max].
    virtual std::vector<double> moments(int n_max, const QuadratureConfig& config) const;
    /// E[f(X) 1{X in w}].
    virtual double expect(const RealFunction& f, const Window& w, const QuadratureConfig& config,
                          std::span<const double> extra_breaks) const;
    /// Points where the density may kink or jump.
    virtual std::vector<double> breakpoints() const { return {}; }
    virtual const RadialForm* radial() const { return nullptr; }
};

/// Shared handle to an immutable law.
class Distribution {
  public:
    explicit Distribution(std::shared_ptr<const DistributionImpl> impl);

    const DistributionImpl& impl() const noexcept { return *impl_; }
    DistributionKind kind() const { return impl_->kind(); }
    std::string describe() const { return impl_->describe(); }
    Support support() const { return impl_->support(); }
    Support effective_support() const { return impl_->effective_support(); }
    bool has_density() const { return impl_->has_density(); }
    double density(double x) const { return impl_->density(x); }
    bool has_cdf() const { return impl_->has_cdf(); }
    double cdf(double x) const { return impl_->cdf(x); }
    std::span<const Atom> atoms() const { return impl_->atoms(); }
    bool is_discrete() const { return !impl_->atoms().empty(); }
    bool has_sampler() const { return impl_->has_sampler(); }
    double draw(RandomSource& rng) const;
    std::vector<double> breakpoints() const { return impl_->breakpoints(); }
    const RadialForm* radial() const { return impl_->radial(); }

  private:
    std::shared_ptr<const DistributionImpl> impl_;
};

/// Law of c + S (Y - c) where S is a product of independent Beta(j, 1) variables,
/// one per exponent j, independent of Y ~ base.
struct RadialForm {
    double center;
    std::vector<int> exponents;
    Distribution base;
};

/// Nonnegative weight for tilting. Structured forms are kept when known so that
/// tilts stay exact.
class Weight {
  public:
    struct AbsPower {
        double center;
        int power;
    };

    Weight(RealFunction fn, std::string name, std::vector<double> breakpoints = {});

    static Weight unit();
    static Weight polynomial(Polynomial p, std::string name = {});
    /// |y - center|^power.
    static Weight abs_power(double center, int power);

    double operator()(double y) const { return fn_(y); }
    const std::string& name() const noexcept { return name_; }
    const std::optional<Polynomial>& polynomial_form() const noexcept { return poly_; }
    const std::optional<AbsPower>& abs_power_form() const noexcept { return abs_; }
    const std::vector<double>& breakpoints() const noexcept { return breaks_; }
    bool is_unit() const noexcept { return unit_; }

    friend Weight operator*(const Weight& a, const Weight& b);

  private:
    RealFunction fn_;
    std::string name_;
    std::vector<double> breaks_;
    std::optional<Polynomial> poly_;
    std::optional<AbsPower> abs_;
    bool unit_ = false;
};

/// Tolerance below which a normalizer E[w(X)] counts as zero.
inline constexpr double kNormalizerTolerance = 1e-12;
/// Weights below minus this value are rejected.
inline constexpr double kWeightTolerance = 1e-12;

// Catalog.
Distribution uniform(double lo, double hi);
Distribution normal(double mean, double sd);
Distribution exponential(double rate);
/// Law of sigma |Z| on [0, inf).
Distribution half_normal(double sigma);
/// Law of -sigma |Z| on (-inf, 0].
Distribution negative_half_normal(double sigma);
Distribution dirac(double x);
/// Atoms with positive masses summing to 1 within 1e-12; equal locations merge.
Distribution discrete(std::vector<Atom> atoms);
Distribution empirical(std::vector<double> samples);

/// Name and parameter names of each catalog family.
struct CatalogEntry {
    std::string family;
    std::vector<std::string> params;
    std::string description;
};
const std::vector<CatalogEntry>& catalog();

/// Closures for a law built by a construction recipe.
struct ConstructedParts {
    std::string description;
    Support support;
    Support effective_support;
    std::function<double(RandomSource&)> draw;
    RealFunction density;
    std::function<std::vector<double>(int)> moments;
    std::vector<double> breakpoints;
};
Distribution constructed(ConstructedParts parts);

/// c + S (Y - c) as a constructed law; density_override replaces the generic
/// density formula when a closed form is known.
Distribution radial_law(RadialForm form, RealFunction density_override = {});

/// Density of the product of independent Beta(j, 1), distinct exponents.
double product_beta_density(std::span<const int> exponents, double s);

double moment(const Distribution& d, int n, const QuadratureConfig& config = {});
std::vector<double> moments(const Distribution& d, int n_max, const QuadratureConfig& config = {});
std::vector<double> sample(const Distribution& d, RandomSource& rng, std::size_t n);
double expect(const Distribution& d, const RealFunction& f, const QuadratureConfig& config = {},
              std::span<const double> extra_breaks = {});
double expect_on(const Distribution& d, const RealFunction& f, const Window& w,
                 const QuadratureConfig& config = {}, std::span<const double> extra_breaks = {});

/// E[w(X)], exact through moments for polynomial weights.
double normalizer(const Distribution& d, const Weight& w, const QuadratureConfig& config = {});
/// dnu = w dmu / E[w(X)].
Distribution tilt(const Distribution& d, const Weight& w, const QuadratureConfig& config = {});

Distribution make_mixture(std::vector<Distribution> components, std::vector<double> weights);

/// Probe points for sign conditions: the atoms or samples of a discrete law,
/// otherwise a grid over the effective support plus breakpoints; extra points
/// are always included.
std::vector<double> validation_grid(const Distribution& d, std::span<const double> extra = {},
                                    int points = 4097);

/// CDF of a density tabulated on a grid; between grid points it is the cubic
/// Hermite interpolant whose end slopes are the density just inside the cell.
class TabulatedCdf {
  public:
    TabulatedCdf(const Distribution& d, int cells = 4096, const QuadratureConfig& config = {});
    double operator()(double x) const;
    /// Mass captured by the tabulation; 1 for a normalized density.
    double total() const noexcept { return values_.empty() ? 0.0 : values_.back(); }

  private:
    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> slope_right_;  // density at the left end of each cell
    std::vector<double> slope_left_;   // density at the right end of each cell
};

/// Kolmogorov-Smirnov statistic of samples against a CDF.
double ks_statistic(std::vector<double> samples, const RealFunction& cdf);
/// Asymptotic 1% critical value 1.63 / sqrt(n).
double ks_critical_1pct(std::size_t n);

}  // namespace biasforge
