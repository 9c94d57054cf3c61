#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biasforge/dist_core.hpp"
#include "biasforge/functions.hpp"
#include "biasforge/poly_interp.hpp"

namespace biasforge {

/// B with its declared sign-change nodes. The only supported orientation has
/// prod (x - x_j) B(x) >= 0, i.e. B nonnegative on the last interval.
struct SignChangeSpec {
    BiasFunction B;
    NodeSet nodes;

    int k() const noexcept { return nodes.k(); }
    /// prod_j (x - x_j) B(x).
    double weight(double x) const { return nodes.node_product(x) * B(x); }
    /// The same product as a tilting weight, polynomial or |x - c| when possible.
    Weight tilt_weight() const;
    /// Breakpoints of B together with the nodes.
    std::vector<double> breakpoints() const;
};

struct ValidationReport {
    bool pass = true;
    /// The spec holds with the opposite sign everywhere (rejected, not negated).
    bool reversed = false;
    std::size_t probes = 0;
    /// Most negative prod (x - x_j) B(x) seen and where.
    double worst_value = 0.0;
    std::optional<double> violation;
    std::string message;
};

inline constexpr double kValidationTolerance = 1e-10;
inline constexpr double kAlphaTolerance = 1e-12;

ValidationReport validate(const SignChangeSpec& spec, std::span<const double> probes);
/// Probes are the atoms of X, or a 4097-point grid over its effective support,
/// plus the nodes and the nodes +- 1e-6.
ValidationReport validate(const SignChangeSpec& spec, const Distribution& probe);

/// (1/k!) E[B(X) prod (X - x_j)]. Throws DegenerateAlpha / NegativeAlpha.
double alpha_of(const Distribution& X, const SignChangeSpec& spec, const QuadratureConfig& config = {});
/// The same expectation without the sign checks.
double raw_alpha(const Distribution& X, const SignChangeSpec& spec, const QuadratureConfig& config = {});

/// How the density of a k >= 2 transform is evaluated.
enum class DensityRoute {
    /// Mixture over the seed law of the B-spline with knots x_1..x_k, Y (exact on atoms).
    spline,
    /// Reduction to k = 1 followed by k-1 integral steps, each level cached on a grid.
    iterated_grid,
};

struct BiasOptions {
    DensityRoute route = DensityRoute::spline;
    /// Points per cached level for the iterated_grid route.
    int grid_points = 2049;
    QuadratureConfig quadrature{};
};

/// How the law was built: Y ~ seed, then W_j = x_j + U_j (W_{j-1} - x_j) with
/// U_j ~ Beta(j, 1), followed by any chained stages.
struct Recipe {
    std::string description;
    std::optional<Distribution> seed;
    std::vector<int> beta_exponents;
    std::vector<double> nodes;
    std::vector<std::string> steps;
    std::vector<double> step_normalizers;
};

struct BiasedDistribution {
    Distribution law;
    double alpha;
    std::optional<double> beta;
    Recipe recipe;

    double density(double t) const { return law.density(t); }
};

/// The generalized X-B biased law. For k = 0 this is the tilted law itself.
/// Sampling takes a caller-owned RandomSource at draw time.
BiasedDistribution bias(const Distribution& X, const SignChangeSpec& spec, const BiasOptions& options = {});

/// (1/alpha) E[B(X) (1{x_1 <= t <= X} - 1{X < t < x_1})] for k = 1.
double density_m1(const Distribution& X, const SignChangeSpec& spec, double t,
                  const QuadratureConfig& config = {});
/// Same with alpha supplied (skips recomputing it).
double density_m1(const Distribution& X, const SignChangeSpec& spec, double alpha, double t,
                  const QuadratureConfig& config);

/// m int_0^1 p~(x_m + (t - x_m)/s) s^(m-2) ds, computed with u = (t - x_m)/s.
/// inner_support bounds where p~ can be nonzero; breakpoints mark its kinks and jumps.
double density_iter(const RealFunction& inner_density, double x_m, int m, double t,
                    Support inner_support = {}, std::span<const double> breakpoints = {},
                    const QuadratureConfig& config = {});

/// Normalized B-spline (integrates to 1) of degree n-2 with n knots, by Cox-de Boor.
double bspline_density(std::vector<double> knots, double t);

/// Mixture of the per-component biased laws with weights alpha_s gamma_s / alpha.
BiasedDistribution mixture_bias(const std::vector<Distribution>& components, const std::vector<double>& gamma,
                                const SignChangeSpec& spec, const BiasOptions& options = {});

}  // namespace biasforge
