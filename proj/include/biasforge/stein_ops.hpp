#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biasforge/higher_bias.hpp"

namespace biasforge {

/// L f = f^(m) - sum_j B_j f^(j). B[j] carries its k_j sign-change nodes, with
/// k_j <= m - j and k_j = m - j (mod 2).
struct SteinOperator {
    int m = 1;
    std::vector<SignChangeSpec> B;

    /// Throws ParityMismatch (or InvalidArgument for a size mismatch).
    void check() const;
};

/// X* for f'' - B_1 f' - B_0 f: a mixture of hat_a(tilt(X, B_0)) and the X-B_1
/// biased law with weights alpha_1 / alpha and alpha_2 / alpha, where
/// alpha_1 = E[B_0(X)(X - a)^2] / 2 and alpha_2 = E[B_1(X)(X - a)].
/// B1 must carry the single node a. step_normalizers holds {alpha_1, alpha_2}.
BiasedDistribution second_order_transform(const Distribution& X, const BiasFunction& B0, const SignChangeSpec& B1,
                                          const BiasOptions& options = {});

/// (1/alpha) E[(B_1(X) + B_0(X)(X - t)) (1{a <= t <= X} - 1{X < t < a})].
double second_order_density(const Distribution& X, const BiasFunction& B0, const SignChangeSpec& B1, double t,
                            const QuadratureConfig& config = {});

/// X* = Y_I with Y_j the X-(B_j, m-j) law and P(I = j) = beta_j / beta.
/// Components with beta_j = 0 are left out. Throws AllBetaZero.
/// step_normalizers holds beta_0, ..., beta_{m-1}; alpha and beta hold their sum.
BiasedDistribution higher_order_transform(const Distribution& X, const SteinOperator& op,
                                          const BiasOptions& options = {});

// ------------------------------------------------------------- distance bounds

struct BoundConstants {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

struct FirstOrderStats {
    double coupling_gap = 0.0;  // E|X - X^(B)|
    double alpha = 1.0;
    double b_mean = 0.0;  // E[B(X)]
    /// |f_h(x_1)| when known; replaces c_0.
    std::optional<double> f_at_node;
};

struct SecondOrderStats {
    double coupling_gap = 0.0;  // E|X - X*|
    double alpha = 1.0;
    double slope_residual = 0.0;  // E[B_0(X)(X - a) + B_1(X)]
    double level_residual = 0.0;  // E[B_0(X)]
    std::optional<double> f_at_a;
    std::optional<double> fprime_at_a;
};

struct DistanceBound {
    int order = 1;
    BoundConstants c;
    double coupling_gap = 0.0;
    double alpha_dev = 0.0;
    /// |E[B(X)]| for first order; the slope and level residuals for second order.
    std::vector<double> residuals;
    /// Factor applied to each residual (a c constant or a supplied |f| value).
    std::vector<double> residual_factors;
    double bound = 0.0;
};

/// c_2 gap + c_1 |1 - alpha| + (|f(x_1)| or c_0) |E B(X)|.
DistanceBound first_order_bound(const FirstOrderStats& stats, const BoundConstants& c);
/// c_3 gap + c_2 |1 - alpha| + (|f'(a)| or c_1) |slope| + (|f(a)| or c_0) |level|.
DistanceBound second_order_bound(const SecondOrderStats& stats, const BoundConstants& c);

// ------------------------------------------------------ Monte Carlo estimation

enum class Coupling {
    /// X^(B) := X. Valid only when X is a fixed point of the transform.
    self,
    /// Sorted draws of X paired with sorted draws of X^(B) (comonotone coupling).
    quantile,
    /// Independent draws.
    independent,
};

std::string_view to_string(Coupling c) noexcept;
Coupling parse_coupling(std::string_view name);

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

struct BoundEstimate {
    DistanceBound bound;
    Estimate coupling_gap;
    Estimate alpha;
    std::vector<Estimate> residuals;
    /// Linear propagation of the ingredient standard errors.
    double bound_se = 0.0;
    std::size_t n = 0;
    Coupling coupling = Coupling::quantile;
    std::uint64_t x_seed = 0;
    std::uint64_t transform_seed = 0;
};

/// Seed offsets used to derive the X and transform streams from a report seed.
inline constexpr std::uint64_t kSampleStream = 1;
inline constexpr std::uint64_t kTransformStream = 2;

/// MC estimates of E|X - X^(B)|, alpha and E[B(X)] from n draws of X; spec needs one node.
BoundEstimate estimate_first_order(const Distribution& X, const SignChangeSpec& spec, const BoundConstants& c,
                                   std::size_t n, std::uint64_t seed, Coupling coupling,
                                   std::optional<double> f_at_node = {}, const BiasOptions& options = {});

BoundEstimate estimate_second_order(const Distribution& X, const BiasFunction& B0, const SignChangeSpec& B1,
                                    const BoundConstants& c, std::size_t n, std::uint64_t seed, Coupling coupling,
                                    const BiasOptions& options = {});

// ---------------------------------------------------------------- fixed points

struct FixedPointReport {
    /// Largest residual over the probes.
    double residual = 0.0;
    double worst_at = 0.0;
    double alpha = 0.0;
    std::size_t probes = 0;
    bool pass = false;
    std::string mode;
};

/// max |p'(t)/p(t) + B(t)/alpha| over probes with p(t) > 1e-6, one node required.
FixedPointReport fixed_point_check(const Distribution& Z, const SignChangeSpec& spec, double tolerance = 1e-4,
                                   int probes = 801);
/// max |alpha p'' - (B_0 - B_1') p + B_1 p'| over the probes.
FixedPointReport fixed_point_check(const Distribution& Z, const BiasFunction& B0, const SignChangeSpec& B1,
                                   double tolerance = 1e-4, int probes = 801);

}  // namespace biasforge
