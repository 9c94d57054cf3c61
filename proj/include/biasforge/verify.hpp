#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "biasforge/stein_ops.hpp"

namespace biasforge {

/// A test function that is a piecewise polynomial, so every derivative is exact.
struct BankFunction {
    std::string name;
    /// "monomial", "piecewise-linear" or "bump".
    std::string kind;
    /// Member of F^smoothness: C^(s-1) with a Lipschitz (s-1)-th derivative.
    int smoothness = 0;
    PiecewisePolynomial f;

    double operator()(double x) const { return f(x); }
    double derivative(int order, double x) const { return order == 0 ? f(x) : f.derivative(order)(x); }
    std::vector<double> breakpoints() const { return f.breakpoints(); }
};

/// Monomials x^d are treated as members of every F^m.
inline constexpr int kSmooth = 1 << 20;

class TestFunctionBank {
  public:
    static BankFunction monomial(int degree);
    /// Continuous, linear between knots and beyond the ends; slopes has knots.size() + 1 entries.
    static BankFunction piecewise_linear(std::vector<double> knots, std::vector<double> slopes, double value_at_first);
    /// ((1 - ((x - center)/width)^2)^+)^(m+1) scaled by height: C^m with Lipschitz m-th derivative.
    static BankFunction bump(double center, double width, int m, double height = 1.0);

    /// Monomials up to d_max, random piecewise-linear functions (<= 5 knots in
    /// [lo, hi]) and random bumps of order m.
    static TestFunctionBank standard(int m, std::uint64_t seed, int d_max = 6, int n_piecewise = 6, int n_bumps = 6,
                                     double lo = -2.0, double hi = 2.0);

    void add(BankFunction f) { members_.push_back(std::move(f)); }
    const std::vector<BankFunction>& members() const noexcept { return members_; }
    /// Members in F^m.
    std::vector<BankFunction> members_of(int m) const;

  private:
    std::vector<BankFunction> members_;
};

struct IdentityReport {
    std::string method;  // "exact-atoms", "quadrature" or "monte-carlo"
    std::string description;
    double lhs = 0.0;
    double rhs = 0.0;
    double lhs_se = 0.0;
    double rhs_se = 0.0;
    double z = 0.0;
    /// Exact routes: pass iff |lhs - rhs| <= tolerance * scale.
    double tolerance = 0.0;
    double scale = 0.0;
    bool pass = false;
    std::size_t n = 0;
    std::uint64_t x_seed = 0;
    std::uint64_t transform_seed = 0;
};

inline constexpr double kExactTolerance = 1e-9;
inline constexpr double kZThreshold = 4.0;

/// Both sides of E[B(X)(F - R_F - L_F)(X)] = c E[F^(m)(X^(B,m))], c = alpha when
/// k = m and beta otherwise. LHS by atom summation; RHS through the moment
/// algebra of the constructed law (F^(m) polynomial) or its atoms.
/// coefficient_scale multiplies c, for sensitivity checks.
IdentityReport check_identity_exact(const Distribution& X, const SignChangeSpec& spec, int m, const BankFunction& F,
                                    double tolerance = kExactTolerance, double coefficient_scale = 1.0);

/// Monte Carlo version from n draws of X and n draws of the transform, on
/// streams derived from seed (offsets kSampleStream and kTransformStream).
/// transform_override replaces the constructed law on the right-hand side
/// (fixed-point and discrimination runs); the coefficient is still alpha or beta.
IdentityReport check_identity_mc(const Distribution& X, const SignChangeSpec& spec, int m, const BankFunction& F,
                                 std::size_t n, std::uint64_t seed, const BiasOptions& options = {},
                                 const std::optional<Distribution>& transform_override = std::nullopt);

/// Random discrete law with 1..max_atoms atoms in [-3, 3].
Distribution random_discrete(RandomSource& rng, int max_atoms);
/// Random valid spec with k nodes in [-2, 2]: B = prod (x - x_j) h(x), h >= 0
/// a shifted square, a shifted positive part or a constant.
SignChangeSpec random_spec(RandomSource& rng, int k);

struct SweepResult {
    std::size_t configurations = 0;
    std::size_t checks = 0;
    std::size_t failures = 0;
    /// max |lhs - rhs| / (tolerance * scale); at most 1 when everything passes.
    double worst_ratio = 0.0;
    std::string first_failure;
};

/// Exact identity checks over random configurations and every monomial F of
/// degree <= max_degree; degenerate draws are redrawn. chain = false: k = m, m in [0, max_m]. chain = true:
/// parity-matched k <= m with m in [1, max_m], half of them with k < m.
SweepResult identity_sweep(std::uint64_t seed, int configurations, int max_atoms, int max_m, bool chain,
                           int max_degree, double tolerance);

struct AmbiguityReport {
    double alpha = 0.0;   // E[X^+ (X + 1)]
    double beta = 0.0;    // E[X^+ X]
    double b_mean = 0.0;  // E[X^+]
    std::vector<double> grid;
    std::vector<double> p;  // node -1
    std::vector<double> q;  // node 0
    double p_error = 0.0;
    double q_error = 0.0;
    double relation_error = 0.0;
    bool pass = false;
};

/// X = U[-1, 1], B = x^+, with the sign change placed at -1 and at 0.
AmbiguityReport ambiguity_demo(int points = 1001, double tolerance = 1e-8);

struct SuiteEntry {
    std::string name;
    bool pass = false;
    std::map<std::string, double> values;
    std::string note;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::vector<SuiteEntry> entries;
    bool pass() const;
};

/// "exact", "mc", "ambi" or "fixed-point".
SuiteReport run_suite(const std::string& name, std::uint64_t seed, std::size_t n);

}  // namespace biasforge
