#pragma once

#include "biasforge/bias_transform.hpp"

namespace biasforge {

/// Law of X-hat_a with E[f(X) - f(a) - f'(a)(X - a)] = (1/2) E[(X - a)^2] E[f''(X-hat_a)].
/// Built as two sign(. - a) bias stages with node a; alpha is (1/2) E[(X - a)^2].
/// Throws DegenerateAlpha when X is (numerically) a point mass at a.
BiasedDistribution hat_transform(const Distribution& X, double a, const BiasOptions& options = {});

/// (1/m!) E[B(X) (X^m - L(X))] with L the interpolant of x^m at the nodes.
/// Throws ParityMismatch unless k <= m and k = m (mod 2), DegenerateBeta when not positive.
double beta_of(const Distribution& X, const SignChangeSpec& spec, int m, const QuadratureConfig& config = {});
/// The same expectation with only the parity check; may be zero.
double raw_beta(const Distribution& X, const SignChangeSpec& spec, int m, const QuadratureConfig& config = {});

/// X^(B,m): Y = bias(X, spec) followed by (m - k)/2 hat transforms at 0. The
/// recipe lists each step with its normalizer (1/2) E[Y_{l-1}^2]; beta is set.
BiasedDistribution bias_km(const Distribution& X, const SignChangeSpec& spec, int m,
                           const BiasOptions& options = {});

/// (n)_j = n (n-1) ... (n-j+1), as an exact integer product.
long long falling_factorial(int n, int j);

}  // namespace biasforge
