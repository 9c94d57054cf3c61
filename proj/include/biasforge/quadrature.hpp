#pragma once

#include <functional>
#include <span>

namespace biasforge {

struct QuadratureConfig {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    int max_subdivisions = 4000;
    /// Infinite ranges are mapped through x = c + scale * tan(theta).
    double tangent_scale = 1.0;
};

using RealFunction = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (21 point) integration of f over [lo, hi].
/// Either bound may be infinite. Breakpoints inside the range split the
/// initial partition, which keeps kinks and jumps on cell boundaries.
/// Throws Error(non_integrable) when the tolerance is not met.
double integrate(const RealFunction& f, double lo, double hi,
                 std::span<const double> breakpoints = {},
                 const QuadratureConfig& config = {});

/// Same, also reporting the final error estimate.
double integrate(const RealFunction& f, double lo, double hi, std::span<const double> breakpoints,
                 const QuadratureConfig& config, double& error_estimate);

}  // namespace biasforge
