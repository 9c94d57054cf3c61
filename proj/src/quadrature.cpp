#include "biasforge/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "biasforge/errors.hpp"

namespace biasforge {
namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;

struct Cell {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Cell& other) const { return error < other.error; }
};

Cell evaluate_cell(const RealFunction& f, double a, double b) {
    double err = 0.0;
    double l1 = 0.0;
    // Boost reports the error relative to the L1 norm of the integrand.
    double v = Rule::integrate(f, a, b, 0, 0.0, &err, &l1);
    err *= l1;
    if (!std::isfinite(v)) {
        // A non-finite endpoint-adjacent sample; report it as unconverged so
        // the driver bisects toward it.
        return {a, b, 0.0, std::numeric_limits<double>::infinity()};
    }
    return {a, b, v, std::isfinite(err) ? err : std::numeric_limits<double>::infinity()};
}

double adaptive(const RealFunction& f, std::vector<double> cuts, const QuadratureConfig& cfg,
                double& error_out) {
    std::priority_queue<Cell> cells;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        Cell c = evaluate_cell(f, cuts[i], cuts[i + 1]);
        total += c.value;
        total_err += c.error;
        cells.push(c);
    }
    int splits = 0;
    auto converged = [&] {
        return total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    };
    while (!cells.empty() && !converged() && splits < cfg.max_subdivisions) {
        Cell worst = cells.top();
        cells.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval exhausted at floating point resolution; keep its estimate.
            total_err -= worst.error;
            worst.error = 0.0;
            cells.push(worst);
            continue;
        }
        Cell left = evaluate_cell(f, worst.a, mid);
        Cell right = evaluate_cell(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        cells.push(left);
        cells.push(right);
        ++splits;
    }
    // Re-sum to shed the drift accumulated by incremental updates.
    total = 0.0;
    total_err = 0.0;
    while (!cells.empty()) {
        total += cells.top().value;
        total_err += cells.top().error;
        cells.pop();
    }
    error_out = total_err;
    if (!std::isfinite(total) || total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
        std::ostringstream msg;
        msg << "quadrature did not converge: estimate " << total << ", error " << total_err;
        fail(ErrorCode::non_integrable, msg.str());
    }
    return total;
}

}  // namespace

double integrate(const RealFunction& f, double lo, double hi, std::span<const double> breakpoints,
                 const QuadratureConfig& config, double& error_estimate) {
    require(config.abs_tol > 0.0 && config.rel_tol > 0.0, "quadrature tolerances must be positive");
    error_estimate = 0.0;
    if (lo == hi) return 0.0;
    if (lo > hi) {
        return -integrate(f, hi, lo, breakpoints, config, error_estimate);
    }
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) {
        std::vector<double> cuts{lo};
        for (double b : breakpoints) {
            if (b > lo && b < hi) cuts.push_back(b);
        }
        cuts.push_back(hi);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        return adaptive(f, std::move(cuts), config, error_estimate);
    }

    // x = c + s tan(theta); the centre sits on the finite end when there is one.
    const double s = config.tangent_scale;
    const double c = lo_inf ? (hi_inf ? 0.0 : hi) : lo;
    const double half_pi = std::numbers::pi / 2;
    const double t_lo = lo_inf ? -half_pi : 0.0;
    const double t_hi = hi_inf ? half_pi : 0.0;
    RealFunction mapped = [&](double theta) {
        double x = c + s * std::tan(theta);
        if (!std::isfinite(x)) return 0.0;
        double fx = f(x);
        if (fx == 0.0) return 0.0;
        double sec = 1.0 / std::cos(theta);
        double v = fx * s * sec * sec;
        return std::isfinite(v) ? v : 0.0;
    };
    std::vector<double> cuts{t_lo};
    for (double b : breakpoints) {
        if (b > lo && b < hi) cuts.push_back(std::atan((b - c) / s));
    }
    cuts.push_back(t_hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return adaptive(mapped, std::move(cuts), config, error_estimate);
}

double integrate(const RealFunction& f, double lo, double hi, std::span<const double> breakpoints,
                 const QuadratureConfig& config) {
    double err = 0.0;
    return integrate(f, lo, hi, breakpoints, config, err);
}

}  // namespace biasforge
