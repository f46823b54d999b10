#pragma once

/**
 * @file convexity.hpp
 * @brief Grid screening of the (alpha, m)-convexity inequality
 *
 *     g(t x + m (1 - t) y) <= t^alpha g(x) + m (1 - t^alpha) g(y)
 *
 * for x, y in [eps, b] and t in [0, 1]. A passing verdict is a necessary
 * condition only; it is used to gate which bounds are asserted.
 */

#include <cmath>
#include <concepts>
#include <functional>
#include <string>
#include <vector>

#include "core.hpp"

namespace hh {

inline constexpr double kViolationTolerance = 1e-9;
inline constexpr double kClipFraction = 1e-8;
inline constexpr int kDefaultGridN = 32;

struct ConvexityWitness {
    double x = kNaN;
    double y = kNaN;
    double t = kNaN;
};

/// `worst_violation` is the largest value of
///   (g(mid) - rhs) / max(1, |g(mid)|, |rhs|)
/// over the grid, i.e. absolute below unit scale and relative above it.
struct ConvexityVerdict {
    bool holds = false;
    double worst_violation = -kInf;
    ConvexityWitness witness;
    /// Lower end of the x, y sample range was moved off 0.
    bool clipped = false;
    double range_lo = kNaN;
    double range_hi = kNaN;
};

/// Samples x, y on grid_n + 1 equi-spaced points of [eps, b] (eps = 1e-8 b)
/// and t on grid_n + 1 points of [0, 1]. Doubling grid_n yields a superset
/// of the previous grid, so worst_violation never decreases under refinement.
template <class G>
    requires std::invocable<G&, double>
ConvexityVerdict check_alpha_m_convex(G&& g, double b, double alpha, double m, int grid_n = kDefaultGridN) {
    if (!(b > 0.0) || !std::isfinite(b))
        throw ParamError("convexity check requires finite b > 0");
    if (grid_n < 8)
        throw ParamError("convexity check requires grid_n >= 8");
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(m >= 0.0 && m <= 1.0))
        throw ParamError("convexity check requires (alpha, m) in [0, 1]^2");

    const double lo = kClipFraction * b;
    const auto n = static_cast<std::size_t>(grid_n);

    auto eval = [&](double x) {
        const double v = g(x);
        if (!std::isfinite(v))
            throw NonFiniteError("g is not finite at x = " + std::to_string(x));
        return v;
    };

    std::vector<double> pts(n + 1);
    std::vector<double> gv(n + 1);
    std::vector<double> ts(n + 1);
    std::vector<double> ta(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(n);
        pts[i] = lo + (b - lo) * frac;
        gv[i] = eval(pts[i]);
        ts[i] = frac;
        ta[i] = std::pow(frac, alpha);
    }

    ConvexityVerdict v;
    v.clipped = true;
    v.range_lo = lo;
    v.range_hi = b;
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            for (std::size_t k = 0; k <= n; ++k) {
                const double t = ts[k];
                const double mid = t * pts[i] + m * (1.0 - t) * pts[j];
                const double lhs = eval(mid);
                const double rhs = ta[k] * gv[i] + m * (1.0 - ta[k]) * gv[j];
                const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
                const double viol = (lhs - rhs) / scale;
                if (viol > v.worst_violation) {
                    v.worst_violation = viol;
                    v.witness = {pts[i], pts[j], t};
                }
            }
        }
    }
    v.holds = v.worst_violation <= kViolationTolerance;
    return v;
}

/// x -> |f'(x)|^q.
inline std::function<double(double)> derivative_power(const TestFunction& fn, double q) {
    if (!(q >= 1.0))
        throw ParamError("derivative_power requires q >= 1");
    if (q == 1.0)
        return [df = fn.df](double x) { return std::abs(df(x)); };
    return [df = fn.df, q](double x) { return std::pow(std::abs(df(x)), q); };
}

}  // namespace hh
