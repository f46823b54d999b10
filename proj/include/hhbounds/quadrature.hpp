#pragma once

/**
 * @file quadrature.hpp
 * @brief Globally adaptive Gauss-Kronrod (7-15) integration and the
 * kink-split kernel moments used as an oracle for the closed-form constants.
 *
 * Each panel is evaluated with the 15-point Kronrod rule; the embedded
 * 7-point Gauss rule gives the local error estimate |K15 - G7|. The panel
 * with the largest estimate is bisected until the summed estimate drops
 * below the tolerance, the panels stop improving (round-off floor), or the
 * evaluation budget runs out.
 */

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "core.hpp"

namespace hh {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    /// Set when the evaluation cap was reached before the tolerance.
    bool budget_exhausted = false;
};

inline constexpr double kLhsTolerance = 1e-9;
inline constexpr double kOracleTolerance = 1e-10;
inline constexpr std::size_t kMaxEvaluations = 1'000'000;

namespace detail {

// Kronrod abscissae on [0, 1] (symmetric about 0); odd indices are the
// Gauss-7 nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    double floor;

    bool operator<(const Panel& other) const noexcept { return error < other.error; }
};

template <class F>
Panel gk15(F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    auto eval = [&](double x) {
        const double y = f(x);
        if (!std::isfinite(y))
            throw NonFiniteError("integrand is not finite at x = " + std::to_string(x));
        return y;
    };

    const double fc = eval(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double abs_sum = std::abs(kronrod);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = eval(center - dx);
        const double f2 = eval(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1)
            gauss += kWg[j / 2] * (f1 + f2);
    }
    kronrod *= half;
    gauss *= half;
    abs_sum *= std::abs(half);

    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
    const double error = std::max(std::abs(kronrod - gauss), floor);
    return {lo, hi, kronrod, error, floor};
}

}  // namespace detail

template <class F>
    requires std::invocable<F&, double>
QuadResult integrate(F&& f, double lo, double hi, double tol = kLhsTolerance,
                     std::size_t max_evaluations = kMaxEvaluations) {
    if (!(tol > 0.0))
        throw ParamError("quadrature tolerance must be > 0");
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw ParamError("quadrature requires finite lo < hi");

    std::priority_queue<detail::Panel> panels;
    QuadResult out;
    auto push = [&](double a, double b) {
        panels.push(detail::gk15(f, a, b));
        out.evaluations += 15;
    };
    push(lo, hi);

    auto totals = [&]() {
        // The heap has no iteration API; copy out for summation.
        auto copy = panels;
        double value = 0.0;
        double error = 0.0;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
        return std::pair{value, error};
    };

    double running_error = panels.top().error;
    while (running_error > tol) {
        const detail::Panel worst = panels.top();
        // Nothing left to gain once the worst panel sits on its round-off floor
        // or cannot be split further.
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (worst.error <= worst.floor || !(worst.lo < mid && mid < worst.hi))
            break;
        if (out.evaluations + 30 > max_evaluations) {
            out.budget_exhausted = true;
            break;
        }
        panels.pop();
        running_error -= worst.error;
        detail::Panel left = detail::gk15(f, worst.lo, mid);
        detail::Panel right = detail::gk15(f, mid, worst.hi);
        out.evaluations += 30;
        running_error += left.error + right.error;
        panels.push(left);
        panels.push(right);
        // Re-sum periodically so cancellation in the running total cannot drift.
        if (panels.size() % 64 == 0)
            running_error = totals().second;
    }

    auto [value, error] = totals();
    out.value = value;
    out.error_estimate = error;
    return out;
}

template <class F>
    requires std::invocable<F&, double>
QuadResult integrate(F&& f, const Interval& iv, double tol = kLhsTolerance) {
    validate(iv);
    return integrate(std::forward<F>(f), iv.a, iv.b, tol);
}

enum class KernelWeight { t_alpha, one_minus_t_alpha, one };
enum class KernelSwitch { lambda, mu };

/// Integral over [0, 1] of |(lambda + mu) t - s|^p_exp * w(t), s = lambda or
/// mu, split at the kink t = s / (lambda + mu).
inline QuadResult kernel_moment_result(double alpha, double lambda, double mu, KernelWeight weight,
                                       KernelSwitch which, double p_exp, double tol = kOracleTolerance) {
    require_unit_interval(alpha, "alpha");
    require_weights(lambda, mu);
    if (!(p_exp >= 1.0))
        throw ParamError("kernel exponent must be >= 1");

    const double total = lambda + mu;
    const double s = which == KernelSwitch::lambda ? lambda : mu;
    const double kink = s / total;

    auto integrand = [=](double t) {
        const double k = std::pow(std::abs(total * t - s), p_exp);
        switch (weight) {
            case KernelWeight::t_alpha:
                return k * std::pow(t, alpha);
            case KernelWeight::one_minus_t_alpha:
                return k * (1.0 - std::pow(t, alpha));
            case KernelWeight::one:
                break;
        }
        return k;
    };

    QuadResult out;
    for (auto [lo, hi] : {std::pair{0.0, kink}, std::pair{kink, 1.0}}) {
        if (!(lo < hi))
            continue;
        const QuadResult piece = integrate(integrand, lo, hi, 0.5 * tol);
        out.value += piece.value;
        out.error_estimate += piece.error_estimate;
        out.evaluations += piece.evaluations;
        out.budget_exhausted = out.budget_exhausted || piece.budget_exhausted;
    }
    return out;
}

inline double kernel_moment(double alpha, double lambda, double mu, KernelWeight weight, KernelSwitch which,
                            double p_exp, double tol = kOracleTolerance) {
    return kernel_moment_result(alpha, lambda, mu, weight, which, p_exp, tol).value;
}

}  // namespace hh
