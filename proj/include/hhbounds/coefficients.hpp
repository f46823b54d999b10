#pragma once

/**
 * @file coefficients.hpp
 * @brief Closed forms of the constants entering each bound.
 *
 * gamma: weighted kernel moments of |(lambda + mu) t - lambda| against t^alpha
 *        and 1 - t^alpha (and the mirrored kernel for gamma3/gamma4).
 * nu:    the lambda = mu specialisation of gamma.
 * mu1/mu2, M1/M2, K1/K2: derivative-power averages at the endpoints, the
 *        weighted interior node and the m-stretched points a/m, b/m.
 *
 * The coefficient functions accept q >= 1; the stricter q > 1 requirement of
 * the Hoelder-based bounds is enforced by the bounds themselves.
 */

#include <algorithm>
#include <cmath>
#include <string>

#include "core.hpp"

namespace hh {

namespace detail {

inline double abs_pow(double v, double q) { return q == 1.0 ? std::abs(v) : std::pow(std::abs(v), q); }

/// |f'(x)|^q after checking that x lies in the function's domain.
inline double derivative_power_at(const TestFunction& fn, double x, double q) {
    if (!fn.covers(x))
        throw DomainError("function '" + fn.id + "' is not defined at x = " + std::to_string(x));
    const double v = abs_pow(fn.df(x), q);
    if (!std::isfinite(v))
        throw NonFiniteError("|f'|^q is not finite at x = " + std::to_string(x));
    return v;
}

inline void require_q(double q) {
    if (!(q >= 1.0) || !std::isfinite(q))
        throw ParamError("q must be finite and >= 1");
}

}  // namespace detail

/// Total kernel mass: integral over [0, 1] of |(lambda + mu) t - lambda|.
inline double kernel_mass(double lambda, double mu) {
    require_weights(lambda, mu);
    return (lambda * lambda + mu * mu) / (2.0 * (lambda + mu));
}

inline CoefficientSet gamma_coeffs(double alpha, double lambda, double mu) {
    require_unit_interval(alpha, "alpha");
    require_weights(lambda, mu);
    const double s = lambda + mu;
    const double denom = (alpha + 1.0) * (alpha + 2.0);
    const double mass = kernel_mass(lambda, mu);
    const double g1 =
        (2.0 * std::pow(lambda, alpha + 2.0) / std::pow(s, alpha + 1.0) + (alpha + 1.0) * mu - lambda) / denom;
    const double g3 =
        (2.0 * std::pow(mu, alpha + 2.0) / std::pow(s, alpha + 1.0) + (alpha + 1.0) * lambda - mu) / denom;
    return {"thm11", {{"gamma1", g1}, {"gamma2", mass - g1}, {"gamma3", g3}, {"gamma4", mass - g3}}};
}

/// The alpha = 1 gamma constants in their separately displayed form
/// (1/6)[2 lambda^3 / (lambda + mu)^2 + 2 mu - lambda], used as an
/// independent route for the convex specialisation.
inline CoefficientSet gamma_coeffs_convex(double lambda, double mu) {
    require_weights(lambda, mu);
    const double s = lambda + mu;
    const double mass = (lambda * lambda + mu * mu) / (2.0 * s);
    const double g1 = (2.0 * lambda * lambda * lambda / (s * s) + 2.0 * mu - lambda) / 6.0;
    const double g3 = (2.0 * mu * mu * mu / (s * s) + 2.0 * lambda - mu) / 6.0;
    return {"thm11_convex", {{"gamma1", g1}, {"gamma2", mass - g1}, {"gamma3", g3}, {"gamma4", mass - g3}}};
}

inline CoefficientSet nu_coeffs(double alpha) {
    require_unit_interval(alpha, "alpha");
    const double denom = (alpha + 1.0) * (alpha + 2.0);
    const double half_pow = std::pow(0.5, alpha);
    return {"bop_am",
            {{"nu1", (alpha + half_pow) / denom}, {"nu2", ((alpha * alpha + alpha + 2.0) / 2.0 - half_pow) / denom}}};
}

inline CoefficientSet mu_factors(const TestFunction& fn, const Interval& iv, double m, double q) {
    validate(iv);
    require_unit_interval(m, "m");
    detail::require_q(q);
    auto g = [&](double x) { return detail::derivative_power_at(fn, x, q); };
    const double a = iv.a;
    const double b = iv.b;
    const double mid = 0.5 * (a + b);
    const double mid_m = (a + b) / (2.0 * m);
    const double mu1 = std::min((g(a) + m * g(mid_m)) / 2.0, (g(mid) + m * g(a / m)) / 2.0);
    const double mu2 = std::min((g(b) + m * g(mid_m)) / 2.0, (g(mid) + m * g(b / m)) / 2.0);
    return {"bop_m", {{"mu1", mu1}, {"mu2", mu2}}};
}

/// Weighted interior node (lambda b + mu a) / (lambda + mu).
inline double weighted_node(const Interval& iv, double lambda, double mu) {
    return (lambda * iv.b + mu * iv.a) / (lambda + mu);
}

inline CoefficientSet M_factors(const TestFunction& fn, const Interval& iv, double alpha, double m, double lambda,
                                double mu, double q) {
    validate(iv);
    require_unit_interval(alpha, "alpha");
    require_unit_interval(m, "m");
    require_weights(lambda, mu);
    detail::require_q(q);
    auto g = [&](double x) { return detail::derivative_power_at(fn, x, q); };
    const double z = weighted_node(iv, lambda, mu);
    const double z_m = (lambda * iv.b + mu * iv.a) / (m * (lambda + mu));
    const double am = alpha * m;
    const double div = alpha + 1.0;
    const double gz = g(z);
    const double gzm = g(z_m);
    const double M1 = std::min((g(iv.a) + am * gzm) / div, (gz + am * g(iv.a / m)) / div);
    const double M2 = std::min((g(iv.b) + am * gzm) / div, (gz + am * g(iv.b / m)) / div);
    return {"thm211", {{"M1", M1}, {"M2", M2}}};
}

inline CoefficientSet K_factors(const TestFunction& fn, const Interval& iv, double alpha, double m, double q) {
    validate(iv);
    require_unit_interval(alpha, "alpha");
    require_unit_interval(m, "m");
    detail::require_q(q);
    auto g = [&](double x) { return detail::derivative_power_at(fn, x, q); };
    return {"thm22",
            {{"K1", g(iv.b) + m * alpha * g(iv.a / m)}, {"K2", g(iv.a) + m * alpha * g(iv.b / m)}}};
}

}  // namespace hh
