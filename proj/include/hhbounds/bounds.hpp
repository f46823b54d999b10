#pragma once

/**
 * @file bounds.hpp
 * @brief Left-hand sides (weighted trapezoid deviation, integral mean), the
 * kernel identity they rest on, and the right-hand side of every bound.
 *
 * Bound ids:
 *   da      (b-a)/8 (|f'(a)| + |f'(b)|)                         |f'| convex
 *   sso     integral mean <= min of two (alpha,m) endpoint averages   f (alpha,m)-convex
 *   bop_m   Hoelder bound with mu1, mu2 (tight and loose forms)  |f'|^q m-convex, q > 1
 *   bop_am  power-mean bound with nu1, nu2                       |f'|^q (alpha,m)-convex
 *   thm11   weighted power-mean bound with gamma1..gamma4        |f'|^q (alpha,m)-convex
 *   thm211  split Hoelder bound with M1, M2                      |f'|^q (alpha,m)-convex, q > 1
 *   thm22   global Hoelder bound with K1, K2                     |f'|^q (alpha,m)-convex, q > 1
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "coefficients.hpp"
#include "convexity.hpp"
#include "core.hpp"
#include "quadrature.hpp"

namespace hh {

/// |(lambda f(a) + mu f(b)) / (lambda + mu) - (1/(b-a)) integral of f|.
struct Deviation {
    double weighted_endpoint_value = kNaN;
    double integral_mean = kNaN;
    double lhs_abs = kNaN;
    /// Error estimate of integral_mean (already divided by b - a).
    double quad_error = 0.0;
    bool budget_exhausted = false;
};

namespace detail {

inline double eval_checked(const std::function<double(double)>& g, const TestFunction& fn, double x) {
    if (!fn.covers(x))
        throw DomainError("function '" + fn.id + "' is not defined at x = " + std::to_string(x));
    const double v = g(x);
    if (!std::isfinite(v))
        throw NonFiniteError("function '" + fn.id + "' is not finite at x = " + std::to_string(x));
    return v;
}

inline double f_at(const TestFunction& fn, double x) { return eval_checked(fn.f, fn, x); }

inline Params equal_weights(double alpha, double m, double q) { return {alpha, m, 1.0, 1.0, q}; }

}  // namespace detail

/// Integral mean (1/(b-a)) of f over [a, b] with its error estimate.
inline QuadResult integral_mean(const TestFunction& fn, const Interval& iv, double tol = kLhsTolerance) {
    validate(iv);
    if (!fn.covers(iv.a, iv.b))
        throw DomainError("function '" + fn.id + "' is not defined on the interval");
    QuadResult r = integrate(fn.f, iv, tol * iv.width());
    r.value /= iv.width();
    r.error_estimate /= iv.width();
    return r;
}

inline Deviation deviation(const TestFunction& fn, const Interval& iv, double lambda, double mu,
                           double tol = kLhsTolerance) {
    require_weights(lambda, mu);
    const QuadResult mean = integral_mean(fn, iv, tol);
    Deviation d;
    d.weighted_endpoint_value = (lambda * detail::f_at(fn, iv.a) + mu * detail::f_at(fn, iv.b)) / (lambda + mu);
    d.integral_mean = mean.value;
    d.lhs_abs = std::abs(d.weighted_endpoint_value - d.integral_mean);
    d.quad_error = mean.error_estimate;
    d.budget_exhausted = mean.budget_exhausted;
    return d;
}

/// Both sides of the kernel identity
///   (lambda f(a) + mu f(b))/(lambda+mu) - mean f
///     = (b-a)/(lambda+mu) * int_0^1 [(lambda+mu) t - lambda] f'(t b + (1-t) a) dt
/// each computed by its own quadrature.
struct IdentityCheck {
    double lhs = kNaN;
    double rhs = kNaN;
    double residual = kNaN;
    double quad_error = 0.0;
};

inline IdentityCheck kernel_identity(const TestFunction& fn, const Interval& iv, double lambda, double mu,
                                     double tol = kLhsTolerance) {
    require_weights(lambda, mu);
    const Deviation d = deviation(fn, iv, lambda, mu, tol);
    const double s = lambda + mu;
    const double w = iv.width();
    auto integrand = [&](double t) { return (s * t - lambda) * fn.df(t * iv.b + (1.0 - t) * iv.a); };

    const double kink = lambda / s;
    double kernel = 0.0;
    double kernel_err = 0.0;
    // The integrand's tolerance is scaled so the assembled right side meets tol.
    const double piece_tol = 0.5 * tol * s / w;
    for (auto [lo, hi] : {std::pair{0.0, kink}, std::pair{kink, 1.0}}) {
        if (!(lo < hi))
            continue;
        const QuadResult r = integrate(integrand, lo, hi, piece_tol);
        kernel += r.value;
        kernel_err += r.error_estimate;
    }

    IdentityCheck out;
    out.lhs = d.weighted_endpoint_value - d.integral_mean;
    out.rhs = w / s * kernel;
    out.residual = std::abs(out.lhs - out.rhs);
    out.quad_error = d.quad_error + w / s * kernel_err;
    return out;
}

inline double kernel_identity_residual(const TestFunction& fn, const Interval& iv, double lambda, double mu,
                                       double tol = kLhsTolerance) {
    return kernel_identity(fn, iv, lambda, mu, tol).residual;
}

/// Classical bracket f((a+b)/2) <= mean f <= (f(a)+f(b))/2 for convex f.
inline std::pair<double, double> bound_hh(const TestFunction& fn, const Interval& iv) {
    validate(iv);
    return {detail::f_at(fn, iv.midpoint()), 0.5 * (detail::f_at(fn, iv.a) + detail::f_at(fn, iv.b))};
}

inline BoundReport from_deviation(std::string id, const Deviation& d) {
    BoundReport r;
    r.theorem_id = std::move(id);
    r.lhs = d.lhs_abs;
    r.quad_error = d.quad_error;
    return r;
}

inline BoundReport bound_da(const TestFunction& fn, const Interval& iv, double tol = kLhsTolerance) {
    validate_params(Params{}, iv, fn);
    BoundReport r = from_deviation("da", deviation(fn, iv, 1.0, 1.0, tol));
    r.rhs = iv.width() / 8.0 *
            (detail::derivative_power_at(fn, iv.a, 1.0) + detail::derivative_power_at(fn, iv.b, 1.0));
    return finalize(r);
}

/// Upper bound on the integral mean itself (not on a deviation).
inline BoundReport bound_sso(const TestFunction& fn, const Interval& iv, double alpha, double m,
                             double tol = kLhsTolerance) {
    validate_params(detail::equal_weights(alpha, m, 1.0), iv, fn);
    const QuadResult mean = integral_mean(fn, iv, tol);
    BoundReport r;
    r.theorem_id = "sso";
    r.lhs = mean.value;
    r.quad_error = mean.error_estimate;
    const double am = alpha * m;
    r.branch1 = (detail::f_at(fn, iv.a) + am * detail::f_at(fn, iv.b / m)) / (alpha + 1.0);
    r.branch2 = (detail::f_at(fn, iv.b) + am * detail::f_at(fn, iv.a / m)) / (alpha + 1.0);
    r.rhs = std::min(r.branch1, r.branch2);
    return finalize(r);
}

/// rhs is the tight form with factor ((q-1)/(2q-1))^((q-1)/q); rhs_loose drops it.
inline BoundReport bound_bop_m(const TestFunction& fn, const Interval& iv, double m, double q,
                               double tol = kLhsTolerance) {
    if (!(q > 1.0))
        throw ParamError("bop_m requires q > 1");
    validate_params(detail::equal_weights(1.0, m, q), iv, fn);
    const CoefficientSet c = mu_factors(fn, iv, m, q);
    BoundReport r = from_deviation("bop_m", deviation(fn, iv, 1.0, 1.0, tol));
    const double sum = std::pow(c.at("mu1"), 1.0 / q) + std::pow(c.at("mu2"), 1.0 / q);
    r.rhs_loose = iv.width() / 4.0 * sum;
    r.rhs = iv.width() / 4.0 * std::pow((q - 1.0) / (2.0 * q - 1.0), (q - 1.0) / q) * sum;
    return finalize(r);
}

inline BoundReport bound_bop_am(const TestFunction& fn, const Interval& iv, double alpha, double m, double q,
                                double tol = kLhsTolerance) {
    validate_params(detail::equal_weights(alpha, m, q), iv, fn);
    const CoefficientSet nu = nu_coeffs(alpha);
    BoundReport r = from_deviation("bop_am", deviation(fn, iv, 1.0, 1.0, tol));
    auto g = [&](double x) { return detail::derivative_power_at(fn, x, q); };
    const double n1 = nu.at("nu1");
    const double n2 = nu.at("nu2");
    const double pre = iv.width() / 2.0 * std::pow(0.5, 1.0 - 1.0 / q);
    r.branch1 = pre * std::pow(n1 * g(iv.a) + m * n2 * g(iv.b / m), 1.0 / q);
    r.branch2 = pre * std::pow(n1 * g(iv.b) + m * n2 * g(iv.a / m), 1.0 / q);
    r.rhs = std::min(r.branch1, r.branch2);
    return finalize(r);
}

inline BoundReport bound_thm11(const TestFunction& fn, const Interval& iv, const Params& p,
                               double tol = kLhsTolerance) {
    validate_params(p, iv, fn);
    const CoefficientSet c = gamma_coeffs(p.alpha, p.lambda, p.mu);
    BoundReport r = from_deviation("thm11", deviation(fn, iv, p.lambda, p.mu, tol));
    auto g = [&](double x) { return detail::derivative_power_at(fn, x, p.q); };
    const double s = p.weight_sum();
    const double lin1 = c.at("gamma1") * g(iv.b) + p.m * c.at("gamma2") * g(iv.a / p.m);
    const double lin2 = c.at("gamma3") * g(iv.a) + p.m * c.at("gamma4") * g(iv.b / p.m);
    if (p.q == 1.0) {
        r.branch1 = iv.width() / s * lin1;
        r.branch2 = iv.width() / s * lin2;
    } else {
        const double pre = iv.width() / s * std::pow(kernel_mass(p.lambda, p.mu), (p.q - 1.0) / p.q);
        r.branch1 = pre * std::pow(lin1, 1.0 / p.q);
        r.branch2 = pre * std::pow(lin2, 1.0 / p.q);
    }
    r.rhs = std::min(r.branch1, r.branch2);
    return finalize(r);
}

inline BoundReport bound_thm211(const TestFunction& fn, const Interval& iv, const Params& p,
                                double tol = kLhsTolerance) {
    validate_params(p, iv, fn);
    const double conj = p.conjugate();
    const CoefficientSet c = M_factors(fn, iv, p.alpha, p.m, p.lambda, p.mu, p.q);
    BoundReport r = from_deviation("thm211", deviation(fn, iv, p.lambda, p.mu, tol));
    const double s = p.weight_sum();
    r.rhs = iv.width() / (s * s) * std::pow(1.0 / (conj + 1.0), 1.0 / conj) *
            (p.lambda * p.lambda * std::pow(c.at("M1"), 1.0 / p.q) +
             p.mu * p.mu * std::pow(c.at("M2"), 1.0 / p.q));
    return finalize(r);
}

inline BoundReport bound_thm22(const TestFunction& fn, const Interval& iv, const Params& p,
                               double tol = kLhsTolerance) {
    validate_params(p, iv, fn);
    const double conj = p.conjugate();
    const CoefficientSet c = K_factors(fn, iv, p.alpha, p.m, p.q);
    BoundReport r = from_deviation("thm22", deviation(fn, iv, p.lambda, p.mu, tol));
    const double s = p.weight_sum();
    const double kernel_p =
        (std::pow(p.lambda, conj + 1.0) + std::pow(p.mu, conj + 1.0)) / ((conj + 1.0) * s);
    const double pre = iv.width() / s * std::pow(kernel_p, 1.0 / conj) * std::pow(1.0 / (p.alpha + 1.0), 1.0 / p.q);
    r.branch1 = pre * std::pow(c.at("K1"), 1.0 / p.q);
    r.branch2 = pre * std::pow(c.at("K2"), 1.0 / p.q);
    r.rhs = std::min(r.branch1, r.branch2);
    return finalize(r);
}

// ---------------------------------------------------------------------------
// Specialised closed forms. Each is written out directly from its own
// formula rather than by calling the general bound, so that agreement with
// the general bound is a genuine check.
// ---------------------------------------------------------------------------

/// Weighted power-mean bound with alpha = m = 1, using the displayed
/// alpha = 1 gamma constants.
inline double thm11_convex_form(const TestFunction& fn, const Interval& iv, double lambda, double mu, double q) {
    validate_params(Params{1.0, 1.0, lambda, mu, q}, iv, fn);
    const CoefficientSet c = gamma_coeffs_convex(lambda, mu);
    const double ga = detail::derivative_power_at(fn, iv.a, q);
    const double gb = detail::derivative_power_at(fn, iv.b, q);
    const double s = lambda + mu;
    const double mass = (lambda * lambda + mu * mu) / (2.0 * s);
    return iv.width() / s * std::pow(mass, (q - 1.0) / q) *
           std::min(std::pow(c.at("gamma1") * gb + c.at("gamma2") * ga, 1.0 / q),
                    std::pow(c.at("gamma3") * ga + c.at("gamma4") * gb, 1.0 / q));
}

/// Split Hoelder bound with alpha = m = 1: M1 = (|f'(a)|^q + |f'(z)|^q)/2,
/// M2 = (|f'(b)|^q + |f'(z)|^q)/2.
inline double thm211_convex_form(const TestFunction& fn, const Interval& iv, double lambda, double mu, double q) {
    validate_params(Params{1.0, 1.0, lambda, mu, q}, iv, fn);
    if (!(q > 1.0))
        throw ParamError("split Hoelder bound requires q > 1");
    const double p = q / (q - 1.0);
    const double gz = detail::derivative_power_at(fn, weighted_node(iv, lambda, mu), q);
    const double M1 = (detail::derivative_power_at(fn, iv.a, q) + gz) / 2.0;
    const double M2 = (detail::derivative_power_at(fn, iv.b, q) + gz) / 2.0;
    const double s = lambda + mu;
    return iv.width() / (s * s) * std::pow(1.0 / (p + 1.0), 1.0 / p) *
           (lambda * lambda * std::pow(M1, 1.0 / q) + mu * mu * std::pow(M2, 1.0 / q));
}

/// Global Hoelder bound with alpha = m = 1:
/// (b-a)/s ((l^{p+1}+u^{p+1})/s)^{1/p} (1/(p+1))^{1/p} (1/2)^{1/q} (|f'(a)|^q + |f'(b)|^q)^{1/q}.
inline double thm22_convex_form(const TestFunction& fn, const Interval& iv, double lambda, double mu, double q) {
    validate_params(Params{1.0, 1.0, lambda, mu, q}, iv, fn);
    if (!(q > 1.0))
        throw ParamError("global Hoelder bound requires q > 1");
    const double p = q / (q - 1.0);
    const double s = lambda + mu;
    return iv.width() / s * std::pow((std::pow(lambda, p + 1.0) + std::pow(mu, p + 1.0)) / s, 1.0 / p) *
           std::pow(1.0 / (p + 1.0), 1.0 / p) * std::pow(0.5, 1.0 / q) *
           std::pow(detail::derivative_power_at(fn, iv.a, q) + detail::derivative_power_at(fn, iv.b, q), 1.0 / q);
}

/// Global Hoelder bound with lambda = mu:
/// (b-a)/2 (1/(p+1))^{1/p} (1/(alpha+1))^{1/q} min{K1^{1/q}, K2^{1/q}}.
inline double thm22_equal_weight_form(const TestFunction& fn, const Interval& iv, double alpha, double m, double q) {
    validate_params(Params{alpha, m, 1.0, 1.0, q}, iv, fn);
    if (!(q > 1.0))
        throw ParamError("global Hoelder bound requires q > 1");
    const double p = q / (q - 1.0);
    auto g = [&](double x) { return detail::derivative_power_at(fn, x, q); };
    const double K1 = g(iv.b) + m * alpha * g(iv.a / m);
    const double K2 = g(iv.a) + m * alpha * g(iv.b / m);
    return iv.width() / 2.0 * std::pow(1.0 / (p + 1.0), 1.0 / p) * std::pow(1.0 / (alpha + 1.0), 1.0 / q) *
           std::min(std::pow(K1, 1.0 / q), std::pow(K2, 1.0 / q));
}

// ---------------------------------------------------------------------------
// Dispatch and hypothesis gating
// ---------------------------------------------------------------------------

enum class Theorem { da, sso, bop_m, bop_am, thm11, thm211, thm22 };

inline constexpr std::array<Theorem, 7> kAllTheorems = {Theorem::da,     Theorem::sso,    Theorem::bop_m,
                                                       Theorem::bop_am, Theorem::thm11,  Theorem::thm211,
                                                       Theorem::thm22};

inline std::string_view to_string(Theorem t) {
    switch (t) {
        case Theorem::da: return "da";
        case Theorem::sso: return "sso";
        case Theorem::bop_m: return "bop_m";
        case Theorem::bop_am: return "bop_am";
        case Theorem::thm11: return "thm11";
        case Theorem::thm211: return "thm211";
        case Theorem::thm22: return "thm22";
    }
    return "?";
}

inline Theorem parse_theorem(std::string_view id) {
    for (Theorem t : kAllTheorems)
        if (to_string(t) == id)
            return t;
    throw ParamError("unknown theorem id '" + std::string(id) + "'");
}

/// Bounds derived through Hoelder's inequality with conjugate p need q > 1.
inline bool requires_q_above_one(Theorem t) {
    return t == Theorem::bop_m || t == Theorem::thm211 || t == Theorem::thm22;
}

/// The convexity hypothesis a bound rests on: which function must be
/// (alpha, m)-convex and on which range [0, upper].
struct Hypothesis {
    enum class Target { function, derivative_power };
    Target target = Target::derivative_power;
    double power = 1.0;
    double alpha = 1.0;
    double m = 1.0;
    double upper = 1.0;

    friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

/// The (alpha, m) bounds evaluate f' at a/m and b/m, so the hypothesis is
/// screened on [0, b/m] rather than [0, b].
inline Hypothesis hypothesis_for(Theorem t, const Interval& iv, const Params& p) {
    using T = Hypothesis::Target;
    switch (t) {
        case Theorem::da: return {T::derivative_power, 1.0, 1.0, 1.0, iv.b};
        case Theorem::sso: return {T::function, 1.0, p.alpha, p.m, iv.b / p.m};
        case Theorem::bop_m: return {T::derivative_power, p.q, 1.0, p.m, iv.b / p.m};
        case Theorem::bop_am:
        case Theorem::thm11:
        case Theorem::thm211:
        case Theorem::thm22: return {T::derivative_power, p.q, p.alpha, p.m, iv.b / p.m};
    }
    return {};
}

/// A NonFinite sample counts as a failed hypothesis (infinite violation).
inline ConvexityVerdict check_hypothesis(const TestFunction& fn, const Hypothesis& h, int grid_n = kDefaultGridN) {
    try {
        if (h.target == Hypothesis::Target::function)
            return check_alpha_m_convex(fn.f, h.upper, h.alpha, h.m, grid_n);
        return check_alpha_m_convex(derivative_power(fn, h.power), h.upper, h.alpha, h.m, grid_n);
    } catch (const NonFiniteError&) {
        ConvexityVerdict v;
        v.holds = false;
        v.worst_violation = kInf;
        v.clipped = true;
        v.range_lo = kClipFraction * h.upper;
        v.range_hi = h.upper;
        return v;
    }
}

/// Evaluates one bound without the convexity gate.
inline BoundReport evaluate_bound(Theorem t, const TestFunction& fn, const Interval& iv, const Params& p,
                                  double tol = kLhsTolerance) {
    validate(p);
    if (requires_q_above_one(t) && !(p.q > 1.0))
        throw ParamError(std::string(to_string(t)) + " requires q > 1");
    switch (t) {
        case Theorem::da: return bound_da(fn, iv, tol);
        case Theorem::sso: return bound_sso(fn, iv, p.alpha, p.m, tol);
        case Theorem::bop_m: return bound_bop_m(fn, iv, p.m, p.q, tol);
        case Theorem::bop_am: return bound_bop_am(fn, iv, p.alpha, p.m, p.q, tol);
        case Theorem::thm11: return bound_thm11(fn, iv, p, tol);
        case Theorem::thm211: return bound_thm211(fn, iv, p, tol);
        case Theorem::thm22: return bound_thm22(fn, iv, p, tol);
    }
    throw ParamError("unhandled theorem");
}

struct GateError : std::runtime_error {
    GateError(Theorem t, ConvexityVerdict v)
        : std::runtime_error("convexity hypothesis of '" + std::string(to_string(t)) +
                             "' failed (worst violation " + std::to_string(v.worst_violation) + ")"),
          theorem(t),
          verdict(v) {}

    Theorem theorem;
    ConvexityVerdict verdict;
};

struct VerifyOptions {
    double quad_tol = kLhsTolerance;
    double holds_tol = kHoldsTolerance;
    int grid_n = kDefaultGridN;
};

/// Validates, screens the hypothesis, then evaluates. Throws GateError when
/// the hypothesis fails; that is distinct from the bound being violated.
inline BoundReport verify(const TestFunction& fn, const Interval& iv, const Params& p, Theorem t,
                          const VerifyOptions& opt = {}) {
    validate_params(p, iv, fn);
    if (requires_q_above_one(t) && !(p.q > 1.0))
        throw ParamError(std::string(to_string(t)) + " requires q > 1");
    const ConvexityVerdict v = check_hypothesis(fn, hypothesis_for(t, iv, p), opt.grid_n);
    if (!v.holds)
        throw GateError(t, v);
    return finalize(evaluate_bound(t, fn, iv, p, opt.quad_tol), opt.holds_tol);
}

}  // namespace hh
