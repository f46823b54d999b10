#pragma once

/**
 * @file means.hpp
 * @brief Special means of two positive numbers and the six mean-form
 * inequalities obtained by substituting f(x) = x^n and f(x) = 1/x into the
 * alpha = m = 1 forms of the weighted bounds.
 *
 * Weighted means put their weight on the first argument:
 *   A_w(a, b) = w a + (1 - w) b,    H_w(a, b) = (w/a + (1 - w)/b)^-1.
 * With w = lambda / (lambda + mu) this makes A_w(f(a), f(b)) the weighted
 * endpoint value of the deviation exactly.
 */

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>

#include "bounds.hpp"
#include "core.hpp"

namespace hh {

enum class MeanKind { weighted_arithmetic, arithmetic, weighted_harmonic, harmonic, logarithmic, p_logarithmic };

struct MeanValue {
    MeanKind kind;
    double weight = kNaN;
    double value = kNaN;
};

namespace means {

inline void require_nonnegative(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("mean arguments must be finite and >= 0");
}

inline void require_positive(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("mean arguments must be finite and > 0");
}

inline void require_weight(double w) {
    if (!(w >= 0.0 && w <= 1.0))
        throw DomainError("mean weight must lie in [0, 1]");
}

inline double weighted_arithmetic(double w, double a, double b) {
    require_weight(w);
    require_nonnegative(a, b);
    return w * a + (1.0 - w) * b;
}

inline double arithmetic(double a, double b) {
    require_nonnegative(a, b);
    return (a + b) / 2.0;
}

inline double weighted_harmonic(double w, double a, double b) {
    require_weight(w);
    require_positive(a, b);
    return 1.0 / (w / a + (1.0 - w) / b);
}

inline double harmonic(double a, double b) {
    require_positive(a, b);
    return 2.0 * a * b / (a + b);
}

inline double logarithmic(double a, double b) {
    require_positive(a, b);
    if (a == b)
        return b;
    return (b - a) / (std::log(b) - std::log(a));
}

/// ((b^{p+1} - a^{p+1}) / ((p+1)(b-a)))^{1/p}, p an integer other than -1, 0.
inline double p_logarithmic(double a, double b, int p) {
    require_positive(a, b);
    if (p == 0 || p == -1)
        throw DomainError("p-logarithmic mean requires p not in {-1, 0}");
    if (a == b)
        return b;
    const double e = p;
    return std::pow((std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / ((e + 1.0) * (b - a)), 1.0 / e);
}

}  // namespace means

inline MeanValue mean(MeanKind kind, double a, double b, std::optional<double> weight = std::nullopt,
                      std::optional<int> p = std::nullopt) {
    auto need_weight = [&]() {
        if (!weight)
            throw ParamError("weighted mean requires a weight");
        return *weight;
    };
    switch (kind) {
        case MeanKind::weighted_arithmetic: {
            const double w = need_weight();
            return {kind, w, means::weighted_arithmetic(w, a, b)};
        }
        case MeanKind::arithmetic: return {kind, kNaN, means::arithmetic(a, b)};
        case MeanKind::weighted_harmonic: {
            const double w = need_weight();
            return {kind, w, means::weighted_harmonic(w, a, b)};
        }
        case MeanKind::harmonic: return {kind, kNaN, means::harmonic(a, b)};
        case MeanKind::logarithmic: return {kind, kNaN, means::logarithmic(a, b)};
        case MeanKind::p_logarithmic:
            if (!p)
                throw ParamError("p-logarithmic mean requires p");
            return {kind, kNaN, means::p_logarithmic(a, b, *p)};
    }
    throw ParamError("unknown mean kind");
}

struct PropositionInput {
    int k = 1;
    double a = 1.0;
    double b = 2.0;
    /// Power for k in {1, 2, 3}; ignored for k in {4, 5, 6}.
    int n = 2;
    double lambda = 1.0;
    double mu = 1.0;
    double q = 1.0;
};

/// mean_lhs:      the deviation written with special means.
/// mean_rhs:      the bound written with special means, term by term as displayed.
/// corollary_rhs: the generic alpha = m = 1 bound evaluated on x^n or 1/x.
/// weight_factor_residual (k = 6 only): |A_w(l^p, u^p)^{1/p} - ((l^{p+1} + u^{p+1})/s)^{1/p}|.
struct PropositionResult {
    int k = 0;
    double mean_lhs = kNaN;
    double mean_rhs = kNaN;
    double corollary_rhs = kNaN;
    double residual = kNaN;
    double weight_factor_residual = kNaN;
    /// mean_lhs <= mean_rhs (the mean-form inequality as displayed).
    bool holds = false;
    /// mean_lhs <= corollary_rhs.
    bool corollary_holds = false;
};

inline PropositionResult proposition_check(const PropositionInput& in) {
    if (in.k < 1 || in.k > 6)
        throw ParamError("proposition index must be in 1..6");
    if (!(in.a > 0.0) || !(in.a < in.b) || !std::isfinite(in.b))
        throw DomainError("propositions require 0 < a < b");
    require_weights(in.lambda, in.mu);
    const bool hoelder = !(in.k == 1 || in.k == 4);
    if (!(in.q >= 1.0) || !std::isfinite(in.q))
        throw ParamError("q must be finite and >= 1");
    if (hoelder && !(in.q > 1.0))
        throw ParamError("this proposition requires q > 1");
    const bool power_form = in.k <= 3;
    if (power_form && std::abs(in.n) < 2)
        throw ParamError("propositions 1-3 require |n| >= 2");

    const double a = in.a;
    const double b = in.b;
    const double lam = in.lambda;
    const double mu = in.mu;
    const double q = in.q;
    const double s = lam + mu;
    const double w = lam / s;
    const double n = in.n;
    const double abs_n = std::abs(n);

    PropositionResult r;
    r.k = in.k;
    if (power_form) {
        r.mean_lhs = std::abs(means::weighted_arithmetic(w, std::pow(a, n), std::pow(b, n)) -
                              std::pow(means::p_logarithmic(a, b, in.n), n));
    } else {
        r.mean_lhs = std::abs(1.0 / means::weighted_harmonic(w, a, b) - 1.0 / means::logarithmic(a, b));
    }

    // Derivative powers |f'|^q at the endpoints, without the |n|^q factor.
    const double e = power_form ? q * (n - 1.0) : -2.0 * q;
    const double ga = std::pow(a, e);
    const double gb = std::pow(b, e);
    const double scale = power_form ? abs_n : 1.0;

    switch (in.k) {
        case 1:
        case 4: {
            const CoefficientSet c = gamma_coeffs_convex(lam, mu);
            const double mass = (lam * lam + mu * mu) / (2.0 * s);
            r.mean_rhs = (b - a) / s * std::pow(mass, (q - 1.0) / q) * scale *
                         std::min(std::pow(c.at("gamma1") * gb + c.at("gamma2") * ga, 1.0 / q),
                                  std::pow(c.at("gamma3") * ga + c.at("gamma4") * gb, 1.0 / q));
            break;
        }
        case 2:
        case 5: {
            const double p = q / (q - 1.0);
            const double node = means::weighted_arithmetic(w, b, a);
            double M1 = 0.0;
            double M2 = 0.0;
            if (in.k == 2) {
                M1 = means::arithmetic(std::pow(a, (n - 1.0) * q), std::pow(node, (n - 1.0) * q));
                M2 = means::arithmetic(std::pow(b, (n - 1.0) * q), std::pow(node, (n - 1.0) * q));
            } else {
                M1 = 1.0 / means::harmonic(std::pow(a, 2.0 * q), std::pow(node, 2.0 * q));
                M2 = 1.0 / means::harmonic(std::pow(b, 2.0 * q), std::pow(node, 2.0 * q));
            }
            r.mean_rhs = (b - a) / (s * s) * std::pow(1.0 / (p + 1.0), 1.0 / p) * scale *
                         (lam * lam * std::pow(M1, 1.0 / q) + mu * mu * std::pow(M2, 1.0 / q));
            break;
        }
        case 3: {
            const double p = q / (q - 1.0);
            r.mean_rhs = (b - a) / s * std::pow((std::pow(lam, p + 1.0) + std::pow(mu, p + 1.0)) / s, 1.0 / p) *
                         std::pow(1.0 / (p + 1.0), 1.0 / p) * abs_n *
                         std::pow(means::arithmetic(std::pow(a, (n - 1.0) * q), std::pow(b, (n - 1.0) * q)), 1.0 / q);
            break;
        }
        case 6: {
            const double p = q / (q - 1.0);
            const double weight_factor =
                std::pow(means::weighted_arithmetic(w, std::pow(lam, p), std::pow(mu, p)), 1.0 / p);
            const double direct_factor = std::pow((std::pow(lam, p + 1.0) + std::pow(mu, p + 1.0)) / s, 1.0 / p);
            r.weight_factor_residual = std::abs(weight_factor - direct_factor);
            r.mean_rhs = (b - a) / s * weight_factor * std::pow(1.0 / (p + 1.0), 1.0 / p) * std::pow(0.5, 1.0 / q) *
                         std::pow(means::weighted_harmonic(0.5, std::pow(a, 2.0 * q), std::pow(b, 2.0 * q)), -1.0 / q);
            break;
        }
        default: break;
    }

    const TestFunction fn = power_form ? power_function(in.n) : reciprocal_function();
    const Interval iv{a, b};
    switch (in.k) {
        case 1:
        case 4: r.corollary_rhs = thm11_convex_form(fn, iv, lam, mu, q); break;
        case 2:
        case 5: r.corollary_rhs = thm211_convex_form(fn, iv, lam, mu, q); break;
        default: r.corollary_rhs = thm22_convex_form(fn, iv, lam, mu, q); break;
    }

    r.residual = std::abs(r.mean_rhs - r.corollary_rhs);
    r.holds = r.mean_lhs <= r.mean_rhs + kHoldsTolerance;
    r.corollary_holds = r.mean_lhs <= r.corollary_rhs + kHoldsTolerance;
    return r;
}

}  // namespace hh
