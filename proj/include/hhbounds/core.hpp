#pragma once

/**
 * @file core.hpp
 * @brief Domain types shared by every module: the integration interval, the
 * (alpha, m, lambda, mu, q) parameter tuple, test functions paired with their
 * exact derivatives, and the report/coefficient carriers.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hh {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ParamError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NonFiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Closed integration domain [a, b] with 0 <= a < b.
struct Interval {
    double a = 0.0;
    double b = 1.0;

    [[nodiscard]] double width() const noexcept { return b - a; }
    [[nodiscard]] double midpoint() const noexcept { return 0.5 * (a + b); }
};

inline void validate(const Interval& iv) {
    if (!std::isfinite(iv.a) || !std::isfinite(iv.b))
        throw ParamError("interval endpoints must be finite");
    if (!(iv.a >= 0.0))
        throw ParamError("interval requires a >= 0");
    if (!(iv.a < iv.b))
        throw ParamError("interval requires a < b");
}

struct Params {
    double alpha = 1.0;
    double m = 1.0;
    double lambda = 1.0;
    double mu = 1.0;
    double q = 1.0;

    [[nodiscard]] double weight_sum() const noexcept { return lambda + mu; }

    /// Hoelder conjugate p = q / (q - 1). Undefined at q = 1.
    [[nodiscard]] double conjugate() const {
        if (!(q > 1.0))
            throw ParamError("Hoelder conjugate requires q > 1");
        return q / (q - 1.0);
    }
};

inline void require_unit_interval(double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0))
        throw ParamError(std::string(name) + " must lie in (0, 1]");
}

inline void require_weights(double lambda, double mu) {
    if (!(lambda >= 0.0) || !(mu >= 0.0) || !std::isfinite(lambda) || !std::isfinite(mu))
        throw ParamError("lambda and mu must be finite and >= 0");
    if (!(lambda + mu > 0.0))
        throw ParamError("lambda + mu must be > 0");
}

inline void validate(const Params& p) {
    require_unit_interval(p.alpha, "alpha");
    require_unit_interval(p.m, "m");
    require_weights(p.lambda, p.mu);
    if (!(p.q >= 1.0) || !std::isfinite(p.q))
        throw ParamError("q must be finite and >= 1");
}

/// A scalar function with its analytic derivative and the domain on which
/// both are finite. The lower end may be open (e.g. 1/x at 0).
struct TestFunction {
    std::string id;
    std::function<double(double)> f;
    std::function<double(double)> df;
    double domain_min = 0.0;
    bool open_min = false;
    double domain_max = kInf;

    [[nodiscard]] bool covers(double x) const noexcept {
        if (std::isnan(x))
            return false;
        const bool above = open_min ? x > domain_min : x >= domain_min;
        return above && x <= domain_max;
    }

    [[nodiscard]] bool covers(double lo, double hi) const noexcept { return covers(lo) && covers(hi); }
};

/// f(x) = x^n with f'(x) = n x^(n-1); open at 0 for negative n.
inline TestFunction power_function(int n) {
    if (n == 0)
        throw ParamError("power_function requires n != 0");
    TestFunction fn;
    fn.id = n < 0 ? "powm" + std::to_string(-n) : "pow" + std::to_string(n);
    const double e = n;
    fn.f = [e](double x) { return std::pow(x, e); };
    fn.df = [e](double x) { return e * std::pow(x, e - 1.0); };
    fn.domain_min = 0.0;
    fn.open_min = n < 0;
    return fn;
}

inline TestFunction reciprocal_function() {
    return {"recip", [](double x) { return 1.0 / x; }, [](double x) { return -1.0 / (x * x); }, 0.0, true, kInf};
}

inline TestFunction exp_function() {
    return {"exp", [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); }, 0.0, false, kInf};
}

/// x ln x, extended by continuity to 0 at x = 0; its derivative ln x + 1 is
/// unbounded there, so the domain is open at 0.
inline TestFunction xlogx_function() {
    return {"xlogx",
            [](double x) { return x == 0.0 ? 0.0 : x * std::log(x); },
            [](double x) { return std::log(x) + 1.0; },
            0.0,
            true,
            kInf};
}

inline TestFunction linear_function(double slope = 2.0, double intercept = 1.0) {
    return {"linear",
            [slope, intercept](double x) { return slope * x + intercept; },
            [slope](double) { return slope; },
            0.0,
            false,
            kInf};
}

inline TestFunction constant_function(double c = 1.0) {
    return {"const", [c](double) { return c; }, [](double) { return 0.0; }, 0.0, false, kInf};
}

/// x -> f(a + b - x). Its derivative picks up a sign flip and its domain is
/// mirrored about the interval midpoint.
inline TestFunction reflect(const TestFunction& fn, const Interval& iv) {
    const double s = iv.a + iv.b;
    TestFunction out;
    out.id = fn.id + "_reflected";
    out.f = [f = fn.f, s](double x) { return f(s - x); };
    out.df = [df = fn.df, s](double x) { return -df(s - x); };
    // The mirrored domain is closed at the reflected image of the old upper end
    // and (possibly open) at the image of the old lower end.
    out.domain_min = std::isinf(fn.domain_max) ? -kInf : s - fn.domain_max;
    out.open_min = false;
    out.domain_max = s - fn.domain_min;
    if (fn.open_min)
        out.domain_max = std::nextafter(out.domain_max, -kInf);
    return out;
}

inline std::vector<TestFunction> builtin_corpus() {
    return {power_function(2),   power_function(3), power_function(4), power_function(-2),
            reciprocal_function(), exp_function(),  xlogx_function(),  linear_function()};
}

/// Looks up a corpus member (or a "powN"/"powmN" power function) by id.
inline TestFunction find_function(const std::string& id) {
    for (auto& fn : builtin_corpus())
        if (fn.id == id)
            return fn;
    if (id == "const")
        return constant_function();
    auto parse_power = [&](const std::string& prefix, int sign) -> std::pair<bool, int> {
        if (id.rfind(prefix, 0) != 0 || id.size() == prefix.size())
            return {false, 0};
        const std::string digits = id.substr(prefix.size());
        for (char c : digits)
            if (c < '0' || c > '9')
                return {false, 0};
        return {true, sign * std::stoi(digits)};
    };
    if (auto [ok, n] = parse_power("powm", -1); ok && n != 0)
        return power_function(n);
    if (auto [ok, n] = parse_power("pow", 1); ok && n != 0)
        return power_function(n);
    throw ParamError("unknown function id '" + id + "'");
}

/// A validated (function, interval, parameters) triple.
struct CheckedConfig {
    TestFunction fn;
    Interval iv;
    Params params;

    /// Smallest closed range that every bound may evaluate f or f' on.
    [[nodiscard]] std::pair<double, double> evaluation_range() const {
        return {std::min(iv.a, iv.a / params.m), std::max(iv.b, iv.b / params.m)};
    }
};

inline CheckedConfig validate_params(const Params& p, const Interval& iv, const TestFunction& fn) {
    validate(p);
    validate(iv);
    if (!fn.f || !fn.df)
        throw ParamError("test function '" + fn.id + "' has no callable f or df");
    const double lo = std::min(iv.a, iv.a / p.m);
    const double hi = std::max(iv.b, iv.b / p.m);
    if (!fn.covers(lo, hi))
        throw DomainError("function '" + fn.id + "' is not defined on the required range [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return {fn, iv, p};
}

/// Closed-form constants of one bound family, keyed by name.
struct CoefficientSet {
    std::string theorem_id;
    std::map<std::string, double> values;

    [[nodiscard]] double at(const std::string& name) const {
        auto it = values.find(name);
        if (it == values.end())
            throw std::out_of_range("coefficient '" + name + "' not present in set '" + theorem_id + "'");
        return it->second;
    }
};

/// Outcome of checking one inequality. `branch1`/`branch2` hold the two
/// arguments of the bound's min{...} (NaN when the bound has no min), and
/// `rhs_loose` the secondary majorant where one is displayed.
struct BoundReport {
    std::string theorem_id;
    double lhs = kNaN;
    double rhs = kNaN;
    double slack = kNaN;
    bool holds = false;
    double quad_error = 0.0;
    double branch1 = kNaN;
    double branch2 = kNaN;
    double rhs_loose = kNaN;
};

inline constexpr double kHoldsTolerance = 1e-12;

/// Tolerance for two computations of the same closed-form quantity,
/// absolute below unit magnitude and relative above it.
inline constexpr double kIdentityTolerance = 1e-12;

inline bool nearly_equal(double x, double y, double tol = kIdentityTolerance) {
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

inline BoundReport finalize(BoundReport r, double holds_tol = kHoldsTolerance) {
    r.slack = r.rhs - r.lhs;
    r.holds = r.lhs <= r.rhs + r.quad_error + holds_tol;
    return r;
}

}  // namespace hh
