#pragma once

/**
 * @file harness.hpp
 * @brief Batch verification: sweep specifications, report rows, tightness
 * tables and their CSV/JSON serialisation.
 *
 * Serialised output is a stable interface: fixed column/key order, a leading
 * `schema` field, and doubles written in shortest round-trip form.
 */

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "core.hpp"

namespace hh {

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

/// Shortest representation that round-trips; empty for NaN.
inline std::string format_double(double v) {
    if (std::isnan(v))
        return "";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf, end);
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline nlohmann::ordered_json json_number(double v) {
    if (!std::isfinite(v))
        return nullptr;
    return v;
}

// ---------------------------------------------------------------------------
// Sweep specification
// ---------------------------------------------------------------------------

struct SweepSpec {
    std::vector<std::string> functions;
    std::vector<Interval> intervals;
    std::vector<double> alphas;
    std::vector<double> ms;
    std::vector<double> lambdas;
    std::vector<double> mus;
    std::vector<double> qs;
    std::vector<Theorem> theorems;
    double quad_tol = kLhsTolerance;
    double holds_tol = kHoldsTolerance;
    int grid_n = kDefaultGridN;

    [[nodiscard]] std::size_t config_count() const {
        return functions.size() * intervals.size() * alphas.size() * ms.size() * lambdas.size() * mus.size() *
               qs.size();
    }
    [[nodiscard]] std::size_t row_count() const { return config_count() * theorems.size(); }
};

inline SweepSpec default_sweep_spec() {
    SweepSpec s;
    for (const auto& fn : builtin_corpus())
        s.functions.push_back(fn.id);
    s.intervals = {{0.0, 1.0}, {1.0, 2.0}, {0.5, 3.0}, {2.0, 5.0}};
    s.alphas = {0.5, 1.0};
    s.ms = {0.5, 1.0};
    s.lambdas = {0.0, 0.5, 1.0, 2.0, 5.0};
    s.mus = {0.0, 0.5, 1.0, 2.0, 5.0};
    s.qs = {1.0, 2.0, 3.0};
    s.theorems.assign(kAllTheorems.begin(), kAllTheorems.end());
    return s;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

inline double parse_real(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParamError("not a number: '" + s + "'");
    return v;
}

}  // namespace detail

/// Flat `key = v1, v2, ...` text. `#` starts a comment. Intervals are `a:b`.
inline SweepSpec parse_sweep_spec(std::istream& in) {
    SweepSpec spec = default_sweep_spec();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParamError("line " + std::to_string(lineno) + ": expected 'key = values'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::vector<std::string> vals = detail::split_list(line.substr(eq + 1));
        auto reals = [&]() {
            std::vector<double> out;
            for (const auto& v : vals)
                out.push_back(detail::parse_real(v));
            return out;
        };
        auto scalar = [&]() {
            if (vals.size() != 1)
                throw ParamError("line " + std::to_string(lineno) + ": '" + key + "' takes one value");
            return detail::parse_real(vals.front());
        };
        if (key == "functions") {
            for (const auto& v : vals)
                find_function(v);
            spec.functions = vals;
        } else if (key == "intervals") {
            spec.intervals.clear();
            for (const auto& v : vals) {
                const auto colon = v.find(':');
                if (colon == std::string::npos)
                    throw ParamError("line " + std::to_string(lineno) + ": interval '" + v + "' is not a:b");
                Interval iv{detail::parse_real(detail::trim(v.substr(0, colon))),
                            detail::parse_real(detail::trim(v.substr(colon + 1)))};
                validate(iv);
                spec.intervals.push_back(iv);
            }
        } else if (key == "alpha") {
            spec.alphas = reals();
        } else if (key == "m") {
            spec.ms = reals();
        } else if (key == "lambda") {
            spec.lambdas = reals();
        } else if (key == "mu") {
            spec.mus = reals();
        } else if (key == "q") {
            spec.qs = reals();
        } else if (key == "theorems") {
            spec.theorems.clear();
            for (const auto& v : vals)
                spec.theorems.push_back(parse_theorem(v));
        } else if (key == "quad_tol") {
            spec.quad_tol = scalar();
        } else if (key == "holds_tol") {
            spec.holds_tol = scalar();
        } else if (key == "grid_n") {
            spec.grid_n = static_cast<int>(scalar());
        } else {
            throw ParamError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (spec.functions.empty() || spec.intervals.empty() || spec.alphas.empty() || spec.ms.empty() ||
        spec.lambdas.empty() || spec.mus.empty() || spec.qs.empty() || spec.theorems.empty())
        throw ParamError("every sweep grid must be non-empty");
    if (!(spec.quad_tol > 0.0) || !(spec.holds_tol >= 0.0) || spec.grid_n < 8)
        throw ParamError("invalid tolerance or grid_n");
    return spec;
}

inline SweepSpec parse_sweep_spec(const std::string& text) {
    std::istringstream in(text);
    return parse_sweep_spec(in);
}

// ---------------------------------------------------------------------------
// Rows
// ---------------------------------------------------------------------------

enum class RowStatus { holds, violated, gate_failed, not_applicable, input_error };

inline std::string_view to_string(RowStatus s) {
    switch (s) {
        case RowStatus::holds: return "holds";
        case RowStatus::violated: return "violated";
        case RowStatus::gate_failed: return "gate_failed";
        case RowStatus::not_applicable: return "not_applicable";
        case RowStatus::input_error: return "input_error";
    }
    return "?";
}

struct ReportRow {
    std::string fn;
    Interval iv;
    Params params;
    Theorem theorem = Theorem::da;
    RowStatus status = RowStatus::input_error;
    BoundReport report;
    std::optional<ConvexityVerdict> gate;
    std::string message;
};

/// Memoises hypothesis verdicts; they depend on neither lambda nor mu.
class GateCache {
public:
    explicit GateCache(int grid_n = kDefaultGridN) : grid_n_(grid_n) {}

    ConvexityVerdict get(const TestFunction& fn, const Hypothesis& h) {
        const Key key{fn.id, static_cast<int>(h.target), h.power, h.alpha, h.m, h.upper};
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end())
                return it->second;
        }
        // Evaluated outside the lock; concurrent misses compute identical values.
        ConvexityVerdict v = check_hypothesis(fn, h, grid_n_);
        std::lock_guard lock(mutex_);
        cache_.emplace(key, v);
        return v;
    }

private:
    using Key = std::tuple<std::string, int, double, double, double, double>;
    int grid_n_;
    std::mutex mutex_;
    std::map<Key, ConvexityVerdict> cache_;
};

struct RowOptions {
    double quad_tol = kLhsTolerance;
    double holds_tol = kHoldsTolerance;
    int grid_n = kDefaultGridN;
};

/// Evaluates one (configuration, theorem) cell; never throws for bad input.
inline ReportRow evaluate_row(const std::string& fn_id, const Interval& iv, const Params& p, Theorem t,
                              const RowOptions& opt, GateCache* cache = nullptr) {
    ReportRow row;
    row.fn = fn_id;
    row.iv = iv;
    row.params = p;
    row.theorem = t;
    row.report.theorem_id = std::string(to_string(t));
    try {
        const TestFunction fn = find_function(fn_id);
        validate_params(p, iv, fn);
        if (requires_q_above_one(t) && !(p.q > 1.0)) {
            row.status = RowStatus::not_applicable;
            row.message = "requires q > 1";
            return row;
        }
        const Hypothesis h = hypothesis_for(t, iv, p);
        row.gate = cache ? cache->get(fn, h) : check_hypothesis(fn, h, opt.grid_n);
        if (!row.gate->holds) {
            row.status = RowStatus::gate_failed;
            row.message = "convexity hypothesis not satisfied";
            return row;
        }
        row.report = finalize(evaluate_bound(t, fn, iv, p, opt.quad_tol), opt.holds_tol);
        row.status = row.report.holds ? RowStatus::holds : RowStatus::violated;
    } catch (const std::exception& e) {
        row.status = RowStatus::input_error;
        row.message = e.what();
    }
    return row;
}

inline int default_jobs() {
    if (const char* env = std::getenv("HH_VERIFY_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Rows come back in coordinate order (function, interval, alpha, m, lambda,
/// mu, q, theorem) regardless of `jobs`.
inline std::vector<ReportRow> run_sweep(const SweepSpec& spec, int jobs = 1) {
    struct Cell {
        std::size_t fn;
        Interval iv;
        Params p;
        Theorem t;
    };
    std::vector<Cell> cells;
    cells.reserve(spec.row_count());
    for (std::size_t f = 0; f < spec.functions.size(); ++f)
        for (const auto& iv : spec.intervals)
            for (double alpha : spec.alphas)
                for (double m : spec.ms)
                    for (double lambda : spec.lambdas)
                        for (double mu : spec.mus)
                            for (double q : spec.qs)
                                for (Theorem t : spec.theorems)
                                    cells.push_back({f, iv, Params{alpha, m, lambda, mu, q}, t});

    std::vector<ReportRow> rows(cells.size());
    GateCache cache(spec.grid_n);
    const RowOptions opt{spec.quad_tol, spec.holds_tol, spec.grid_n};
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell& c = cells[i];
            rows[i] = evaluate_row(spec.functions[c.fn], c.iv, c.p, c.t, opt, &cache);
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < n; ++j)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    return rows;
}

struct SweepSummary {
    std::size_t total = 0;
    std::size_t holds = 0;
    std::size_t violated = 0;
    std::size_t gate_failed = 0;
    std::size_t not_applicable = 0;
    std::size_t input_error = 0;
    double min_slack = kNaN;
    std::optional<std::size_t> min_slack_row;
};

inline SweepSummary summarize(const std::vector<ReportRow>& rows) {
    SweepSummary s;
    s.total = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        switch (r.status) {
            case RowStatus::holds: ++s.holds; break;
            case RowStatus::violated: ++s.violated; break;
            case RowStatus::gate_failed: ++s.gate_failed; break;
            case RowStatus::not_applicable: ++s.not_applicable; break;
            case RowStatus::input_error: ++s.input_error; break;
        }
        if ((r.status == RowStatus::holds || r.status == RowStatus::violated) &&
            (std::isnan(s.min_slack) || r.report.slack < s.min_slack)) {
            s.min_slack = r.report.slack;
            s.min_slack_row = i;
        }
    }
    return s;
}

inline const std::vector<std::string>& row_columns() {
    static const std::vector<std::string> cols = {
        "schema",   "fn",       "a",          "b",         "alpha",          "m",      "lambda",
        "mu",       "q",        "theorem",    "status",    "lhs",            "rhs",    "slack",
        "holds",    "quad_error", "branch1",  "branch2",   "rhs_loose",      "gate_holds",
        "gate_violation", "gate_x", "gate_y", "gate_t",    "gate_clipped",   "message"};
    return cols;
}

namespace detail {

inline bool has_bound(const ReportRow& r) {
    return r.status == RowStatus::holds || r.status == RowStatus::violated;
}

}  // namespace detail

inline std::vector<std::string> row_fields(const ReportRow& r) {
    const bool bound = detail::has_bound(r);
    auto num = [&](double v) { return bound ? format_double(v) : std::string(); };
    const auto& g = r.gate;
    auto gnum = [&](double v) { return g ? format_double(v) : std::string(); };
    return {std::to_string(kSchemaVersion),
            r.fn,
            format_double(r.iv.a),
            format_double(r.iv.b),
            format_double(r.params.alpha),
            format_double(r.params.m),
            format_double(r.params.lambda),
            format_double(r.params.mu),
            format_double(r.params.q),
            std::string(to_string(r.theorem)),
            std::string(to_string(r.status)),
            num(r.report.lhs),
            num(r.report.rhs),
            num(r.report.slack),
            bound ? (r.report.holds ? "true" : "false") : "",
            num(r.report.quad_error),
            num(r.report.branch1),
            num(r.report.branch2),
            num(r.report.rhs_loose),
            g ? (g->holds ? "true" : "false") : "",
            gnum(g ? g->worst_violation : kNaN),
            gnum(g ? g->witness.x : kNaN),
            gnum(g ? g->witness.y : kNaN),
            gnum(g ? g->witness.t : kNaN),
            g ? (g->clipped ? "true" : "false") : "",
            r.message};
}

inline void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    const auto& cols = row_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << cols[i];
    out << "\r\n";
    for (const auto& r : rows) {
        const auto fields = row_fields(r);
        for (std::size_t i = 0; i < fields.size(); ++i)
            out << (i ? "," : "") << csv_escape(fields[i]);
        out << "\r\n";
    }
}

inline nlohmann::ordered_json row_json(const ReportRow& r) {
    const bool bound = detail::has_bound(r);
    auto num = [&](double v) { return bound ? json_number(v) : nlohmann::ordered_json(nullptr); };
    nlohmann::ordered_json j;
    j["schema"] = kSchemaVersion;
    j["fn"] = r.fn;
    j["a"] = r.iv.a;
    j["b"] = r.iv.b;
    j["alpha"] = r.params.alpha;
    j["m"] = r.params.m;
    j["lambda"] = r.params.lambda;
    j["mu"] = r.params.mu;
    j["q"] = r.params.q;
    j["theorem"] = std::string(to_string(r.theorem));
    j["status"] = std::string(to_string(r.status));
    j["lhs"] = num(r.report.lhs);
    j["rhs"] = num(r.report.rhs);
    j["slack"] = num(r.report.slack);
    j["holds"] = bound ? nlohmann::ordered_json(r.report.holds) : nlohmann::ordered_json(nullptr);
    j["quad_error"] = num(r.report.quad_error);
    j["branch1"] = num(r.report.branch1);
    j["branch2"] = num(r.report.branch2);
    j["rhs_loose"] = num(r.report.rhs_loose);
    if (r.gate) {
        j["gate_holds"] = r.gate->holds;
        j["gate_violation"] = json_number(r.gate->worst_violation);
        j["gate_x"] = json_number(r.gate->witness.x);
        j["gate_y"] = json_number(r.gate->witness.y);
        j["gate_t"] = json_number(r.gate->witness.t);
        j["gate_clipped"] = r.gate->clipped;
    } else {
        for (const char* k : {"gate_holds", "gate_violation", "gate_x", "gate_y", "gate_t", "gate_clipped"})
            j[k] = nullptr;
    }
    j["message"] = r.message;
    return j;
}

inline void write_json(std::ostream& out, const std::vector<ReportRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        arr.push_back(row_json(r));
    out << arr.dump(1) << '\n';
}

inline void write_text(std::ostream& out, const ReportRow& r) {
    const auto& cols = row_columns();
    const auto fields = row_fields(r);
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (!fields[i].empty())
            out << cols[i] << ": " << fields[i] << '\n';
}

inline void write_summary(std::ostream& out, const SweepSummary& s, const std::vector<ReportRow>& rows) {
    out << "total: " << s.total << '\n'
        << "holds: " << s.holds << '\n'
        << "violated: " << s.violated << '\n'
        << "gate_failed: " << s.gate_failed << '\n'
        << "not_applicable: " << s.not_applicable << '\n'
        << "input_error: " << s.input_error << '\n';
    if (s.min_slack_row) {
        const auto& r = rows[*s.min_slack_row];
        out << "min_slack: " << format_double(s.min_slack) << " at fn=" << r.fn << " a=" << format_double(r.iv.a)
            << " b=" << format_double(r.iv.b) << " alpha=" << format_double(r.params.alpha)
            << " m=" << format_double(r.params.m) << " lambda=" << format_double(r.params.lambda)
            << " mu=" << format_double(r.params.mu) << " q=" << format_double(r.params.q)
            << " theorem=" << to_string(r.theorem) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Tightness comparison
// ---------------------------------------------------------------------------

struct TightnessRow {
    std::string bound;
    RowStatus status = RowStatus::input_error;
    double lhs = kNaN;
    double rhs = kNaN;
    double slack = kNaN;
    /// 1 = smallest slack among ranked bounds; 0 = not ranked.
    int rank = 0;
    bool tightest = false;
    std::optional<bool> gate_holds;
    std::string message;
};

/// Evaluates each requested bound on one configuration and ranks the
/// deviation-type bounds whose hypothesis passed by slack. The trapezoid
/// upper bound (f(a)+f(b))/2 on the integral mean is appended as a baseline
/// (unranked, like `sso`, since its left side is the mean itself).
inline std::vector<TightnessRow> run_tightness(const std::string& fn_id, const Interval& iv, const Params& p,
                                               const std::vector<Theorem>& theorems, const RowOptions& opt) {
    std::vector<TightnessRow> out;
    const TestFunction fn = find_function(fn_id);
    validate_params(p, iv, fn);
    for (Theorem t : theorems) {
        TightnessRow row;
        row.bound = std::string(to_string(t));
        try {
            if (requires_q_above_one(t) && !(p.q > 1.0)) {
                row.status = RowStatus::not_applicable;
                row.message = "requires q > 1";
                out.push_back(row);
                continue;
            }
            const ConvexityVerdict v = check_hypothesis(fn, hypothesis_for(t, iv, p), opt.grid_n);
            row.gate_holds = v.holds;
            const BoundReport r = finalize(evaluate_bound(t, fn, iv, p, opt.quad_tol), opt.holds_tol);
            row.lhs = r.lhs;
            row.rhs = r.rhs;
            row.slack = r.slack;
            row.status = !v.holds ? RowStatus::gate_failed : (r.holds ? RowStatus::holds : RowStatus::violated);
        } catch (const std::exception& e) {
            row.status = RowStatus::input_error;
            row.message = e.what();
        }
        out.push_back(row);
    }

    TightnessRow base;
    base.bound = "hh_upper";
    const QuadResult mean = integral_mean(fn, iv, opt.quad_tol);
    base.lhs = mean.value;
    base.rhs = bound_hh(fn, iv).second;
    base.slack = base.rhs - base.lhs;
    base.status = base.lhs <= base.rhs + mean.error_estimate + opt.holds_tol ? RowStatus::holds : RowStatus::violated;
    base.message = "baseline";
    out.push_back(base);

    std::vector<std::size_t> ranked;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& r = out[i];
        if ((r.status == RowStatus::holds || r.status == RowStatus::violated) && r.bound != "sso" &&
            r.bound != "hh_upper")
            ranked.push_back(i);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](std::size_t x, std::size_t y) { return out[x].slack < out[y].slack; });
    for (std::size_t k = 0; k < ranked.size(); ++k)
        out[ranked[k]].rank = static_cast<int>(k + 1);
    if (!ranked.empty())
        out[ranked.front()].tightest = true;
    return out;
}

inline const std::vector<std::string>& tightness_columns() {
    static const std::vector<std::string> cols = {"schema", "bound", "status", "lhs",      "rhs",
                                                  "slack",  "rank",  "tightest", "gate_holds", "message"};
    return cols;
}

inline std::vector<std::string> tightness_fields(const TightnessRow& r) {
    return {std::to_string(kSchemaVersion),
            r.bound,
            std::string(to_string(r.status)),
            format_double(r.lhs),
            format_double(r.rhs),
            format_double(r.slack),
            r.rank ? std::to_string(r.rank) : "",
            r.tightest ? "true" : "false",
            r.gate_holds ? (*r.gate_holds ? "true" : "false") : "",
            r.message};
}

}  // namespace hh
