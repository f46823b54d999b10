// hh_verify: command-line front end for the bound library.
//
//   hh_verify verify    --fn pow2 --a 1 --b 2 --lambda 2 --mu 1 --theorem thm11
//   hh_verify sweep     [--config FILE] [--out FILE] [--format csv|json] [--jobs N]
//   hh_verify tightness --fn pow2 --a 1 --b 2 --q 2 --theorems bop_m,thm211,thm22
//   hh_verify means     --prop 1 --a 1 --b 2 --n 2 --lambda 1 --mu 1 --q 1
//
// Exit codes: 0 holds, 1 violated, 2 hypothesis (gate) failure, 3 input error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hhbounds/harness.hpp"
#include "hhbounds/hhbounds.hpp"

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitViolated = 1;
constexpr int kExitGate = 2;
constexpr int kExitInput = 3;

struct Coordinates {
    std::string fn;
    double a = 0.0;
    double b = 1.0;
    hh::Params params;
    double tol = hh::kLhsTolerance;
    int grid_n = hh::kDefaultGridN;
    std::string format = "text";
};

void add_coordinates(CLI::App* cmd, Coordinates& c) {
    cmd->add_option("--fn", c.fn, "function id (pow2, pow3, pow4, powm2, recip, exp, xlogx, linear, const, powN)")
        ->required();
    cmd->add_option("--a", c.a, "left endpoint")->required();
    cmd->add_option("--b", c.b, "right endpoint")->required();
    cmd->add_option("--alpha", c.params.alpha, "alpha in (0,1]");
    cmd->add_option("--m", c.params.m, "m in (0,1]");
    cmd->add_option("--lambda", c.params.lambda, "weight on f(a)");
    cmd->add_option("--mu", c.params.mu, "weight on f(b)");
    cmd->add_option("--q", c.params.q, "derivative power q >= 1");
    cmd->add_option("--tol", c.tol, "quadrature tolerance for the integral mean");
    cmd->add_option("--grid", c.grid_n, "convexity screening grid size (>= 8)");
}

int status_exit(hh::RowStatus s) {
    switch (s) {
        case hh::RowStatus::holds: return kExitHolds;
        case hh::RowStatus::violated: return kExitViolated;
        case hh::RowStatus::gate_failed: return kExitGate;
        case hh::RowStatus::not_applicable:
        case hh::RowStatus::input_error: return kExitInput;
    }
    return kExitInput;
}

int run_verify(const Coordinates& c, const std::string& theorem) {
    hh::Theorem t;
    try {
        t = hh::parse_theorem(theorem);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    const hh::RowOptions opt{c.tol, hh::kHoldsTolerance, c.grid_n};
    const hh::ReportRow row = hh::evaluate_row(c.fn, hh::Interval{c.a, c.b}, c.params, t, opt);
    if (c.format == "json") {
        std::cout << nlohmann::ordered_json::array({hh::row_json(row)}).dump(1) << '\n';
    } else if (c.format == "csv") {
        hh::write_csv(std::cout, {row});
    } else {
        hh::write_text(std::cout, row);
    }
    if (!row.message.empty() && row.status == hh::RowStatus::input_error)
        std::cerr << "error: " << row.message << '\n';
    return status_exit(row.status);
}

int run_sweep(const std::string& config, const std::string& out_path, const std::string& format, int jobs) {
    hh::SweepSpec spec;
    try {
        if (config.empty()) {
            spec = hh::default_sweep_spec();
        } else {
            std::ifstream in(config);
            if (!in) {
                std::cerr << "error: cannot open config '" << config << "'\n";
                return kExitInput;
            }
            spec = hh::parse_sweep_spec(in);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }

    std::cerr << "sweep: " << spec.config_count() << " configurations x " << spec.theorems.size()
              << " bounds = " << spec.row_count() << " rows\n";
    const auto rows = hh::run_sweep(spec, jobs);
    const auto summary = hh::summarize(rows);

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return kExitInput;
        }
    }
    std::ostream& out = out_path.empty() ? std::cout : file;
    if (format == "json")
        hh::write_json(out, rows);
    else
        hh::write_csv(out, rows);

    hh::write_summary(out_path.empty() ? std::cerr : std::cout, summary, rows);
    return summary.violated > 0 ? kExitViolated : kExitHolds;
}

int run_tightness(const Coordinates& c, const std::vector<std::string>& ids) {
    std::vector<hh::Theorem> theorems;
    std::vector<hh::TightnessRow> rows;
    try {
        for (const auto& id : ids)
            theorems.push_back(hh::parse_theorem(id));
        if (theorems.size() < 2)
            throw hh::ParamError("tightness needs at least two bounds");
        rows = hh::run_tightness(c.fn, hh::Interval{c.a, c.b}, c.params, theorems,
                                 hh::RowOptions{c.tol, hh::kHoldsTolerance, c.grid_n});
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }

    const auto& cols = hh::tightness_columns();
    if (c.format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json j;
            j["schema"] = hh::kSchemaVersion;
            j["bound"] = r.bound;
            j["status"] = std::string(hh::to_string(r.status));
            j["lhs"] = hh::json_number(r.lhs);
            j["rhs"] = hh::json_number(r.rhs);
            j["slack"] = hh::json_number(r.slack);
            j["rank"] = r.rank ? nlohmann::ordered_json(r.rank) : nlohmann::ordered_json(nullptr);
            j["tightest"] = r.tightest;
            j["gate_holds"] = r.gate_holds ? nlohmann::ordered_json(*r.gate_holds) : nlohmann::ordered_json(nullptr);
            j["message"] = r.message;
            arr.push_back(j);
        }
        std::cout << arr.dump(1) << '\n';
    } else {
        const char* sep = c.format == "csv" ? "," : "\t";
        for (std::size_t i = 0; i < cols.size(); ++i)
            std::cout << (i ? sep : "") << cols[i];
        std::cout << (c.format == "csv" ? "\r\n" : "\n");
        for (const auto& r : rows) {
            const auto f = hh::tightness_fields(r);
            for (std::size_t i = 0; i < f.size(); ++i)
                std::cout << (i ? sep : "") << (c.format == "csv" ? hh::csv_escape(f[i]) : f[i]);
            std::cout << (c.format == "csv" ? "\r\n" : "\n");
        }
    }

    int code = kExitHolds;
    for (const auto& r : rows) {
        if (r.status == hh::RowStatus::violated)
            return kExitViolated;
        if (r.status == hh::RowStatus::gate_failed)
            code = kExitGate;
    }
    return code;
}

int run_means(const hh::PropositionInput& in, const std::string& format) {
    hh::PropositionResult r;
    try {
        r = hh::proposition_check(in);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    const bool mismatch = !hh::nearly_equal(r.mean_rhs, r.corollary_rhs);
    if (format == "json") {
        nlohmann::ordered_json j;
        j["schema"] = hh::kSchemaVersion;
        j["prop"] = r.k;
        j["mean_lhs"] = hh::json_number(r.mean_lhs);
        j["mean_rhs"] = hh::json_number(r.mean_rhs);
        j["corollary_rhs"] = hh::json_number(r.corollary_rhs);
        j["residual"] = hh::json_number(r.residual);
        j["weight_factor_residual"] = hh::json_number(r.weight_factor_residual);
        j["holds"] = r.holds;
        j["corollary_holds"] = r.corollary_holds;
        j["mean_form_mismatch"] = mismatch;
        std::cout << j.dump(1) << '\n';
    } else {
        std::cout << "prop: " << r.k << '\n'
                  << "mean_lhs: " << hh::format_double(r.mean_lhs) << '\n'
                  << "mean_rhs: " << hh::format_double(r.mean_rhs) << '\n'
                  << "corollary_rhs: " << hh::format_double(r.corollary_rhs) << '\n'
                  << "residual: " << hh::format_double(r.residual) << '\n';
        if (!std::isnan(r.weight_factor_residual))
            std::cout << "weight_factor_residual: " << hh::format_double(r.weight_factor_residual) << '\n';
        std::cout << "holds: " << (r.holds ? "true" : "false") << '\n'
                  << "corollary_holds: " << (r.corollary_holds ? "true" : "false") << '\n';
        if (mismatch)
            std::cout << "finding: mean-form bound differs from the generic bound by factor "
                      << hh::format_double(r.mean_rhs / r.corollary_rhs) << '\n';
    }
    return r.holds ? kExitHolds : kExitViolated;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hermite-Hadamard type bound verification"};
    app.require_subcommand(1);

    Coordinates vc;
    std::string theorem;
    auto* verify = app.add_subcommand("verify", "check one bound on one configuration");
    add_coordinates(verify, vc);
    verify->add_option("--theorem", theorem, "da, sso, bop_m, bop_am, thm11, thm211, thm22")->required();
    verify->add_option("--format", vc.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));

    std::string config;
    std::string out_path;
    std::string sweep_format = "csv";
    int jobs = hh::default_jobs();
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    sweep->add_option("--config", config, "sweep specification (key = v1, v2 lines); default sweep if omitted");
    sweep->add_option("--out", out_path, "output file (stdout if omitted)");
    sweep->add_option("--format", sweep_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--jobs", jobs, "worker threads (default: HH_VERIFY_JOBS or hardware threads)")
        ->check(CLI::PositiveNumber);

    Coordinates tc;
    std::vector<std::string> theorems;
    auto* tight = app.add_subcommand("tightness", "compare several bounds on one configuration");
    add_coordinates(tight, tc);
    tight->add_option("--theorems", theorems, "comma-separated bound ids (at least two)")
        ->required()
        ->delimiter(',');
    tight->add_option("--format", tc.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));

    hh::PropositionInput pin;
    std::string means_format = "text";
    auto* means = app.add_subcommand("means", "check a special-means inequality");
    means->add_option("--prop", pin.k, "proposition 1..6")->required();
    means->add_option("--a", pin.a, "0 < a")->required();
    means->add_option("--b", pin.b, "a < b")->required();
    means->add_option("--n", pin.n, "power for propositions 1-3 (|n| >= 2)");
    means->add_option("--lambda", pin.lambda, "weight on a");
    means->add_option("--mu", pin.mu, "weight on b");
    means->add_option("--q", pin.q, "q >= 1");
    means->add_option("--format", means_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    if (*verify)
        return run_verify(vc, theorem);
    if (*sweep)
        return run_sweep(config, out_path, sweep_format, jobs);
    if (*tight)
        return run_tightness(tc, theorems);
    if (*means)
        return run_means(pin, means_format);
    return kExitInput;
}
