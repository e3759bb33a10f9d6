#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "accessim/cli/report.hpp"
#include "accessim/cli/scenario.hpp"
#include "accessim/sim/engine.hpp"

namespace {

using accessim::cli::ParseResult;

int print_errors(const ParseResult& result)
{
    for (const auto& e : result.errors) {
        std::cerr << (e.path.empty() ? std::string("scenario") : e.path) << ": "
                  << e.message << "\n";
    }
    return 1;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw CLI::ValidationError("scenario", "cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// "cells[0].rach.backoff_indicator_ms" -> "/cells/0/rach/backoff_indicator_ms"
std::string dotted_to_pointer(const std::string& dotted)
{
    std::string out;
    std::string token;
    auto flush = [&] {
        if (!token.empty()) {
            out += "/" + token;
            token.clear();
        }
    };
    for (char c : dotted) {
        if (c == '.' || c == '[') {
            flush();
        } else if (c == ']') {
            flush();
        } else {
            token += c;
        }
    }
    flush();
    return out;
}

/// Sweep values arrive as text; reinterpret as JSON scalars when they parse.
nlohmann::json value_from_text(const std::string& text)
{
    nlohmann::json parsed = nlohmann::json::parse(text, nullptr, false);
    if (!parsed.is_discarded() &&
        (parsed.is_number() || parsed.is_boolean() || parsed.is_null())) {
        return parsed;
    }
    return text;
}

std::string sanitize_for_dir(const std::string& text)
{
    std::string out;
    for (char c : text) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_';
        out += ok ? c : '_';
    }
    return out;
}

struct RunInvocation {
    std::string text; // scenario JSON after overrides
    std::string out_dir;
    std::string label;
};

int run_one(const RunInvocation& inv, std::optional<std::uint64_t> seed_arg,
            bool csv, bool json_out, bool audit, bool keep_log)
{
    auto parsed = accessim::cli::parse_scenario_text(inv.text);
    if (!parsed.ok()) {
        return print_errors(parsed);
    }
    const auto& config = *parsed.config;
    std::uint64_t seed = seed_arg.value_or(config.default_seed);

    accessim::sim::RunOptions run_opts;
    run_opts.audit = audit;
    run_opts.keep_event_lines = keep_log;
    auto report = accessim::sim::run(config, seed, run_opts);

    accessim::cli::ReportOptions rep;
    rep.out_dir = inv.out_dir;
    rep.write_csv = csv;
    rep.write_json = json_out;
    accessim::cli::write_report(config, seed, report, rep);

    if (keep_log) {
        std::ofstream log(inv.out_dir + "/eventlog.txt", std::ios::binary);
        for (const auto& line : report.event_lines) {
            log << line << "\n";
        }
    }

    std::uint64_t attempts = report.metrics.total(accessim::sim::metric::kAttempts);
    std::uint64_t success = report.metrics.total(accessim::sim::metric::kAccessSuccess);
    std::cout << config.name << (inv.label.empty() ? "" : " " + inv.label) << ": seed "
              << seed << ", " << report.events_processed << " events, " << success << "/"
              << attempts << " accesses succeeded, report in " << inv.out_dir << "\n";
    if (!report.audit_violations.empty()) {
        std::cerr << report.audit_violations.size() << " audit violations, see summary.txt\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"accessim: deterministic cellular access control simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string format = "csv,json";
    std::string sweep;
    bool audit = false;
    bool keep_log = false;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario and write reports");
    run_cmd->add_option("scenario", scenario_path, "Scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--seed", seed, "Override the scenario's default seed");
    run_cmd->add_option("--out", out_dir,
                        "Report directory (default: $ACCESSIM_OUT or out/<name>)");
    run_cmd->add_option("--format", format, "Comma list of metric formats: csv,json");
    run_cmd->add_option("--sweep", sweep,
                        "key=v1,v2,... runs once per value of a config key, e.g. "
                        "cells[0].rach.backoff_indicator_ms=80,160,320");
    run_cmd->add_flag("--audit", audit, "Run accounting audits after admission events");
    run_cmd->add_flag("--keep-log", keep_log, "Also write the full event log");

    std::string validate_path;
    auto* validate_cmd =
        app.add_subcommand("validate", "Parse and validate a scenario file");
    validate_cmd->add_option("scenario", validate_path, "Scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    if (validate_cmd->parsed()) {
        auto parsed = accessim::cli::parse_scenario_file(validate_path);
        if (!parsed.ok()) {
            return print_errors(parsed);
        }
        std::cout << validate_path << ": ok (" << parsed.config->cells.size()
                  << " cells, " << parsed.config->populations.size()
                  << " populations)\n";
        return 0;
    }

    bool csv = format.find("csv") != std::string::npos;
    bool json_out = format.find("json") != std::string::npos;

    std::string text;
    try {
        text = read_file(scenario_path);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    if (out_dir.empty()) {
        if (const char* env = std::getenv("ACCESSIM_OUT")) {
            out_dir = env;
        }
    }
    if (out_dir.empty()) {
        auto probe = accessim::cli::parse_scenario_text(text);
        std::string name =
            probe.config && !probe.config->name.empty() ? probe.config->name : "run";
        out_dir = "out/" + sanitize_for_dir(name);
    }

    try {
        if (sweep.empty()) {
            return run_one({text, out_dir, ""}, seed, csv, json_out, audit, keep_log);
        }

        auto eq = sweep.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= sweep.size()) {
            std::cerr << "--sweep wants key=v1,v2,...\n";
            return 1;
        }
        std::string key = sweep.substr(0, eq);
        std::string pointer = dotted_to_pointer(key);
        std::vector<std::string> values;
        std::istringstream vs(sweep.substr(eq + 1));
        for (std::string v; std::getline(vs, v, ',');) {
            values.push_back(v);
        }

        nlohmann::json base = nlohmann::json::parse(text, nullptr, false, true);
        if (base.is_discarded()) {
            std::cerr << scenario_path << ": not valid JSON\n";
            return 1;
        }
        int rc = 0;
        for (const auto& v : values) {
            nlohmann::json variant = base;
            variant[nlohmann::json::json_pointer(pointer)] = value_from_text(v);
            RunInvocation inv;
            inv.text = variant.dump();
            inv.out_dir = out_dir + "/" + sanitize_for_dir(key) + "=" +
                          sanitize_for_dir(v);
            inv.label = key + "=" + v;
            rc = std::max(rc, run_one(inv, seed, csv, json_out, audit, keep_log));
        }
        return rc;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
