#include "accessim/cli/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "accessim/sim/event_log.hpp"

namespace accessim::cli {
namespace {

std::string fmt_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

void write_summary(const std::filesystem::path& dir, const ScenarioConfig& config,
                   std::uint64_t seed, const sim::RunReport& report)
{
    auto out = open_out(dir / "summary.txt");
    out << "scenario = " << config.name << "\n";
    out << "seed = " << seed << "\n";
    out << "duration_s = " << fmt_double(config.duration_s) << "\n";
    out << "events_processed = " << report.events_processed << "\n";
    out << "random_draws = " << report.draw_count << "\n";
    out << "log_lines = " << report.log_line_count << "\n";
    out << "eventlog_digest = " << sim::EventLog::hex(report.eventlog_digest) << "\n";
    for (const auto& [tag, digest] : report.slice_digests) {
        out << "slice_digest " << tag << " = " << sim::EventLog::hex(digest) << "\n";
    }

    const char* totals[] = {
        sim::metric::kAttempts.c_str(),      sim::metric::kAccessSuccess.c_str(),
        sim::metric::kBarredUac.c_str(),     sim::metric::kBarredWait.c_str(),
        sim::metric::kBarredCell.c_str(),    sim::metric::kRaFailures.c_str(),
        sim::metric::kRaCollisions.c_str(),  sim::metric::kRejects.c_str(),
        sim::metric::kQueueWaits.c_str(),    sim::metric::kPreemptions.c_str(),
        sim::metric::kPagingPaged.c_str(),   sim::metric::kPagingDropped.c_str(),
    };
    for (const char* name : totals) {
        out << name << " = " << report.metrics.total(name) << "\n";
    }
    out << "audit_violations = " << report.audit_violations.size() << "\n";
    for (const auto& v : report.audit_violations) {
        out << "violation: " << v << "\n";
    }
}

void write_csv(const std::filesystem::path& dir, const sim::RunReport& report)
{
    auto out = open_out(dir / "metrics.csv");
    out << "metric,ai,ac,slice,cause,count,sum,p50,p95\n";
    auto dim = [](int v) { return v < 0 ? std::string() : std::to_string(v); };
    for (const auto& [key, count] : report.metrics.counters()) {
        out << key.metric << ',' << dim(key.ai) << ',' << dim(key.ac) << ',' << key.slice
            << ',' << key.cause << ',' << count << ",,,\n";
    }
    for (const auto& [key, values] : report.metrics.samples()) {
        double sum = 0.0;
        for (double v : values) {
            sum += v;
        }
        out << key.metric << ',' << dim(key.ai) << ',' << dim(key.ac) << ',' << key.slice
            << ',' << key.cause << ',' << values.size() << ',' << fmt_double(sum) << ','
            << fmt_double(sim::MetricsSink::percentile(values, 50.0)) << ','
            << fmt_double(sim::MetricsSink::percentile(values, 95.0)) << "\n";
    }
}

void write_json(const std::filesystem::path& dir, const ScenarioConfig& config,
                std::uint64_t seed, const sim::RunReport& report)
{
    nlohmann::json j;
    j["scenario"] = config.name;
    j["seed"] = seed;
    j["events_processed"] = report.events_processed;
    j["eventlog_digest"] = sim::EventLog::hex(report.eventlog_digest);
    j["counters"] = nlohmann::json::array();
    for (const auto& [key, count] : report.metrics.counters()) {
        j["counters"].push_back({{"metric", key.metric},
                                 {"ai", key.ai},
                                 {"ac", key.ac},
                                 {"slice", key.slice},
                                 {"cause", key.cause},
                                 {"count", count}});
    }
    j["samples"] = nlohmann::json::array();
    for (const auto& [key, values] : report.metrics.samples()) {
        double sum = 0.0;
        for (double v : values) {
            sum += v;
        }
        j["samples"].push_back(
            {{"metric", key.metric},
             {"ai", key.ai},
             {"ac", key.ac},
             {"slice", key.slice},
             {"cause", key.cause},
             {"count", values.size()},
             {"sum", sum},
             {"p50", sim::MetricsSink::percentile(values, 50.0)},
             {"p95", sim::MetricsSink::percentile(values, 95.0)}});
    }
    auto out = open_out(dir / "metrics.json");
    out << j.dump(2) << "\n";
}

void write_hash(const std::filesystem::path& dir, const sim::RunReport& report)
{
    auto out = open_out(dir / "eventlog.hash");
    out << sim::EventLog::hex(report.eventlog_digest) << "\n";
    for (const auto& [tag, digest] : report.slice_digests) {
        out << "slice " << tag << " " << sim::EventLog::hex(digest) << "\n";
    }
}

} // namespace

void write_report(const ScenarioConfig& config, std::uint64_t seed,
                  const sim::RunReport& report, const ReportOptions& options)
{
    std::filesystem::path dir(options.out_dir);
    std::filesystem::create_directories(dir);
    write_summary(dir, config, seed, report);
    if (options.write_csv) {
        write_csv(dir, report);
    }
    if (options.write_json) {
        write_json(dir, config, seed, report);
    }
    write_hash(dir, report);
}

} // namespace accessim::cli
