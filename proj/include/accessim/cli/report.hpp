#pragma once

#include <cstdint>
#include <string>

#include "accessim/cli/scenario.hpp"
#include "accessim/sim/engine.hpp"

namespace accessim::cli {

struct ReportOptions {
    std::string out_dir; // created when missing
    bool write_csv = true;
    bool write_json = true;
};

/// Writes summary.txt, metrics.csv, metrics.json and eventlog.hash for one
/// finished run. Output carries no timestamps or machine state, so the same
/// run always produces the same bytes.
void write_report(const ScenarioConfig& config, std::uint64_t seed,
                  const sim::RunReport& report, const ReportOptions& options);

} // namespace accessim::cli
