#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "accessim/cli/scenario.hpp"
#include "accessim/core/types.hpp"
#include "accessim/sim/event_log.hpp"
#include "accessim/sim/metrics.hpp"
#include "accessim/sim/random.hpp"

namespace accessim::sim {

struct RunOptions {
    bool keep_event_lines = false; // retain log lines, not just digests
    bool audit = false;            // conservation + eviction-rule checks
    bool log_draws = false;        // record every random draw
};

/// One applied pre-emption, kept for the eviction-rule audit.
struct EvictionRecord {
    SimTime t = 0;
    core::UeId victim_ue = 0;
    core::FlowId victim_flow = 0;
    int victim_arp = 0;
    bool victim_vulnerable = false;
    int incoming_arp = 0;
};

struct RunReport {
    MetricsSink metrics;
    std::uint64_t eventlog_digest = 0;
    std::map<std::string, std::uint64_t> slice_digests;
    std::vector<std::string> event_lines; // when kept
    std::uint64_t log_line_count = 0;
    std::uint64_t events_processed = 0;
    std::uint64_t draw_count = 0;
    std::vector<DrawRecord> draws; // when logged
    std::vector<EvictionRecord> evictions;
    std::vector<std::string> audit_violations; // when auditing
};

/// Executes the scenario to its horizon. Fully deterministic in
/// (config, seed): every draw is keyed by purpose and entity, every
/// same-instant tie is broken by schedule order. Throws std::runtime_error
/// when the config fails validation.
RunReport run(const cli::ScenarioConfig& config, std::uint64_t seed,
              const RunOptions& options = {});

} // namespace accessim::sim
