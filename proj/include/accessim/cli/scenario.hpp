#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "accessim/admission/admission.hpp"
#include "accessim/core/time.hpp"
#include "accessim/core/types.hpp"
#include "accessim/preventive/cell_access.hpp"
#include "accessim/preventive/uac.hpp"
#include "accessim/ra/rach.hpp"

namespace accessim::cli {

struct TrafficConfig {
    enum class Kind { None, Poisson, Burst };
    Kind kind = Kind::None;
    double rate_per_ue_hz = 0.0; // Poisson
    SimTime at = 0;              // Burst activation
    SimTime jitter = 0;          // Burst window length

    bool operator==(const TrafficConfig&) const = default;
};

/// Aggregate mobile-terminated load against one population.
struct PagingLoadConfig {
    double rate_hz = 0.0;
    std::vector<std::pair<int, double>> priority_mix; // (priority, weight)

    bool operator==(const PagingLoadConfig&) const = default;
};

struct FlowConfig {
    core::ArpProfile arp;
    core::ResourceType resource_type = core::ResourceType::NonGbr;
    core::Snssai snssai;
    std::uint64_t demand = 0;

    bool operator==(const FlowConfig&) const = default;
};

struct CauseMixEntry {
    core::EstablishmentCause cause = core::EstablishmentCause::MoData;
    double weight = 1.0;

    bool operator==(const CauseMixEntry&) const = default;
};

struct UeTemplateConfig {
    std::vector<int> access_identities; // besides the implicit AI 0
    core::PlmnId home_plmn{1, 1};
    bool in_home_country = true;
    bool in_home_plmn = true;
    std::vector<std::uint32_t> npn_authorized;
    core::RrcState initial_state = core::RrcState::Idle;

    bool operator==(const UeTemplateConfig&) const = default;
};

struct PopulationConfig {
    std::string name;
    std::uint64_t count = 0;
    core::CellId cell = 0;
    UeTemplateConfig ue;
    TrafficConfig traffic;
    PagingLoadConfig paging;
    std::vector<CauseMixEntry> cause_mix; // defaults to pure mo_data

    // Attempt traits applied to every access attempt of the population.
    bool delay_tolerant = false;
    bool exception_data = false;
    bool nas_signalling = false;
    std::optional<int> operator_ac;

    std::vector<FlowConfig> flows; // session flows admitted on connect
    double session_s = 0.0;        // 0 = hold until end of run
    enum class ReleaseTo { Idle, Inactive } release_to = ReleaseTo::Idle;

    // Connected-mode QoS flow churn: per-UE arrival rate of short-lived
    // extra-flow requests.
    double qos_flow_rate_hz = 0.0;
    double qos_flow_hold_s = 0.0;
    std::vector<FlowConfig> qos_flows;

    // Location overrides; empty means derive from the serving cell.
    std::vector<std::uint32_t> tracking_areas;
    std::vector<core::CellId> rna_cells;

    bool operator==(const PopulationConfig&) const = default;
};

struct PagingConfig {
    SimTime cycle = millis(20);
    std::uint64_t budget = 8;
    int discard_cycles = 5; // discard timeout = discard_cycles * cycle
    int priority_levels = 8;

    bool operator==(const PagingConfig&) const = default;
};

struct CellConfig {
    core::CellId id = 0;
    core::GnbId gnb = 0;
    std::uint32_t tracking_area = 0;
    preventive::CellAccessInfo access;
    ra::RachConfig rach;
    preventive::UacConfig uac;
    std::vector<admission::SlicePool> pools;
    std::uint64_t shared_capacity = 0;
    admission::AdmissionPolicy admission;
    PagingConfig paging;
};

struct ScenarioConfig {
    std::string name;
    double duration_s = 1.0;
    std::uint64_t default_seed = 1;
    SimTime inter_gnb_delay = 0;
    std::vector<CellConfig> cells;
    std::vector<PopulationConfig> populations;

    SimTime horizon() const { return from_seconds(duration_s); }
    const CellConfig* find_cell(core::CellId id) const
    {
        for (const auto& c : cells) {
            if (c.id == id) {
                return &c;
            }
        }
        return nullptr;
    }
};

/// One validation problem, locating the offending key.
struct ValidationError {
    std::string path;
    std::string message;
};

struct ParseResult {
    std::optional<ScenarioConfig> config;
    std::vector<ValidationError> errors;

    bool ok() const { return config.has_value() && errors.empty(); }
};

/// Parses and validates a scenario file (JSON with comments allowed). All
/// errors are collected, not just the first.
ParseResult parse_scenario_file(const std::string& path);
ParseResult parse_scenario_text(const std::string& text);

/// Validation only; parse_* call this themselves.
std::vector<ValidationError> validate_scenario(const ScenarioConfig& config);

/// Serializes a config back to scenario JSON; parse(emit(c)) == c.
std::string emit_scenario(const ScenarioConfig& config);

} // namespace accessim::cli
