#pragma once

#include <map>
#include <optional>

#include "accessim/core/types.hpp"

namespace accessim::preventive {

/// Per-AC barring entry from SIB1: an allow probability, the hold-off applied
/// when barred, and one allow bit per high-priority Access Identity.
struct UacBarringEntry {
    double barring_factor = 1.0;        // probability the attempt is allowed
    SimTime barring_time = seconds(4);  // hold-off after a barred attempt
    core::AiSet ai_allowed;             // bits for AIs 1,2,11..15 only

    bool operator==(const UacBarringEntry&) const = default;
};

/// The cell's UAC configuration. An absent category is not barred. AC 0 never
/// has an entry and is never consulted.
struct UacConfig {
    std::map<int, UacBarringEntry> entries; // keyed by AC value, 1..63
    bool jittered_barring_time = false;     // barred duration drawn in [0.7, 1.3] x time

    const UacBarringEntry* find(core::AccessCategory ac) const
    {
        if (ac.value() == 0) {
            return nullptr;
        }
        const auto it = entries.find(ac.value());
        return it == entries.end() ? nullptr : &it->second;
    }
};

struct UacResult {
    bool allowed = true;
    SimTime barred_until = 0; // valid when barred

    static UacResult ok() { return {true, 0}; }
    static UacResult barred(SimTime until) { return {false, until}; }
};

/// Evaluates the barring check for one attempt, in order: an active waitTime
/// bars every AC except 0 and 2; AC 0 is always allowed; an AC without an
/// entry is allowed; an allowed high-priority AI bypasses the factor; else
/// the attempt passes iff the caller's uniform draw falls under the factor.
/// `jitter_draw` is consulted only when the config enables jittered barring.
UacResult uac_check(core::AccessCategory ac,
                    core::AiSet ais,
                    const UacConfig& config,
                    double uniform_draw,
                    SimTime now,
                    const core::UeProfile& profile,
                    std::optional<double> jitter_draw = std::nullopt);

/// Applies a waitTime received in an RRC Reject/Release: until now + wait the
/// UE bars every AC except 0 and 2.
core::UeProfile apply_wait_time(core::UeProfile profile, SimTime wait_time, SimTime now);

} // namespace accessim::preventive
