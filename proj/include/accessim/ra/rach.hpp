#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "accessim/core/time.hpp"
#include "accessim/core/types.hpp"

namespace accessim::ra {

enum class RaMode { FourStep, TwoStep };

/// Priority treatment applied to MPS/MCS attempts when enabled on a cell.
struct PrioritizedRaConfig {
    bool enabled = false;
    double backoff_scaling = 1.0;      // < 1 shortens the drawn backoff
    double power_ramping_step_high_db = 0.0;
};

struct RachConfig {
    int n_preambles = 64;
    SimTime occasion_period = millis(10);
    SimTime backoff_indicator = millis(160); // upper end of the backoff draw
    double initial_power_dbm = -100.0;
    double power_ramping_step_db = 2.0;
    double detection_threshold_dbm = -104.0;
    int max_attempts = 10;
    RaMode mode = RaMode::FourStep;
    // MSGA timing limits restrict two-step access to small cells; the flag
    // is the cell's declaration that it qualifies.
    bool two_step_allowed = false;
    // Probability a retry lands on a different beam, resetting the power
    // ramp. Static UEs keep it at 0.
    double beam_change_probability = 0.0;
    PrioritizedRaConfig prioritized;

    // Per-message one-way latencies. Four-step: MSG1..MSG4. Two-step:
    // MSGA, MSGB.
    std::vector<SimTime> msg_latencies;

    int messages_per_access() const
    {
        return mode == RaMode::FourStep ? 4 : 2;
    }

    SimTime msg_latency(std::size_t i) const
    {
        return i < msg_latencies.size() ? msg_latencies[i] : 0;
    }

    /// Preamble send to the network holding the decoded uplink request:
    /// MSG1+MSG2+MSG3 in four-step, MSGA alone in two-step.
    SimTime uplink_request_latency() const
    {
        if (mode == RaMode::FourStep) {
            return msg_latency(0) + msg_latency(1) + msg_latency(2);
        }
        return msg_latency(0);
    }

    /// Preamble send to contention resolution received.
    SimTime full_exchange_latency() const
    {
        SimTime total = 0;
        for (int i = 0; i < messages_per_access(); ++i) {
            total += msg_latency(static_cast<std::size_t>(i));
        }
        return total;
    }

    /// How long an undetected UE waits before concluding no response came:
    /// the response window spans the first round trip.
    SimTime response_timeout_latency() const
    {
        return msg_latency(0) + msg_latency(1);
    }

    bool is_priority_class(const core::AiSet& ais) const
    {
        return prioritized.enabled &&
               (ais.contains(core::AccessIdentity::Mps) ||
                ais.contains(core::AccessIdentity::Mcs));
    }

    double ramping_step(bool priority_class) const
    {
        if (priority_class && prioritized.enabled) {
            return prioritized.power_ramping_step_high_db;
        }
        return power_ramping_step_db;
    }

    double backoff_scale(bool priority_class) const
    {
        if (priority_class && prioritized.enabled) {
            return prioritized.backoff_scaling;
        }
        return 1.0;
    }
};

/// Mutable per-attempt state a UE carries across retries.
struct RaAttemptState {
    int attempt_no = 1; // 1-based
    double current_power_dbm = 0.0;
    int chosen_preamble = -1;
    bool same_beam_as_previous = true;
    bool priority_class = false;
};

struct RaRetryParams {
    SimTime backoff = 0;
    double power_dbm = 0.0;
};

/// Parameters for the retry after a failed attempt, or nullopt when the
/// attempt budget is spent. Power ramps only while the UE stays on the same
/// beam; a beam switch restarts from the initial power.
std::optional<RaRetryParams> next_attempt_params(const RaAttemptState& state,
                                                 const RachConfig& cfg,
                                                 double backoff_draw);

struct PreambleTx {
    core::UeId ue_id = 0;
    int preamble = -1;
    double power_dbm = 0.0;
};

enum class RaDetection { Proceed, NotDetected };

struct RaUeOutcome {
    core::UeId ue_id = 0;
    RaDetection result = RaDetection::NotDetected;
    bool contended = false; // another detected UE sent the same preamble
};

/// Detection for one RACH occasion. A transmission below the detection
/// threshold is lost; detected transmissions sharing a preamble all proceed
/// into contention resolution, flagged as contended.
std::vector<RaUeOutcome> rach_round(const std::vector<PreambleTx>& transmissions,
                                    const RachConfig& cfg);

struct ContentionResult {
    core::UeId winner = 0;
    std::vector<core::UeId> losers;
    int messages_charged = 0;      // per participant, winner and losers alike
    SimTime exchange_latency = 0;  // preamble send to resolution received
};

/// Resolves one contended preamble. Exactly one contender decodes the
/// network response addressed to it; `contenders` must be sorted by UE id so
/// the draw maps to a stable winner.
ContentionResult contention_resolution(const std::vector<core::UeId>& contenders,
                                       const RachConfig& cfg,
                                       double winner_draw);

} // namespace accessim::ra
