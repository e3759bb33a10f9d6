#include "accessim/ra/rach.hpp"

#include <cmath>
#include <map>

namespace accessim::ra {

std::optional<RaRetryParams> next_attempt_params(const RaAttemptState& state,
                                                 const RachConfig& cfg,
                                                 double backoff_draw)
{
    if (state.attempt_no >= cfg.max_attempts) {
        return std::nullopt;
    }

    RaRetryParams params;
    double scale = cfg.backoff_scale(state.priority_class);
    double window = static_cast<double>(cfg.backoff_indicator) * scale;
    params.backoff = static_cast<SimTime>(std::llround(backoff_draw * window));

    if (state.same_beam_as_previous) {
        params.power_dbm = state.current_power_dbm + cfg.ramping_step(state.priority_class);
    } else {
        params.power_dbm = cfg.initial_power_dbm;
    }
    return params;
}

std::vector<RaUeOutcome> rach_round(const std::vector<PreambleTx>& transmissions,
                                    const RachConfig& cfg)
{
    std::map<int, int> detected_per_preamble;
    for (const auto& tx : transmissions) {
        if (tx.power_dbm >= cfg.detection_threshold_dbm) {
            ++detected_per_preamble[tx.preamble];
        }
    }

    std::vector<RaUeOutcome> outcomes;
    outcomes.reserve(transmissions.size());
    for (const auto& tx : transmissions) {
        RaUeOutcome out;
        out.ue_id = tx.ue_id;
        if (tx.power_dbm < cfg.detection_threshold_dbm) {
            out.result = RaDetection::NotDetected;
        } else {
            out.result = RaDetection::Proceed;
            out.contended = detected_per_preamble[tx.preamble] >= 2;
        }
        outcomes.push_back(out);
    }
    return outcomes;
}

ContentionResult contention_resolution(const std::vector<core::UeId>& contenders,
                                       const RachConfig& cfg,
                                       double winner_draw)
{
    ContentionResult result;
    result.messages_charged = cfg.messages_per_access();
    result.exchange_latency = cfg.full_exchange_latency();
    if (contenders.empty()) {
        return result;
    }

    auto n = contenders.size();
    auto idx = static_cast<std::size_t>(winner_draw * static_cast<double>(n));
    idx = std::min(idx, n - 1);
    result.winner = contenders[idx];
    for (std::size_t i = 0; i < n; ++i) {
        if (i != idx) {
            result.losers.push_back(contenders[i]);
        }
    }
    return result;
}

} // namespace accessim::ra
