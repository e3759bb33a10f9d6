#include "accessim/sim/traffic.hpp"

#include <cmath>

namespace accessim::sim {

std::vector<SimTime> poisson_arrivals(RandomStreams& rng, std::uint64_t purpose,
                                      std::uint64_t ue_key, double rate_hz,
                                      SimTime horizon, std::uint64_t sub)
{
    std::vector<SimTime> arrivals;
    if (rate_hz <= 0.0) {
        return arrivals;
    }
    double mean_us = 1e6 / rate_hz;
    double t = 0.0;
    for (std::uint64_t k = 0;; ++k) {
        t += rng.exponential(purpose, mean_us, ue_key, k, sub);
        auto at = static_cast<SimTime>(std::llround(t));
        if (at > horizon) {
            break;
        }
        arrivals.push_back(at);
    }
    return arrivals;
}

SimTime burst_arrival(RandomStreams& rng, std::uint64_t ue_key, SimTime at, SimTime jitter)
{
    if (jitter <= 0) {
        return at;
    }
    double u = rng.uniform(purpose::kTraffic, ue_key, 0, traffic_draw::kBurstJitter);
    return at + static_cast<SimTime>(std::llround(u * static_cast<double>(jitter)));
}

std::vector<PagingArrivalSpec> paging_arrivals(RandomStreams& rng, std::uint64_t pop_key,
                                               double rate_hz,
                                               const std::vector<std::pair<int, double>>& priority_mix,
                                               std::uint64_t population_count,
                                               SimTime horizon)
{
    std::vector<PagingArrivalSpec> arrivals;
    if (rate_hz <= 0.0 || population_count == 0) {
        return arrivals;
    }
    std::vector<double> weights;
    weights.reserve(priority_mix.size());
    for (const auto& [level, w] : priority_mix) {
        weights.push_back(w);
    }

    double mean_us = 1e6 / rate_hz;
    double t = 0.0;
    for (std::uint64_t k = 0;; ++k) {
        t += rng.exponential(purpose::kPaging, mean_us, pop_key, k,
                             paging_draw::kInterArrival);
        auto at = static_cast<SimTime>(std::llround(t));
        if (at > horizon) {
            break;
        }
        PagingArrivalSpec spec;
        spec.t = at;
        if (weights.empty()) {
            spec.priority = 1;
        } else {
            double u = rng.uniform(purpose::kPaging, pop_key, k, paging_draw::kPriority);
            spec.priority = priority_mix[pick_weighted(weights, u)].first;
        }
        double ut = rng.uniform(purpose::kPaging, pop_key, k, paging_draw::kTarget);
        spec.target_index = std::min<std::uint64_t>(
            static_cast<std::uint64_t>(ut * static_cast<double>(population_count)),
            population_count - 1);
        arrivals.push_back(spec);
    }
    return arrivals;
}

std::size_t pick_weighted(const std::vector<double>& weights, double draw)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (draw < acc) {
            return i;
        }
    }
    return weights.empty() ? 0 : weights.size() - 1;
}

} // namespace accessim::sim
