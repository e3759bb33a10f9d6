#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "accessim/core/time.hpp"
#include "accessim/sim/random.hpp"

namespace accessim::sim {

/// Sub-key values under the traffic and paging purposes, so distinct draw
/// kinds for the same entity never collide.
namespace traffic_draw {
inline constexpr std::uint64_t kInterArrival = 0;
inline constexpr std::uint64_t kBurstJitter = 1;
inline constexpr std::uint64_t kCauseMix = 2;
inline constexpr std::uint64_t kFlowInterArrival = 3;
} // namespace traffic_draw

namespace paging_draw {
inline constexpr std::uint64_t kInterArrival = 0;
inline constexpr std::uint64_t kPriority = 1;
inline constexpr std::uint64_t kTarget = 2;
} // namespace paging_draw

/// Arrival instants of a per-UE Poisson process on [0, horizon]. The k-th
/// inter-arrival draw is keyed by (ue_key, k) so one UE's stream never
/// depends on another's.
std::vector<SimTime> poisson_arrivals(RandomStreams& rng, std::uint64_t purpose,
                                      std::uint64_t ue_key, double rate_hz,
                                      SimTime horizon,
                                      std::uint64_t sub = traffic_draw::kInterArrival);

/// One activation uniformly inside [at, at + jitter].
SimTime burst_arrival(RandomStreams& rng, std::uint64_t ue_key, SimTime at,
                      SimTime jitter);

struct PagingArrivalSpec {
    SimTime t = 0;
    int priority = 1;
    std::uint64_t target_index = 0; // index into the population
};

/// Aggregate Poisson stream of mobile-terminated pages for one population:
/// priorities follow the mix weights, targets are uniform over the
/// population.
std::vector<PagingArrivalSpec> paging_arrivals(RandomStreams& rng,
                                               std::uint64_t pop_key, double rate_hz,
                                               const std::vector<std::pair<int, double>>& priority_mix,
                                               std::uint64_t population_count,
                                               SimTime horizon);

/// Maps a uniform draw to an index by cumulative weight; weights must be
/// positive and sum to ~1.
std::size_t pick_weighted(const std::vector<double>& weights, double draw);

} // namespace accessim::sim
