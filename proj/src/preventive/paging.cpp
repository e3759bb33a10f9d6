#include "accessim/preventive/paging.hpp"

#include <algorithm>
#include <tuple>

namespace accessim::preventive {

PagingFilterResult paging_control_filter(std::vector<PagingRequest> queue,
                                         std::size_t budget,
                                         SimTime now,
                                         SimTime discard_after)
{
    PagingFilterResult result;

    // Expiry is checked before the budget so a stale page never consumes a
    // slot another request could have used.
    auto expired = [&](const PagingRequest& r) {
        return now - r.enqueue_time > discard_after;
    };
    for (auto& r : queue) {
        if (expired(r)) {
            result.dropped.push_back(r);
        } else {
            result.deferred.push_back(r);
        }
    }

    auto rank = [](const PagingRequest& r) {
        return std::make_tuple(r.priority, r.enqueue_time, r.target_ue);
    };
    std::stable_sort(result.deferred.begin(), result.deferred.end(),
                     [&](const PagingRequest& a, const PagingRequest& b) {
                         return rank(a) < rank(b);
                     });

    std::size_t take = std::min(budget, result.deferred.size());
    result.to_page.assign(result.deferred.begin(),
                          result.deferred.begin() + static_cast<std::ptrdiff_t>(take));
    result.deferred.erase(result.deferred.begin(),
                          result.deferred.begin() + static_cast<std::ptrdiff_t>(take));
    return result;
}

PagingRoute route_paging(const PagingRequest& request,
                         const core::UeProfile& ue,
                         const std::optional<UeLocation>& location,
                         const Topology& topology)
{
    PagingRoute route;
    if (!location) {
        route.unknown_ue = true;
        return route;
    }

    if (ue.rrc_state == core::RrcState::Connected) {
        // Nothing to page; downlink data reaches a connected UE directly.
        return route;
    }

    if (ue.rrc_state == core::RrcState::Idle || request.origin == PagingRequest::Origin::Cn) {
        for (const auto& cell : topology.cells) {
            for (auto ta : location->tracking_areas) {
                if (cell.tracking_area == ta) {
                    route.targets.push_back({cell.id, 0});
                    break;
                }
            }
        }
        if (route.targets.empty()) {
            route.unknown_ue = true;
        }
        return route;
    }

    // RRC_INACTIVE: the anchor gNB pages its own cells directly and relays
    // the page to any neighbor gNB cells in the RNA.
    for (auto cell_id : location->rna_cells) {
        const auto* cell = topology.find(cell_id);
        if (cell == nullptr) {
            continue;
        }
        SimTime delay = 0;
        if (location->anchor_gnb && cell->gnb != *location->anchor_gnb) {
            delay = topology.inter_gnb_delay;
        }
        route.targets.push_back({cell->id, delay});
    }
    if (route.targets.empty()) {
        route.unknown_ue = true;
    }
    return route;
}

} // namespace accessim::preventive
