#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "accessim/core/types.hpp"

namespace accessim::preventive {

/// One pending page for a UE. CN-origin pages target RRC_IDLE UEs through
/// their tracking areas; RAN-origin pages target RRC_INACTIVE UEs through
/// their RAN notification area.
struct PagingRequest {
    core::UeId target_ue = 0;
    int priority = 1; // 1 = highest
    enum class Origin { Cn, Ran } origin = Origin::Cn;
    SimTime enqueue_time = 0;

    bool operator==(const PagingRequest&) const = default;
};

struct PagingFilterResult {
    std::vector<PagingRequest> to_page;
    std::vector<PagingRequest> deferred;
    std::vector<PagingRequest> dropped; // deferred past the discard timeout
};

/// Picks the requests paged this cycle: requests older than `discard_after`
/// are dropped, the rest are ordered by (priority, enqueue time, ue id) and
/// the first `budget` are paged; the remainder carries over.
PagingFilterResult paging_control_filter(std::vector<PagingRequest> queue,
                                         std::size_t budget,
                                         SimTime now,
                                         SimTime discard_after);

/// Static cell/gNB layout the paging function routes against.
struct Topology {
    struct Cell {
        core::CellId id = 0;
        core::GnbId gnb = 0;
        std::uint32_t tracking_area = 0;
    };
    std::vector<Cell> cells;
    SimTime inter_gnb_delay = 0;

    const Cell* find(core::CellId id) const
    {
        for (const auto& c : cells) {
            if (c.id == id) {
                return &c;
            }
        }
        return nullptr;
    }
};

/// Where the network can look for a UE.
struct UeLocation {
    std::vector<std::uint32_t> tracking_areas; // RRC_IDLE scope
    std::vector<core::CellId> rna_cells;       // RRC_INACTIVE scope
    std::optional<core::GnbId> anchor_gnb;     // gNB holding the UE context
};

struct PagingTarget {
    core::CellId cell = 0;
    SimTime delay = 0; // nonzero when relayed to a neighbor gNB

    bool operator==(const PagingTarget&) const = default;
};

struct PagingRoute {
    std::vector<PagingTarget> targets;
    bool unknown_ue = false;
};

/// Resolves the cells a page goes out in: all tracking-area cells for an idle
/// UE, the RNA cells for an inactive UE with neighbor-gNB cells delayed by
/// the inter-gNB latency. An unrouteable UE yields an empty, flagged route.
PagingRoute route_paging(const PagingRequest& request,
                         const core::UeProfile& ue,
                         const std::optional<UeLocation>& location,
                         const Topology& topology);

} // namespace accessim::preventive
