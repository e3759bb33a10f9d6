#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "accessim/core/time.hpp"
#include "accessim/core/types.hpp"

namespace accessim::admission {

/// Per-slice resource pool. Accounting is aggregate: `used` counts every
/// unit reserved by this slice's flows, wherever the unit came from. The
/// slice borrows from the cell's shared pool exactly when used exceeds
/// dedicated_capacity, so dedicated units are always consumed first and a
/// release shrinks the borrow before touching dedicated headroom.
struct SlicePool {
    core::Snssai snssai;
    std::uint64_t dedicated_capacity = 0;
    std::uint64_t used = 0;
};

struct AdmittedFlow {
    core::FlowId flow_id = 0;
    core::UeId ue_id = 0;
    core::ArpProfile arp;
    core::ResourceType resource_type = core::ResourceType::NonGbr;
    core::Snssai snssai;
    std::uint64_t reserved = 0; // 0 for non-GBR
    std::uint64_t admit_seq = 0;
    core::PlmnId serving_plmn;
};

enum class RequestKind { InitialSetup, Resume, HandoverIn, QosFlowSetup };

struct AdmissionRequest {
    RequestKind kind = RequestKind::InitialSetup;
    std::optional<core::EstablishmentCause> cause; // InitialSetup/Resume only
    std::vector<core::QosFlowRequest> flows;
    core::UeId ue_id = 0;
    core::PlmnId serving_plmn;
};

struct AdmissionPolicy {
    bool queueing = false;
    std::size_t queue_limit = 16;
    SimTime queue_timeout = seconds(2);
    bool attach_wait_time = true;
    SimTime wait_time = seconds(4);
    // Delay-critical GBR flows rank this many ARP levels better in the
    // queue; the eviction rule keeps using the signalled ARP.
    int delay_critical_boost = 1;
    // Cap on reserved units per serving PLMN. Absent PLMN = no cap.
    std::map<core::PlmnId, std::uint64_t> plmn_quotas;
};

struct AdmissionDecision {
    enum class Kind { Admit, Queue, Reject, PreemptAndAdmit };
    Kind kind = Kind::Reject;
    std::size_t queue_position = 0;              // Queue: 1-based dequeue rank
    std::optional<SimTime> wait_time;            // Reject, connection kinds only
    std::vector<core::FlowId> victims;           // PreemptAndAdmit
    std::vector<AdmittedFlow> evicted;           // victim records, same order
    std::vector<int> victim_triggers;            // ARP each victim yielded to
    bool config_error = false;                   // unknown slice
};

struct QueuedRequest {
    AdmissionRequest request;
    SimTime enqueue_time = 0;
    std::uint64_t queue_seq = 0;
};

enum class ReleaseReason { Normal, Preempted, InactivityToInactive };

struct ReleaseResult {
    bool found = false;
    std::uint64_t units_freed = 0;
    std::vector<AdmittedFlow> released;
};

struct CellAdmissionState {
    std::vector<SlicePool> pools;
    std::uint64_t shared_capacity = 0;
    std::map<core::FlowId, AdmittedFlow> admitted;
    std::vector<QueuedRequest> queue;
    std::uint64_t next_admit_seq = 1;
    std::uint64_t next_queue_seq = 1;
    std::map<core::PlmnId, std::uint64_t> plmn_reserved;

    SlicePool* find_pool(const core::Snssai& snssai);
    const SlicePool* find_pool(const core::Snssai& snssai) const;

    std::uint64_t borrowed(const SlicePool& pool) const
    {
        return pool.used > pool.dedicated_capacity ? pool.used - pool.dedicated_capacity : 0;
    }

    std::uint64_t shared_used() const;

    /// Units a new flow of this slice could reserve right now.
    std::uint64_t free_units(const SlicePool& pool) const;
};

/// ARP level used for queue ordering; delay-critical GBR flows get the
/// policy boost, everything else keeps the signalled level.
int effective_arp(const core::QosFlowRequest& flow, const AdmissionPolicy& policy);
int request_effective_arp(const AdmissionRequest& req, const AdmissionPolicy& policy);

/// Admission gate. Per flow: admit when the slice pool has headroom, else
/// pre-empt a minimal set of vulnerable strictly-lower-priority flows of the
/// same slice when the incoming flow has the capability, else queue when
/// enabled and not full, else reject (wait_time attaches to InitialSetup and
/// Resume rejections when the policy says so, never to HandoverIn). Requests
/// are atomic: either every flow is placed or none is. Admit and
/// PreemptAndAdmit mutate the state; Queue appends to the queue; Reject
/// leaves it untouched.
AdmissionDecision admit_request(const AdmissionRequest& req,
                                CellAdmissionState& state,
                                const AdmissionPolicy& policy,
                                SimTime now);

ReleaseResult release_flow(core::FlowId flow_id, CellAdmissionState& state);
ReleaseResult release_ue(core::UeId ue_id, CellAdmissionState& state);

/// Re-evaluates the queue in (effective ARP, enqueue time, arrival) order.
/// Requests queued beyond the timeout leave as Reject with wait_time;
/// requests that now fit (possibly by pre-emption) leave with their
/// decision; the rest stay queued. Only terminal outcomes are returned.
std::vector<std::pair<QueuedRequest, AdmissionDecision>>
process_queue(CellAdmissionState& state, const AdmissionPolicy& policy, SimTime now);

/// Accounting cross-checks; returns one message per violation.
std::vector<std::string> audit_conservation(const CellAdmissionState& state);

} // namespace accessim::admission
