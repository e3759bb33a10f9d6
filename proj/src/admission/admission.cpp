#include "accessim/admission/admission.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <tuple>

namespace accessim::admission {

SlicePool* CellAdmissionState::find_pool(const core::Snssai& snssai)
{
    for (auto& p : pools) {
        if (p.snssai == snssai) {
            return &p;
        }
    }
    return nullptr;
}

const SlicePool* CellAdmissionState::find_pool(const core::Snssai& snssai) const
{
    for (const auto& p : pools) {
        if (p.snssai == snssai) {
            return &p;
        }
    }
    return nullptr;
}

std::uint64_t CellAdmissionState::shared_used() const
{
    std::uint64_t total = 0;
    for (const auto& p : pools) {
        total += borrowed(p);
    }
    return total;
}

std::uint64_t CellAdmissionState::free_units(const SlicePool& pool) const
{
    std::uint64_t dedicated_free =
        pool.used < pool.dedicated_capacity ? pool.dedicated_capacity - pool.used : 0;
    std::uint64_t shared_free = shared_capacity - std::min(shared_capacity, shared_used());
    return dedicated_free + shared_free;
}

int effective_arp(const core::QosFlowRequest& flow, const AdmissionPolicy& policy)
{
    int arp = flow.arp.priority_level;
    if (flow.resource_type == core::ResourceType::DelayCriticalGbr) {
        arp = std::max(1, arp - policy.delay_critical_boost);
    }
    return arp;
}

int request_effective_arp(const AdmissionRequest& req, const AdmissionPolicy& policy)
{
    int best = 15;
    for (const auto& f : req.flows) {
        best = std::min(best, effective_arp(f, policy));
    }
    return best;
}

namespace {

std::uint64_t reserve_of(const core::QosFlowRequest& flow)
{
    return flow.resource_type == core::ResourceType::NonGbr ? 0 : flow.demand;
}

void place_flow(CellAdmissionState& state, SlicePool& pool,
                const core::QosFlowRequest& flow, core::UeId ue_id,
                const core::PlmnId& plmn)
{
    AdmittedFlow admitted;
    admitted.flow_id = flow.flow_id;
    admitted.ue_id = ue_id;
    admitted.arp = flow.arp;
    admitted.resource_type = flow.resource_type;
    admitted.snssai = flow.snssai;
    admitted.reserved = reserve_of(flow);
    admitted.admit_seq = state.next_admit_seq++;
    admitted.serving_plmn = plmn;
    pool.used += admitted.reserved;
    if (admitted.reserved > 0) {
        state.plmn_reserved[plmn] += admitted.reserved;
    }
    state.admitted.emplace(admitted.flow_id, admitted);
}

void evict_flow(CellAdmissionState& state, const AdmittedFlow& victim)
{
    auto* pool = state.find_pool(victim.snssai);
    assert(pool != nullptr && pool->used >= victim.reserved);
    pool->used -= victim.reserved;
    if (victim.reserved > 0) {
        auto it = state.plmn_reserved.find(victim.serving_plmn);
        assert(it != state.plmn_reserved.end() && it->second >= victim.reserved);
        it->second -= victim.reserved;
        if (it->second == 0) {
            state.plmn_reserved.erase(it);
        }
    }
    state.admitted.erase(victim.flow_id);
}

/// Minimal-disruption victim set for one flow: the subset of vulnerable,
/// strictly-lower-priority flows in the same pool with the smallest total
/// reserved units still covering the deficit. Ties prefer evicting the
/// numerically highest ARP, then the most recent admission.
std::optional<std::vector<AdmittedFlow>> select_victims(const CellAdmissionState& state,
                                                        const SlicePool& pool,
                                                        const core::QosFlowRequest& flow,
                                                        std::uint64_t needed)
{
    std::vector<AdmittedFlow> candidates;
    for (const auto& [id, f] : state.admitted) {
        if (f.snssai == pool.snssai && f.arp.preemption_vulnerability &&
            f.arp.priority_level > flow.arp.priority_level && f.reserved > 0) {
            candidates.push_back(f);
        }
    }
    if (candidates.empty()) {
        return std::nullopt;
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const AdmittedFlow& a, const AdmittedFlow& b) {
                  if (a.arp.priority_level != b.arp.priority_level) {
                      return a.arp.priority_level > b.arp.priority_level;
                  }
                  return a.admit_seq > b.admit_seq;
              });

    std::uint64_t max_item = 0;
    std::uint64_t total = 0;
    for (const auto& c : candidates) {
        max_item = std::max(max_item, c.reserved);
        total += c.reserved;
    }
    if (total < needed) {
        return std::nullopt;
    }

    // Any achievable sum of needed + max_item or more has a smaller
    // achievable sum still covering needed (drop any member), so the DP can
    // stop below that bound.
    std::uint64_t bound = needed + max_item;
    std::vector<std::uint8_t> reachable(bound, 0);
    reachable[0] = 1;
    for (const auto& c : candidates) {
        for (std::uint64_t s = bound; s-- > 0;) {
            if (reachable[s] && s + c.reserved < bound) {
                reachable[s + c.reserved] = 1;
            }
        }
    }
    std::uint64_t best_sum = 0;
    for (std::uint64_t s = needed; s < bound; ++s) {
        if (reachable[s]) {
            best_sum = s;
            break;
        }
    }
    assert(best_sum >= needed);

    // Suffix subset-sum feasibility, for picking the lexicographically first
    // exact-best_sum subset in tie-break order.
    std::size_t n = candidates.size();
    std::vector<std::vector<std::uint8_t>> suffix(n + 1,
                                                  std::vector<std::uint8_t>(best_sum + 1, 0));
    suffix[n][0] = 1;
    for (std::size_t i = n; i-- > 0;) {
        std::uint64_t r = candidates[i].reserved;
        for (std::uint64_t v = 0; v <= best_sum; ++v) {
            suffix[i][v] = suffix[i + 1][v] || (v >= r && suffix[i + 1][v - r]);
        }
    }

    std::vector<AdmittedFlow> victims;
    std::uint64_t remaining = best_sum;
    for (std::size_t i = 0; i < n && remaining > 0; ++i) {
        std::uint64_t r = candidates[i].reserved;
        if (r <= remaining && suffix[i + 1][remaining - r]) {
            victims.push_back(candidates[i]);
            remaining -= r;
        }
    }
    assert(remaining == 0);
    return victims;
}

bool quota_blocked(const CellAdmissionState& state, const AdmissionPolicy& policy,
                   const core::PlmnId& plmn, std::uint64_t reserve)
{
    auto quota = policy.plmn_quotas.find(plmn);
    if (quota == policy.plmn_quotas.end()) {
        return false;
    }
    std::uint64_t used = 0;
    if (auto it = state.plmn_reserved.find(plmn); it != state.plmn_reserved.end()) {
        used = it->second;
    }
    return used + reserve > quota->second;
}

std::optional<SimTime> reject_wait_time(const AdmissionRequest& req,
                                        const AdmissionPolicy& policy)
{
    bool connection_kind =
        req.kind == RequestKind::InitialSetup || req.kind == RequestKind::Resume;
    if (connection_kind && policy.attach_wait_time) {
        return policy.wait_time;
    }
    return std::nullopt;
}

/// Tries to place every flow of the request into `state`. On success the
/// state holds the new flows minus the victims and the decision is
/// Admit/PreemptAndAdmit; on failure the state is left untouched and the
/// returned decision is Reject (with config_error set for an unknown slice),
/// which the caller may turn into Queue.
AdmissionDecision try_place(const AdmissionRequest& req, CellAdmissionState& state,
                            const AdmissionPolicy& policy)
{
    CellAdmissionState scratch = state;
    AdmissionDecision decision;

    for (const auto& flow : req.flows) {
        auto* pool = scratch.find_pool(flow.snssai);
        if (pool == nullptr) {
            decision.kind = AdmissionDecision::Kind::Reject;
            decision.config_error = true;
            return decision;
        }
        std::uint64_t reserve = reserve_of(flow);
        if (quota_blocked(scratch, policy, req.serving_plmn, reserve)) {
            decision.kind = AdmissionDecision::Kind::Reject;
            return decision;
        }
        std::uint64_t free = scratch.free_units(*pool);
        if (free >= reserve) {
            place_flow(scratch, *pool, flow, req.ue_id, req.serving_plmn);
            continue;
        }
        if (!flow.arp.preemption_capability) {
            decision.kind = AdmissionDecision::Kind::Reject;
            return decision;
        }
        auto victims = select_victims(scratch, *pool, flow, reserve - free);
        if (!victims) {
            decision.kind = AdmissionDecision::Kind::Reject;
            return decision;
        }
        for (const auto& v : *victims) {
            evict_flow(scratch, v);
            decision.victims.push_back(v.flow_id);
            decision.evicted.push_back(v);
            decision.victim_triggers.push_back(flow.arp.priority_level);
        }
        place_flow(scratch, *pool, flow, req.ue_id, req.serving_plmn);
    }

    decision.kind = decision.victims.empty() ? AdmissionDecision::Kind::Admit
                                             : AdmissionDecision::Kind::PreemptAndAdmit;
    state = std::move(scratch);
    return decision;
}

std::size_t queue_rank(const CellAdmissionState& state, const AdmissionPolicy& policy,
                       const QueuedRequest& entry)
{
    auto key = [&](const QueuedRequest& q) {
        return std::make_tuple(request_effective_arp(q.request, policy), q.enqueue_time,
                               q.queue_seq);
    };
    std::size_t ahead = 0;
    for (const auto& q : state.queue) {
        if (key(q) < key(entry)) {
            ++ahead;
        }
    }
    return ahead + 1;
}

} // namespace

AdmissionDecision admit_request(const AdmissionRequest& req, CellAdmissionState& state,
                                const AdmissionPolicy& policy, SimTime now)
{
    AdmissionDecision decision = try_place(req, state, policy);
    if (decision.kind != AdmissionDecision::Kind::Reject || decision.config_error) {
        return decision;
    }

    if (policy.queueing && state.queue.size() < policy.queue_limit) {
        QueuedRequest entry;
        entry.request = req;
        entry.enqueue_time = now;
        entry.queue_seq = state.next_queue_seq++;
        state.queue.push_back(entry);
        decision.kind = AdmissionDecision::Kind::Queue;
        decision.queue_position = queue_rank(state, policy, state.queue.back());
        return decision;
    }

    decision.wait_time = reject_wait_time(req, policy);
    return decision;
}

namespace {

ReleaseResult release_matching(CellAdmissionState& state,
                               const std::vector<core::FlowId>& flow_ids)
{
    ReleaseResult result;
    for (auto id : flow_ids) {
        auto it = state.admitted.find(id);
        if (it == state.admitted.end()) {
            continue;
        }
        AdmittedFlow flow = it->second;
        evict_flow(state, flow);
        result.found = true;
        result.units_freed += flow.reserved;
        result.released.push_back(flow);
    }
    return result;
}

} // namespace

ReleaseResult release_flow(core::FlowId flow_id, CellAdmissionState& state)
{
    return release_matching(state, {flow_id});
}

ReleaseResult release_ue(core::UeId ue_id, CellAdmissionState& state)
{
    std::vector<core::FlowId> ids;
    for (const auto& [id, flow] : state.admitted) {
        if (flow.ue_id == ue_id) {
            ids.push_back(id);
        }
    }
    return release_matching(state, ids);
}

std::vector<std::pair<QueuedRequest, AdmissionDecision>>
process_queue(CellAdmissionState& state, const AdmissionPolicy& policy, SimTime now)
{
    std::vector<std::pair<QueuedRequest, AdmissionDecision>> results;

    std::vector<QueuedRequest> ordered = state.queue;
    std::sort(ordered.begin(), ordered.end(),
              [&](const QueuedRequest& a, const QueuedRequest& b) {
                  return std::make_tuple(request_effective_arp(a.request, policy),
                                         a.enqueue_time, a.queue_seq) <
                         std::make_tuple(request_effective_arp(b.request, policy),
                                         b.enqueue_time, b.queue_seq);
              });

    auto remove_from_queue = [&](std::uint64_t seq) {
        std::erase_if(state.queue, [&](const QueuedRequest& q) { return q.queue_seq == seq; });
    };

    for (const auto& entry : ordered) {
        if (now - entry.enqueue_time > policy.queue_timeout) {
            AdmissionDecision decision;
            decision.kind = AdmissionDecision::Kind::Reject;
            decision.wait_time = reject_wait_time(entry.request, policy);
            remove_from_queue(entry.queue_seq);
            results.emplace_back(entry, decision);
            continue;
        }
        AdmissionDecision decision = try_place(entry.request, state, policy);
        if (decision.kind == AdmissionDecision::Kind::Reject && !decision.config_error) {
            continue; // stays queued
        }
        remove_from_queue(entry.queue_seq);
        results.emplace_back(entry, decision);
    }
    return results;
}

std::vector<std::string> audit_conservation(const CellAdmissionState& state)
{
    std::vector<std::string> violations;

    for (const auto& pool : state.pools) {
        std::uint64_t sum = 0;
        for (const auto& [id, flow] : state.admitted) {
            if (flow.snssai == pool.snssai) {
                sum += flow.reserved;
            }
        }
        if (sum != pool.used) {
            std::ostringstream msg;
            msg << "pool " << core::to_string(pool.snssai) << ": used " << pool.used
                << " but admitted reservations sum to " << sum;
            violations.push_back(msg.str());
        }
    }

    if (state.shared_used() > state.shared_capacity) {
        std::ostringstream msg;
        msg << "shared pool oversubscribed: " << state.shared_used() << " of "
            << state.shared_capacity;
        violations.push_back(msg.str());
    }

    std::map<core::PlmnId, std::uint64_t> per_plmn;
    for (const auto& [id, flow] : state.admitted) {
        if (flow.reserved > 0) {
            per_plmn[flow.serving_plmn] += flow.reserved;
        }
    }
    if (per_plmn != state.plmn_reserved) {
        violations.push_back("plmn reservation ledger out of sync with admitted flows");
    }

    for (const auto& [id, flow] : state.admitted) {
        if (state.find_pool(flow.snssai) == nullptr) {
            violations.push_back("admitted flow " + std::to_string(id) +
                                 " references a missing pool");
        }
    }
    return violations;
}

} // namespace accessim::admission
