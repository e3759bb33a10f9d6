#include "accessim/sim/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <variant>
#include <vector>

#include "accessim/admission/admission.hpp"
#include "accessim/core/access_mapping.hpp"
#include "accessim/preventive/cell_access.hpp"
#include "accessim/preventive/paging.hpp"
#include "accessim/preventive/uac.hpp"
#include "accessim/ra/rach.hpp"
#include "accessim/sim/event_queue.hpp"
#include "accessim/sim/traffic.hpp"

namespace accessim::sim {
namespace {

struct EvAttemptStart {
    core::UeId ue = 0;
    std::uint64_t k = 0; // arrival index, keys the cause-mix draw
};
struct EvUacRecheck {
    std::uint64_t attempt = 0;
};
struct EvRachOccasion {
    core::CellId cell = 0;
};
struct EvRarTimeout {
    std::uint64_t attempt = 0;
    int ra_attempt = 0; // stale once the attempt has moved on
};
struct EvUplink {
    core::CellId cell = 0;
    SimTime occ_t = 0;
    int preamble = 0;
};
enum class DlKind { Connected, Rejected, ContentionLost };
struct EvDlOutcome {
    std::uint64_t attempt = 0;
    DlKind kind = DlKind::Connected;
};
struct EvQueueSweep {
    core::CellId cell = 0;
};
struct EvSessionRelease {
    core::UeId ue = 0;
    std::uint64_t epoch = 0; // stale once the UE reconnected
};
struct EvFlowArrival {
    core::UeId ue = 0;
    std::uint64_t k = 0;
};
struct EvFlowRelease {
    core::UeId ue = 0;
    std::vector<core::FlowId> flows;
};
struct EvPagingArrival {
    std::size_t pop = 0;
    std::uint64_t k = 0;
};
struct EvPagingEnqueue {
    core::CellId cell = 0;
    preventive::PagingRequest req;
};
struct EvPagingCycle {
    core::CellId cell = 0;
};
struct EvPageReceived {
    core::UeId ue = 0;
    int priority = 0;
};

using Payload =
    std::variant<EvAttemptStart, EvUacRecheck, EvRachOccasion, EvRarTimeout, EvUplink,
                 EvDlOutcome, EvQueueSweep, EvSessionRelease, EvFlowArrival,
                 EvFlowRelease, EvPagingArrival, EvPagingEnqueue, EvPagingCycle,
                 EvPageReceived>;

enum class Phase { RaWaiting, RaAwait, UacBarred, Queued };

struct AttemptCtx {
    std::uint64_t id = 0;
    std::uint64_t ue_ordinal = 0; // n-th attempt of this UE, keys its RNG draws
    core::UeId ue = 0;
    core::CellId cell = 0;
    std::size_t pop = 0;
    core::EstablishmentCause cause = core::EstablishmentCause::MoData;
    admission::RequestKind kind = admission::RequestKind::InitialSetup;
    core::AccessCategory ac;
    core::AiSet ais;
    SimTime start = 0;
    int uac_evals = 0;
    Phase phase = Phase::RaWaiting;
    ra::RaAttemptState ra;
    int messages = 0;
    std::vector<core::FlowId> pending_flows; // admitted network-side, told at DL
    std::optional<SimTime> pending_wait;
};

struct UeCtx {
    core::UeProfile profile;
    std::size_t pop = 0;
    std::uint64_t epoch = 0;          // bumps on every connect/disconnect
    std::uint64_t active_attempt = 0; // 0 = none
    std::uint64_t attempt_seq = 0;    // local count, not the global attempt id
    std::uint64_t flow_seq = 0;
    std::vector<core::FlowId> flows; // currently admitted
    SimTime ra_ready = 0;
};

struct QueueOrigin {
    core::UeId ue = 0;
    std::uint64_t attempt = 0; // 0 = connected-mode flow request
};

struct CellCtx {
    const cli::CellConfig* cfg = nullptr;
    admission::CellAdmissionState adm;
    std::vector<preventive::PagingRequest> paging_queue;
    std::set<core::UeId> ra_waiting;
    std::set<SimTime> pending_occasions;
    SimTime last_occasion_fired = -1;
    // (occasion, preamble) -> detected (ue, attempt), in UE order
    std::map<std::pair<SimTime, int>, std::vector<std::pair<core::UeId, std::uint64_t>>>
        groups;
    std::map<std::uint64_t, QueueOrigin> queue_origins; // by queue_seq
};

struct PopRt {
    const cli::PopulationConfig* cfg = nullptr;
    core::UeId first_ue = 0;
    preventive::UeLocation location;
    std::string slice_tag;       // session flows' slice
    std::string churn_slice_tag; // extra-flow requests' slice
    int ai_tag = 0;              // best configured identity, 0 for regular
    std::vector<double> cause_weights;
};

std::string fmt_db(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

const char* decision_name(admission::AdmissionDecision::Kind k)
{
    using Kind = admission::AdmissionDecision::Kind;
    switch (k) {
    case Kind::Admit:
        return "admit";
    case Kind::Queue:
        return "queue";
    case Kind::Reject:
        return "reject";
    case Kind::PreemptAndAdmit:
        return "preempt_admit";
    }
    return "?";
}

const char* kind_name(admission::RequestKind k)
{
    using K = admission::RequestKind;
    switch (k) {
    case K::InitialSetup:
        return "initial";
    case K::Resume:
        return "resume";
    case K::HandoverIn:
        return "handover";
    case K::QosFlowSetup:
        return "qos_flow";
    }
    return "?";
}

class Engine {
public:
    Engine(const cli::ScenarioConfig& config, std::uint64_t seed, const RunOptions& opts)
        : cfg_(config), opts_(opts), rng_(seed), log_(opts.keep_event_lines)
    {
        rng_.set_logging(opts.log_draws);
        horizon_ = cfg_.horizon();
        build_world();
    }

    RunReport run()
    {
        seed_traffic();
        while (!queue_.empty() && queue_.top().t <= horizon_) {
            auto entry = queue_.pop();
            assert(entry.t >= now_);
            now_ = entry.t;
            std::visit([&](auto&& ev) { handle(ev); }, entry.payload);
            ++events_processed_;
        }
        return make_report();
    }

private:
    // ---- world construction ----------------------------------------------

    void build_world()
    {
        auto errors = cli::validate_scenario(cfg_);
        if (!errors.empty()) {
            std::string joined = "invalid scenario:";
            for (const auto& e : errors) {
                joined += "\n  " + e.path + ": " + e.message;
            }
            throw std::runtime_error(joined);
        }

        topology_.inter_gnb_delay = cfg_.inter_gnb_delay;
        for (const auto& cell : cfg_.cells) {
            topology_.cells.push_back({cell.id, cell.gnb, cell.tracking_area});
            CellCtx ctx;
            ctx.cfg = &cell;
            ctx.adm.pools = cell.pools;
            for (auto& p : ctx.adm.pools) {
                p.used = 0;
            }
            ctx.adm.shared_capacity = cell.shared_capacity;
            cells_.emplace(cell.id, std::move(ctx));
        }

        core::UeId next_ue = 1;
        ues_.resize(1); // index 0 unused
        for (std::size_t pi = 0; pi < cfg_.populations.size(); ++pi) {
            const auto& pop = cfg_.populations[pi];
            const auto* cell = cfg_.find_cell(pop.cell);
            PopRt rt;
            rt.cfg = &pop;
            rt.first_ue = next_ue;
            rt.location.tracking_areas = pop.tracking_areas.empty()
                                             ? std::vector<std::uint32_t>{cell->tracking_area}
                                             : pop.tracking_areas;
            rt.location.rna_cells = pop.rna_cells.empty()
                                        ? std::vector<core::CellId>{cell->id}
                                        : pop.rna_cells;
            rt.location.anchor_gnb = cell->gnb;
            rt.slice_tag =
                pop.flows.empty() ? "" : core::to_string(pop.flows.front().snssai);
            rt.churn_slice_tag =
                pop.qos_flows.empty() ? "" : core::to_string(pop.qos_flows.front().snssai);
            for (const auto& mix : pop.cause_mix) {
                rt.cause_weights.push_back(mix.weight);
            }

            for (std::uint64_t i = 0; i < pop.count; ++i) {
                UeCtx ue;
                ue.pop = pi;
                ue.profile.ue_id = next_ue;
                for (int ai : pop.ue.access_identities) {
                    ue.profile.access_identities.insert(ai);
                }
                ue.profile.home_plmn = pop.ue.home_plmn;
                ue.profile.in_home_country = pop.ue.in_home_country;
                ue.profile.in_home_plmn = pop.ue.in_home_plmn;
                ue.profile.npn_authorized.insert(pop.ue.npn_authorized.begin(),
                                                 pop.ue.npn_authorized.end());
                for (const auto& f : pop.flows) {
                    ue.profile.subscribed_slices.push_back(f.snssai);
                }
                ue.profile.rrc_state = pop.ue.initial_state;
                ue.profile.serving_cell = pop.cell;
                ues_.push_back(std::move(ue));
                ++next_ue;
            }

            // The metrics tag is the UE's best effective identity.
            core::UeProfile probe = ues_[rt.first_ue].profile;
            auto effective = core::effective_access_identities(probe);
            rt.ai_tag = 0;
            for (int v : effective.values()) {
                if (v != 0) {
                    rt.ai_tag = v;
                    break;
                }
            }
            pops_.push_back(std::move(rt));
        }
    }

    void seed_traffic()
    {
        for (std::size_t pi = 0; pi < pops_.size(); ++pi) {
            const auto& pop = *pops_[pi].cfg;
            core::UeId base = pops_[pi].first_ue;
            for (std::uint64_t i = 0; i < pop.count; ++i) {
                core::UeId ue = base + i;
                if (pop.traffic.kind == cli::TrafficConfig::Kind::Poisson) {
                    auto arrivals = poisson_arrivals(rng_, purpose::kTraffic, ue,
                                                     pop.traffic.rate_per_ue_hz, horizon_);
                    for (std::uint64_t k = 0; k < arrivals.size(); ++k) {
                        queue_.push(arrivals[k], EvAttemptStart{ue, k});
                    }
                } else if (pop.traffic.kind == cli::TrafficConfig::Kind::Burst) {
                    SimTime at =
                        burst_arrival(rng_, ue, pop.traffic.at, pop.traffic.jitter);
                    if (at <= horizon_) {
                        queue_.push(at, EvAttemptStart{ue, 0});
                    }
                }
                if (pop.qos_flow_rate_hz > 0.0) {
                    auto arrivals =
                        poisson_arrivals(rng_, purpose::kTraffic, ue, pop.qos_flow_rate_hz,
                                         horizon_, traffic_draw::kFlowInterArrival);
                    for (std::uint64_t k = 0; k < arrivals.size(); ++k) {
                        queue_.push(arrivals[k], EvFlowArrival{ue, k});
                    }
                }
            }
            if (pop.paging.rate_hz > 0.0) {
                paging_pregen_.resize(pops_.size());
                paging_pregen_[pi] =
                    paging_arrivals(rng_, pi, pop.paging.rate_hz, pop.paging.priority_mix,
                                    pop.count, horizon_);
                for (std::uint64_t k = 0; k < paging_pregen_[pi].size(); ++k) {
                    queue_.push(paging_pregen_[pi][k].t, EvPagingArrival{pi, k});
                }
            }
        }
        paging_pregen_.resize(pops_.size());

        for (const auto& cell : cfg_.cells) {
            for (SimTime t = cell.paging.cycle; t <= horizon_; t += cell.paging.cycle) {
                queue_.push(t, EvPagingCycle{cell.id});
            }
        }
    }

    // ---- logging and metrics ----------------------------------------------

    void log_line(const std::string& text, const std::string& slice_tag = "")
    {
        std::ostringstream line;
        line << "t=" << now_ << ' ' << text;
        log_.append(line.str(), slice_tag);
    }

    MetricKey attempt_key(const std::string& metric, const AttemptCtx& a) const
    {
        return MetricKey{metric, pops_[a.pop].ai_tag, a.ac.value(), pops_[a.pop].slice_tag,
                         core::to_string(a.cause)};
    }

    MetricKey ue_key(const std::string& metric, const UeCtx& ue) const
    {
        return MetricKey{metric, pops_[ue.pop].ai_tag, -1, pops_[ue.pop].slice_tag, ""};
    }

    // ---- attempt lifecycle --------------------------------------------------

    UeCtx& ue_at(core::UeId id) { return ues_[id]; }

    CellCtx& cell_of(const AttemptCtx& a) { return cells_.at(a.cell); }

    void start_attempt(UeCtx& ue, core::EstablishmentCause cause,
                       admission::RequestKind kind)
    {
        const auto& pop = *pops_[ue.pop].cfg;
        core::AttemptTraits traits;
        traits.delay_tolerant = pop.delay_tolerant;
        traits.exception_data = pop.exception_data;
        traits.nas_signalling = pop.nas_signalling;
        if (pop.operator_ac) {
            traits.operator_ac = core::AccessCategory(*pop.operator_ac);
        }
        auto info = core::derive_access_info(cause, ue.profile, traits);

        AttemptCtx a;
        a.id = next_attempt_id_++;
        // Per-attempt draws are keyed by (ue, ue_ordinal) so one UE's random
        // stream never moves when other populations gain or lose attempts.
        a.ue_ordinal = ++ue.attempt_seq;
        a.ue = ue.profile.ue_id;
        a.cell = *ue.profile.serving_cell;
        a.pop = ue.pop;
        a.cause = cause;
        a.kind = kind;
        a.ac = info.ac;
        a.ais = info.ais;
        a.start = now_;

        metrics_.add(attempt_key(metric::kAttempts, a));
        {
            std::ostringstream s;
            s << "ev=attempt_start ue=" << a.ue << " cell=" << a.cell
              << " ac=" << a.ac.value() << " cause=" << core::to_string(a.cause)
              << " kind=" << kind_name(a.kind);
            log_line(s.str(), pops_[a.pop].slice_tag);
        }

        const auto& cell_cfg = *cells_.at(a.cell).cfg;
        auto sel = preventive::cell_selection_check(
            ue.profile, cell_cfg.access, cause == core::EstablishmentCause::Emergency);
        if (!sel.selectable) {
            metrics_.add(attempt_key(metric::kBarredCell, a));
            std::ostringstream s;
            s << "ev=cell_barred ue=" << a.ue << " retry_us=" << sel.retry_after;
            log_line(s.str(), pops_[a.pop].slice_tag);
            return; // terminal; the traffic model decides any re-attempt
        }

        ue.active_attempt = a.id;
        auto [it, ok] = attempts_.emplace(a.id, std::move(a));
        uac_eval(it->second);
    }

    void finish_attempt(AttemptCtx& a)
    {
        metrics_.add(attempt_key(metric::kMessages, a),
                     static_cast<std::uint64_t>(a.messages));
        UeCtx& ue = ue_at(a.ue);
        if (ue.active_attempt == a.id) {
            ue.active_attempt = 0;
        }
        attempts_.erase(a.id);
    }

    void uac_eval(AttemptCtx& a)
    {
        UeCtx& ue = ue_at(a.ue);
        const auto& uac = cells_.at(a.cell).cfg->uac;
        int eval = a.uac_evals++;

        double draw = rng_.uniform(purpose::kUac, a.ue, a.ue_ordinal,
                                   static_cast<std::uint64_t>(eval));
        std::optional<double> jitter;
        if (uac.jittered_barring_time) {
            jitter = rng_.uniform(purpose::kJitter, a.ue, a.ue_ordinal,
                                  static_cast<std::uint64_t>(eval));
        }
        bool wait_barred = ue.profile.wait_time_until &&
                           now_ < *ue.profile.wait_time_until && a.ac.value() != 0 &&
                           a.ac.value() != 2;
        auto res = preventive::uac_check(a.ac, a.ais, uac, draw, now_, ue.profile, jitter);

        if (eval == 0) {
            metrics_.add(attempt_key(
                res.allowed ? metric::kUacFirstAllowed : metric::kUacFirstBarred, a));
        }

        std::ostringstream s;
        s << "ev=uac ue=" << a.ue << " ac=" << a.ac.value() << " eval=" << eval
          << " outcome="
          << (res.allowed ? "allowed" : (wait_barred ? "wait_barred" : "barred"));
        if (!res.allowed) {
            s << " until=" << res.barred_until;
        }
        log_line(s.str(), pops_[a.pop].slice_tag);

        if (res.allowed) {
            begin_ra(a);
            return;
        }
        metrics_.add(attempt_key(wait_barred ? metric::kBarredWait : metric::kBarredUac, a));
        a.phase = Phase::UacBarred;
        queue_.push(res.barred_until, EvUacRecheck{a.id});
    }

    void begin_ra(AttemptCtx& a)
    {
        CellCtx& cell = cell_of(a);
        const auto& rach = cell.cfg->rach;
        a.phase = Phase::RaWaiting;
        a.ra = ra::RaAttemptState{};
        a.ra.attempt_no = 1;
        a.ra.current_power_dbm = rach.initial_power_dbm;
        a.ra.priority_class = rach.is_priority_class(a.ais);
        UeCtx& ue = ue_at(a.ue);
        ue.ra_ready = now_;
        cell.ra_waiting.insert(a.ue);
        ensure_occasion(cell, now_);
    }

    void ensure_occasion(CellCtx& cell, SimTime ready)
    {
        SimTime period = cell.cfg->rach.occasion_period;
        SimTime t0 = std::max(ready, now_);
        SimTime occ = ((t0 + period - 1) / period) * period;
        if (occ <= cell.last_occasion_fired) {
            occ = cell.last_occasion_fired + period;
        }
        if (occ > horizon_) {
            return;
        }
        if (cell.pending_occasions.insert(occ).second) {
            queue_.push(occ, EvRachOccasion{cell.cfg->id});
        }
    }

    void retry_or_fail(AttemptCtx& a)
    {
        CellCtx& cell = cell_of(a);
        const auto& rach = cell.cfg->rach;
        UeCtx& ue = ue_at(a.ue);

        if (rach.beam_change_probability > 0.0) {
            double b = rng_.uniform(purpose::kBeam, a.ue, a.ue_ordinal,
                                    static_cast<std::uint64_t>(a.ra.attempt_no));
            a.ra.same_beam_as_previous = b >= rach.beam_change_probability;
        }
        double draw = rng_.uniform(purpose::kBackoff, a.ue, a.ue_ordinal,
                                   static_cast<std::uint64_t>(a.ra.attempt_no));
        auto params = ra::next_attempt_params(a.ra, rach, draw);
        if (!params) {
            metrics_.add(attempt_key(metric::kRaFailures, a));
            std::ostringstream s;
            s << "ev=ra_fail ue=" << a.ue << " attempts=" << a.ra.attempt_no;
            log_line(s.str(), pops_[a.pop].slice_tag);
            finish_attempt(a);
            return;
        }
        a.ra.attempt_no += 1;
        a.ra.current_power_dbm = params->power_dbm;
        a.phase = Phase::RaWaiting;
        ue.ra_ready = now_ + params->backoff;
        cell.ra_waiting.insert(a.ue);
        ensure_occasion(cell, ue.ra_ready);

        std::ostringstream s;
        s << "ev=ra_retry ue=" << a.ue << " attempt=" << a.ra.attempt_no
          << " backoff_us=" << params->backoff << " power=" << fmt_db(params->power_dbm);
        log_line(s.str(), pops_[a.pop].slice_tag);
    }

    // ---- admission plumbing -------------------------------------------------

    admission::AdmissionRequest build_session_request(UeCtx& ue, AttemptCtx& a)
    {
        const auto& pop = *pops_[a.pop].cfg;
        admission::AdmissionRequest req;
        req.kind = a.kind;
        req.cause = a.cause;
        req.ue_id = a.ue;
        req.serving_plmn = serving_plmn(ue, cell_of(a));
        for (const auto& f : pop.flows) {
            core::QosFlowRequest q;
            q.flow_id = a.ue * 100000 + ue.flow_seq++;
            q.arp = f.arp;
            q.resource_type = f.resource_type;
            q.snssai = f.snssai;
            q.demand = f.demand;
            req.flows.push_back(q);
        }
        return req;
    }

    core::PlmnId serving_plmn(const UeCtx& ue, const CellCtx& cell) const
    {
        for (const auto& p : cell.cfg->access.plmn_ids) {
            if (p == ue.profile.home_plmn) {
                return p;
            }
        }
        return cell.cfg->access.plmn_ids.empty() ? ue.profile.home_plmn
                                                 : cell.cfg->access.plmn_ids.front();
    }

    SimTime dl_hop(const CellCtx& cell) const
    {
        const auto& rach = cell.cfg->rach;
        return rach.msg_latency(static_cast<std::size_t>(rach.messages_per_access()) - 1);
    }

    void apply_evictions(const admission::AdmissionDecision& d, SimTime)
    {
        for (std::size_t i = 0; i < d.evicted.size(); ++i) {
            const auto& victim = d.evicted[i];
            int trigger_arp =
                i < d.victim_triggers.size() ? d.victim_triggers[i] : -1;
            evictions_.push_back({now_, victim.ue_id, victim.flow_id,
                                  victim.arp.priority_level,
                                  victim.arp.preemption_vulnerability, trigger_arp});
            UeCtx& vue = ue_at(victim.ue_id);
            metrics_.add(ue_key(metric::kPreemptions, vue));
            std::erase(vue.flows, victim.flow_id);
            {
                std::ostringstream s;
                s << "ev=preempted ue=" << victim.ue_id << " flow=" << victim.flow_id
                  << " arp=" << victim.arp.priority_level << " by_arp=" << trigger_arp;
                log_line(s.str(), core::to_string(victim.snssai));
            }
            if (vue.flows.empty() && vue.profile.rrc_state == core::RrcState::Connected) {
                vue.profile.rrc_state = core::RrcState::Idle;
                ++vue.epoch;
                std::ostringstream s;
                s << "ev=ue_dropped ue=" << victim.ue_id;
                log_line(s.str(), pops_[vue.pop].slice_tag);
            }
        }
    }

    void note_queued(CellCtx& cell, const QueueOrigin& origin)
    {
        // admit_request appended the entry; its seq identifies it from now on.
        assert(!cell.adm.queue.empty());
        std::uint64_t seq = cell.adm.queue.back().queue_seq;
        cell.queue_origins.emplace(seq, origin);
        queue_.push(now_ + cell.cfg->admission.queue_timeout + 1,
                    EvQueueSweep{cell.cfg->id});
    }

    void run_process_queue(CellCtx& cell)
    {
        // Loop because an admitted or timed-out entry can free capacity for
        // one evaluated earlier in the same pass.
        while (true) {
            auto results =
                admission::process_queue(cell.adm, cell.cfg->admission, now_);
            if (results.empty()) {
                break;
            }
            for (auto& [entry, decision] : results) {
                QueueOrigin origin;
                if (auto it = cell.queue_origins.find(entry.queue_seq);
                    it != cell.queue_origins.end()) {
                    origin = it->second;
                    cell.queue_origins.erase(it);
                }
                if (!decision.victims.empty()) {
                    apply_evictions(decision, now_);
                }
                if (origin.attempt != 0) {
                    resolve_queued_attempt(cell, origin.attempt, entry, decision);
                } else {
                    resolve_queued_churn(cell, origin.ue, entry, decision);
                }
            }
        }
    }

    void resolve_queued_attempt(CellCtx& cell, std::uint64_t attempt_id,
                                const admission::QueuedRequest& entry,
                                const admission::AdmissionDecision& decision)
    {
        auto it = attempts_.find(attempt_id);
        if (it == attempts_.end()) {
            // Attempt gone; return any units the re-evaluation just granted.
            if (decision.kind == admission::AdmissionDecision::Kind::Admit ||
                decision.kind == admission::AdmissionDecision::Kind::PreemptAndAdmit) {
                for (const auto& f : entry.request.flows) {
                    admission::release_flow(f.flow_id, cell.adm);
                }
            }
            return;
        }
        AttemptCtx& a = it->second;
        std::ostringstream s;
        s << "ev=queue_resolved ue=" << a.ue
          << " decision=" << decision_name(decision.kind);
        log_line(s.str(), pops_[a.pop].slice_tag);

        if (decision.kind == admission::AdmissionDecision::Kind::Admit ||
            decision.kind == admission::AdmissionDecision::Kind::PreemptAndAdmit) {
            a.pending_flows.clear();
            for (const auto& f : entry.request.flows) {
                a.pending_flows.push_back(f.flow_id);
            }
            queue_.push(now_ + dl_hop(cell), EvDlOutcome{a.id, DlKind::Connected});
        } else {
            a.pending_wait = decision.wait_time;
            queue_.push(now_ + dl_hop(cell), EvDlOutcome{a.id, DlKind::Rejected});
        }
        a.phase = Phase::RaAwait; // awaiting the DL message
    }

    void resolve_queued_churn(CellCtx& cell, core::UeId ue_id,
                              const admission::QueuedRequest& entry,
                              const admission::AdmissionDecision& decision)
    {
        UeCtx& ue = ue_at(ue_id);
        const auto& pop = *pops_[ue.pop].cfg;
        std::ostringstream s;
        s << "ev=queue_churn ue=" << ue_id << " decision=" << decision_name(decision.kind);
        log_line(s.str(), pops_[ue.pop].churn_slice_tag);

        if (decision.kind != admission::AdmissionDecision::Kind::Admit &&
            decision.kind != admission::AdmissionDecision::Kind::PreemptAndAdmit) {
            metrics_.add(MetricKey{metric::kRejects, pops_[ue.pop].ai_tag, -1,
                                   pops_[ue.pop].churn_slice_tag, ""});
            return;
        }
        if (ue.profile.rrc_state != core::RrcState::Connected) {
            // The connection ended while the request sat in the queue.
            for (const auto& f : entry.request.flows) {
                admission::release_flow(f.flow_id, cell.adm);
            }
            return;
        }
        std::vector<core::FlowId> ids;
        for (const auto& f : entry.request.flows) {
            ids.push_back(f.flow_id);
        }
        queue_.push(now_ + from_seconds(pop.qos_flow_hold_s),
                    EvFlowRelease{ue_id, std::move(ids)});
    }

    // ---- handlers -----------------------------------------------------------

    /// A pending attempt parked by barring may yield to an exempt trigger
    /// (emergency, page response); an attempt that already transmitted may
    /// not. Returns true when the UE is free to start the new attempt.
    bool abandon_barred_attempt(UeCtx& ue)
    {
        if (ue.active_attempt == 0) {
            return true;
        }
        auto it = attempts_.find(ue.active_attempt);
        if (it == attempts_.end()) {
            ue.active_attempt = 0;
            return true;
        }
        if (it->second.phase != Phase::UacBarred) {
            return false;
        }
        std::ostringstream s;
        s << "ev=attempt_abandoned ue=" << ue.profile.ue_id;
        log_line(s.str(), pops_[it->second.pop].slice_tag);
        finish_attempt(it->second);
        return true;
    }

    void handle(const EvAttemptStart& ev)
    {
        UeCtx& ue = ue_at(ev.ue);
        const auto& pop = *pops_[ue.pop].cfg;
        if (ue.profile.rrc_state == core::RrcState::Connected) {
            metrics_.add(ue_key(metric::kSkippedConnected, ue));
            std::ostringstream s;
            s << "ev=arrival_skipped ue=" << ev.ue << " reason=connected";
            log_line(s.str(), pops_[ue.pop].slice_tag);
            return;
        }
        core::EstablishmentCause cause = core::EstablishmentCause::MoData;
        if (pop.cause_mix.size() == 1) {
            cause = pop.cause_mix.front().cause;
        } else if (!pop.cause_mix.empty()) {
            double u = rng_.uniform(purpose::kTraffic, ev.ue, ev.k,
                                    traffic_draw::kCauseMix);
            cause = pop.cause_mix[pick_weighted(pops_[ue.pop].cause_weights, u)].cause;
        }
        if (ue.active_attempt != 0 &&
            !(cause == core::EstablishmentCause::Emergency &&
              abandon_barred_attempt(ue))) {
            metrics_.add(ue_key(metric::kSkippedBusy, ue));
            std::ostringstream s;
            s << "ev=arrival_skipped ue=" << ev.ue << " reason=busy";
            log_line(s.str(), pops_[ue.pop].slice_tag);
            return;
        }
        auto kind = ue.profile.rrc_state == core::RrcState::Inactive
                        ? admission::RequestKind::Resume
                        : admission::RequestKind::InitialSetup;
        start_attempt(ue, cause, kind);
    }

    void handle(const EvUacRecheck& ev)
    {
        auto it = attempts_.find(ev.attempt);
        if (it == attempts_.end() || it->second.phase != Phase::UacBarred) {
            return;
        }
        uac_eval(it->second);
    }

    void handle(const EvRachOccasion& ev)
    {
        CellCtx& cell = cells_.at(ev.cell);
        cell.pending_occasions.erase(now_);
        cell.last_occasion_fired = now_;
        const auto& rach = cell.cfg->rach;
        SimTime occ_index = now_ / rach.occasion_period;

        std::vector<ra::PreambleTx> txs;
        std::vector<AttemptCtx*> senders;
        for (auto ue_it = cell.ra_waiting.begin(); ue_it != cell.ra_waiting.end();) {
            UeCtx& ue = ue_at(*ue_it);
            auto a_it = ue.active_attempt ? attempts_.find(ue.active_attempt)
                                          : attempts_.end();
            if (a_it == attempts_.end() || a_it->second.phase != Phase::RaWaiting) {
                ue_it = cell.ra_waiting.erase(ue_it);
                continue;
            }
            if (ue.ra_ready > now_) {
                ++ue_it;
                continue;
            }
            AttemptCtx& a = a_it->second;
            double u = rng_.uniform(purpose::kPreamble, a.ue, a.ue_ordinal,
                                    static_cast<std::uint64_t>(a.ra.attempt_no));
            int preamble = std::min(static_cast<int>(u * rach.n_preambles),
                                    rach.n_preambles - 1);
            a.ra.chosen_preamble = preamble;
            txs.push_back({a.ue, preamble, a.ra.current_power_dbm});
            senders.push_back(&a);

            std::ostringstream s;
            s << "ev=ra_tx ue=" << a.ue << " cell=" << ev.cell << " occ=" << occ_index
              << " attempt=" << a.ra.attempt_no << " preamble=" << preamble
              << " power=" << fmt_db(a.ra.current_power_dbm);
            log_line(s.str(), pops_[a.pop].slice_tag);
            ue_it = cell.ra_waiting.erase(ue_it);
        }

        if (!txs.empty()) {
            auto outcomes = ra::rach_round(txs, rach);
            std::set<int> contended_preambles;
            for (std::size_t i = 0; i < outcomes.size(); ++i) {
                AttemptCtx& a = *senders[i];
                a.phase = Phase::RaAwait;
                if (outcomes[i].result == ra::RaDetection::NotDetected) {
                    a.messages += 1; // the unheard preamble
                    queue_.push(now_ + rach.response_timeout_latency(),
                                EvRarTimeout{a.id, a.ra.attempt_no});
                    continue;
                }
                if (outcomes[i].contended) {
                    metrics_.add(attempt_key(metric::kRaCollisions, a));
                    contended_preambles.insert(a.ra.chosen_preamble);
                }
                auto key = std::make_pair(now_, a.ra.chosen_preamble);
                auto [git, inserted] = cell.groups.try_emplace(key);
                if (inserted) {
                    queue_.push(now_ + rach.uplink_request_latency(),
                                EvUplink{ev.cell, now_, a.ra.chosen_preamble});
                }
                git->second.emplace_back(a.ue, a.id);
            }
            for (int p : contended_preambles) {
                std::ostringstream s;
                s << "ev=ra_collision cell=" << ev.cell << " occ=" << occ_index
                  << " preamble=" << p
                  << " n=" << cell.groups.at({now_, p}).size();
                log_line(s.str());
            }
        }

        if (!cell.ra_waiting.empty()) {
            SimTime min_ready = horizon_ + 1;
            for (core::UeId id : cell.ra_waiting) {
                min_ready = std::min(min_ready, ue_at(id).ra_ready);
            }
            ensure_occasion(cell, min_ready);
        }
    }

    void handle(const EvRarTimeout& ev)
    {
        auto it = attempts_.find(ev.attempt);
        if (it == attempts_.end() || it->second.phase != Phase::RaAwait ||
            it->second.ra.attempt_no != ev.ra_attempt) {
            return;
        }
        retry_or_fail(it->second);
    }

    void handle(const EvUplink& ev)
    {
        CellCtx& cell = cells_.at(ev.cell);
        auto git = cell.groups.find({ev.occ_t, ev.preamble});
        if (git == cell.groups.end()) {
            return;
        }
        auto group = std::move(git->second);
        cell.groups.erase(git);
        const auto& rach = cell.cfg->rach;
        SimTime occ_index = ev.occ_t / rach.occasion_period;

        std::vector<core::UeId> contenders;
        for (const auto& [ue, attempt] : group) {
            contenders.push_back(ue);
        }
        core::UeId winner = contenders.front();
        if (contenders.size() > 1) {
            double u = rng_.uniform(purpose::kContention, ev.cell,
                                    static_cast<std::uint64_t>(occ_index),
                                    static_cast<std::uint64_t>(ev.preamble));
            auto res = ra::contention_resolution(contenders, rach, u);
            winner = res.winner;
            std::ostringstream s;
            s << "ev=contention cell=" << ev.cell << " occ=" << occ_index
              << " preamble=" << ev.preamble << " n=" << contenders.size()
              << " winner=" << winner;
            log_line(s.str());
        }

        SimTime dl_delay = rach.full_exchange_latency() - rach.uplink_request_latency();
        for (const auto& [ue_id, attempt_id] : group) {
            auto a_it = attempts_.find(attempt_id);
            if (a_it == attempts_.end()) {
                continue;
            }
            AttemptCtx& a = a_it->second;
            a.messages += rach.messages_per_access();
            if (ue_id != winner) {
                queue_.push(now_ + dl_delay, EvDlOutcome{attempt_id, DlKind::ContentionLost});
                continue;
            }
            // The winner's uplink request reaches admission control now.
            UeCtx& ue = ue_at(ue_id);
            auto req = build_session_request(ue, a);
            auto decision =
                admission::admit_request(req, cell.adm, cell.cfg->admission, now_);
            {
                std::ostringstream s;
                s << "ev=admission ue=" << ue_id << " kind=" << kind_name(a.kind)
                  << " decision=" << decision_name(decision.kind);
                if (!decision.victims.empty()) {
                    s << " victims=";
                    for (std::size_t i = 0; i < decision.victims.size(); ++i) {
                        s << (i ? "," : "") << decision.victims[i];
                    }
                }
                if (decision.kind == admission::AdmissionDecision::Kind::Queue) {
                    s << " pos=" << decision.queue_position;
                }
                log_line(s.str(), pops_[a.pop].slice_tag);
            }
            switch (decision.kind) {
            case admission::AdmissionDecision::Kind::Admit:
            case admission::AdmissionDecision::Kind::PreemptAndAdmit:
                if (!decision.victims.empty()) {
                    apply_evictions(decision, now_);
                }
                a.pending_flows.clear();
                for (const auto& f : req.flows) {
                    a.pending_flows.push_back(f.flow_id);
                }
                queue_.push(now_ + dl_delay, EvDlOutcome{a.id, DlKind::Connected});
                if (!decision.victims.empty()) {
                    run_process_queue(cell); // eviction may leave spare units
                }
                break;
            case admission::AdmissionDecision::Kind::Queue:
                a.phase = Phase::Queued;
                metrics_.add(attempt_key(metric::kQueueWaits, a));
                note_queued(cell, QueueOrigin{ue_id, a.id});
                break;
            case admission::AdmissionDecision::Kind::Reject:
                a.pending_wait = decision.wait_time;
                queue_.push(now_ + dl_delay, EvDlOutcome{a.id, DlKind::Rejected});
                break;
            }
            audit(cell);
        }
    }

    void handle(const EvDlOutcome& ev)
    {
        auto it = attempts_.find(ev.attempt);
        if (it == attempts_.end()) {
            return;
        }
        AttemptCtx& a = it->second;
        UeCtx& ue = ue_at(a.ue);
        const auto& pop = *pops_[a.pop].cfg;

        switch (ev.kind) {
        case DlKind::Connected: {
            ++ue.epoch;
            ue.profile.rrc_state = core::RrcState::Connected;
            ue.profile.wait_time_until.reset();
            ue.flows = a.pending_flows;
            SimTime latency = now_ - a.start;
            metrics_.add(attempt_key(metric::kAccessSuccess, a));
            metrics_.sample(attempt_key(metric::kLatencyConnect, a),
                            static_cast<double>(latency));
            metrics_.sample(attempt_key(metric::kMessagesPerAccess, a),
                            static_cast<double>(a.messages));
            std::ostringstream s;
            s << "ev=dl ue=" << a.ue << " outcome=connected latency_us=" << latency
              << " messages=" << a.messages;
            log_line(s.str(), pops_[a.pop].slice_tag);
            if (pop.session_s > 0.0) {
                queue_.push(now_ + from_seconds(pop.session_s),
                            EvSessionRelease{a.ue, ue.epoch});
            }
            finish_attempt(a);
            break;
        }
        case DlKind::Rejected: {
            metrics_.add(attempt_key(metric::kRejects, a));
            std::ostringstream s;
            s << "ev=dl ue=" << a.ue << " outcome=rejected";
            if (a.pending_wait) {
                ue.profile = preventive::apply_wait_time(ue.profile, *a.pending_wait, now_);
                s << " wait_us=" << *a.pending_wait;
            }
            log_line(s.str(), pops_[a.pop].slice_tag);
            finish_attempt(a);
            break;
        }
        case DlKind::ContentionLost: {
            std::ostringstream s;
            s << "ev=dl ue=" << a.ue << " outcome=contention_lost";
            log_line(s.str(), pops_[a.pop].slice_tag);
            retry_or_fail(a);
            break;
        }
        }
    }

    void handle(const EvQueueSweep& ev)
    {
        CellCtx& cell = cells_.at(ev.cell);
        run_process_queue(cell);
        audit(cell);
    }

    void handle(const EvSessionRelease& ev)
    {
        UeCtx& ue = ue_at(ev.ue);
        if (ue.epoch != ev.epoch || ue.profile.rrc_state != core::RrcState::Connected) {
            return;
        }
        const auto& pop = *pops_[ue.pop].cfg;
        CellCtx& cell = cells_.at(*ue.profile.serving_cell);
        auto res = admission::release_ue(ev.ue, cell.adm);
        bool to_inactive = pop.release_to == cli::PopulationConfig::ReleaseTo::Inactive;
        ue.profile.rrc_state =
            to_inactive ? core::RrcState::Inactive : core::RrcState::Idle;
        ue.flows.clear();
        ++ue.epoch;

        std::ostringstream s;
        s << "ev=release ue=" << ev.ue
          << " reason=" << (to_inactive ? "inactivity" : "normal")
          << " units=" << res.units_freed;
        log_line(s.str(), pops_[ue.pop].slice_tag);

        run_process_queue(cell);
        audit(cell);
    }

    void handle(const EvFlowArrival& ev)
    {
        UeCtx& ue = ue_at(ev.ue);
        const auto& pop = *pops_[ue.pop].cfg;
        if (ue.profile.rrc_state != core::RrcState::Connected) {
            metrics_.add(MetricKey{metric::kChurnSkipped, pops_[ue.pop].ai_tag, -1,
                                   pops_[ue.pop].churn_slice_tag, ""});
            return;
        }
        CellCtx& cell = cells_.at(*ue.profile.serving_cell);
        admission::AdmissionRequest req;
        req.kind = admission::RequestKind::QosFlowSetup;
        req.ue_id = ev.ue;
        req.serving_plmn = serving_plmn(ue, cell);
        for (const auto& f : pop.qos_flows) {
            core::QosFlowRequest q;
            q.flow_id = ev.ue * 100000 + ue.flow_seq++;
            q.arp = f.arp;
            q.resource_type = f.resource_type;
            q.snssai = f.snssai;
            q.demand = f.demand;
            req.flows.push_back(q);
        }
        auto decision = admission::admit_request(req, cell.adm, cell.cfg->admission, now_);
        {
            std::ostringstream s;
            s << "ev=flow_req ue=" << ev.ue
              << " decision=" << decision_name(decision.kind);
            log_line(s.str(), pops_[ue.pop].churn_slice_tag);
        }
        switch (decision.kind) {
        case admission::AdmissionDecision::Kind::Admit:
        case admission::AdmissionDecision::Kind::PreemptAndAdmit: {
            if (!decision.victims.empty()) {
                apply_evictions(decision, now_);
            }
            std::vector<core::FlowId> ids;
            for (const auto& f : req.flows) {
                ids.push_back(f.flow_id);
            }
            queue_.push(now_ + from_seconds(pop.qos_flow_hold_s),
                        EvFlowRelease{ev.ue, std::move(ids)});
            if (!decision.victims.empty()) {
                run_process_queue(cell);
            }
            break;
        }
        case admission::AdmissionDecision::Kind::Queue:
            metrics_.add(MetricKey{metric::kQueueWaits, pops_[ue.pop].ai_tag, -1,
                                   pops_[ue.pop].churn_slice_tag, ""});
            note_queued(cell, QueueOrigin{ev.ue, 0});
            break;
        case admission::AdmissionDecision::Kind::Reject:
            metrics_.add(MetricKey{metric::kRejects, pops_[ue.pop].ai_tag, -1,
                                   pops_[ue.pop].churn_slice_tag, ""});
            break;
        }
        audit(cell);
    }

    void handle(const EvFlowRelease& ev)
    {
        UeCtx& ue = ue_at(ev.ue);
        CellCtx& cell = cells_.at(*ue.profile.serving_cell);
        std::uint64_t freed = 0;
        bool any = false;
        for (auto id : ev.flows) {
            auto res = admission::release_flow(id, cell.adm);
            freed += res.units_freed;
            any = any || res.found;
        }
        if (!any) {
            return; // already gone (session ended or pre-empted)
        }
        std::ostringstream s;
        s << "ev=flow_release ue=" << ev.ue << " units=" << freed;
        log_line(s.str(), pops_[ue.pop].churn_slice_tag);
        run_process_queue(cell);
        audit(cell);
    }

    void handle(const EvPagingArrival& ev)
    {
        const auto& spec = paging_pregen_[ev.pop][ev.k];
        core::UeId ue_id = pops_[ev.pop].first_ue + spec.target_index;
        UeCtx& ue = ue_at(ue_id);
        if (ue.profile.rrc_state == core::RrcState::Connected) {
            std::ostringstream s;
            s << "ev=page_direct ue=" << ue_id;
            log_line(s.str(), pops_[ue.pop].slice_tag);
            return;
        }
        preventive::PagingRequest req;
        req.target_ue = ue_id;
        req.priority = spec.priority;
        req.origin = ue.profile.rrc_state == core::RrcState::Inactive
                         ? preventive::PagingRequest::Origin::Ran
                         : preventive::PagingRequest::Origin::Cn;
        req.enqueue_time = now_;
        auto route = preventive::route_paging(req, ue.profile, pops_[ev.pop].location,
                                              topology_);
        if (route.unknown_ue || route.targets.empty()) {
            metrics_.add(MetricKey{metric::kWarnings, -1, -1, "", "unroutable_page"});
            std::ostringstream s;
            s << "ev=page_unroutable ue=" << ue_id;
            log_line(s.str());
            return;
        }
        {
            std::ostringstream s;
            s << "ev=page_arrival ue=" << ue_id << " prio=" << spec.priority << " origin="
              << (req.origin == preventive::PagingRequest::Origin::Ran ? "ran" : "cn")
              << " targets=" << route.targets.size();
            log_line(s.str(), pops_[ue.pop].slice_tag);
        }
        for (const auto& target : route.targets) {
            queue_.push(now_ + target.delay, EvPagingEnqueue{target.cell, req});
        }
    }

    void handle(const EvPagingEnqueue& ev)
    {
        auto req = ev.req;
        req.enqueue_time = now_; // age counts from when this cell could page
        cells_.at(ev.cell).paging_queue.push_back(req);
    }

    void handle(const EvPagingCycle& ev)
    {
        CellCtx& cell = cells_.at(ev.cell);
        if (cell.paging_queue.empty()) {
            return;
        }
        const auto& pcfg = cell.cfg->paging;
        SimTime discard_after = pcfg.cycle * pcfg.discard_cycles;
        auto res = preventive::paging_control_filter(std::move(cell.paging_queue),
                                                     pcfg.budget, now_, discard_after);
        cell.paging_queue = std::move(res.deferred);

        int paged_maxp = -1;
        for (const auto& r : res.to_page) {
            paged_maxp = std::max(paged_maxp, r.priority);
            metrics_.add(MetricKey{metric::kPagingPaged, -1, -1, "", ""});
            queue_.push(now_, EvPageReceived{r.target_ue, r.priority});
        }
        int deferred_minp = -1;
        for (const auto& r : cell.paging_queue) {
            deferred_minp =
                deferred_minp < 0 ? r.priority : std::min(deferred_minp, r.priority);
        }
        SimTime drop_min_age = -1;
        for (const auto& r : res.dropped) {
            SimTime age = now_ - r.enqueue_time;
            drop_min_age = drop_min_age < 0 ? age : std::min(drop_min_age, age);
            metrics_.add(MetricKey{metric::kPagingDropped, -1, -1, "", ""});
        }

        std::ostringstream s;
        s << "ev=paging_cycle cell=" << ev.cell
          << " queued=" << (res.to_page.size() + cell.paging_queue.size() +
                            res.dropped.size())
          << " paged=" << res.to_page.size() << " deferred=" << cell.paging_queue.size()
          << " dropped=" << res.dropped.size() << " paged_maxp=" << paged_maxp
          << " deferred_minp=" << deferred_minp << " drop_min_age_us=" << drop_min_age;
        log_line(s.str());
    }

    void handle(const EvPageReceived& ev)
    {
        UeCtx& ue = ue_at(ev.ue);
        {
            std::ostringstream s;
            s << "ev=page_rx ue=" << ev.ue << " prio=" << ev.priority;
            log_line(s.str(), pops_[ue.pop].slice_tag);
        }
        if (ue.profile.rrc_state == core::RrcState::Connected) {
            return; // already reachable
        }
        if (ue.active_attempt != 0 && !abandon_barred_attempt(ue)) {
            return; // already on its way
        }
        auto kind = ue.profile.rrc_state == core::RrcState::Inactive
                        ? admission::RequestKind::Resume
                        : admission::RequestKind::InitialSetup;
        start_attempt(ue, core::EstablishmentCause::MtAccess, kind);
    }

    // ---- audit ---------------------------------------------------------------

    void audit(CellCtx& cell)
    {
        // Pools change only inside admission-touching handlers, so checking
        // after each of those covers every event boundary.
        if (!opts_.audit) {
            return;
        }
        for (auto& v : admission::audit_conservation(cell.adm)) {
            violations_.push_back("t=" + std::to_string(now_) + " cell=" +
                                  std::to_string(cell.cfg->id) + " " + v);
        }
        while (checked_evictions_ < evictions_.size()) {
            const auto& e = evictions_[checked_evictions_++];
            if (!e.victim_vulnerable || e.victim_arp <= e.incoming_arp) {
                std::ostringstream s;
                s << "t=" << e.t << " eviction rule violated: flow=" << e.victim_flow
                  << " arp=" << e.victim_arp << " vulnerable=" << e.victim_vulnerable
                  << " incoming_arp=" << e.incoming_arp;
                violations_.push_back(s.str());
            }
        }
    }

    RunReport make_report()
    {
        RunReport report;
        report.metrics = std::move(metrics_);
        report.eventlog_digest = log_.digest();
        report.slice_digests = log_.slice_digests();
        report.event_lines = log_.lines();
        report.log_line_count = log_.line_count();
        report.events_processed = events_processed_;
        report.draw_count = rng_.draw_count();
        report.draws = rng_.log();
        report.evictions = std::move(evictions_);
        report.audit_violations = std::move(violations_);
        return report;
    }

    const cli::ScenarioConfig& cfg_;
    RunOptions opts_;
    RandomStreams rng_;
    EventLog log_;
    MetricsSink metrics_;
    EventQueue<Payload> queue_;
    preventive::Topology topology_;
    std::map<core::CellId, CellCtx> cells_;
    std::vector<UeCtx> ues_;
    std::vector<PopRt> pops_;
    std::vector<std::vector<PagingArrivalSpec>> paging_pregen_;
    std::map<std::uint64_t, AttemptCtx> attempts_;
    std::uint64_t next_attempt_id_ = 1;
    SimTime now_ = 0;
    SimTime horizon_ = 0;
    std::uint64_t events_processed_ = 0;
    std::vector<EvictionRecord> evictions_;
    std::size_t checked_evictions_ = 0;
    std::vector<std::string> violations_;
};

} // namespace

RunReport run(const cli::ScenarioConfig& config, std::uint64_t seed,
              const RunOptions& options)
{
    Engine engine(config, seed, options);
    return engine.run();
}

} // namespace accessim::sim
