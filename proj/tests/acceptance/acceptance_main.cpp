// Acceptance gate. Each criterion prints exactly one PASS/FAIL line; the
// process exits nonzero when any criterion fails. Run with the scenario
// directory as the only argument.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "accessim/admission/admission.hpp"
#include "accessim/cli/report.hpp"
#include "accessim/cli/scenario.hpp"
#include "accessim/core/types.hpp"
#include "accessim/preventive/uac.hpp"
#include "accessim/ra/rach.hpp"
#include "accessim/sim/engine.hpp"
#include "accessim/sim/random.hpp"

namespace {

using namespace accessim;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string g_scenario_dir;
int g_failures = 0;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int index, const std::string& name, bool pass, const std::string& detail)
{
    std::ostringstream line;
    line << (pass ? "[PASS]" : "[FAIL]") << " " << (index < 10 ? "0" : "") << index
         << " " << name << ": " << detail;
    std::cout << line.str() << "\n";
    if (!pass) {
        ++g_failures;
    }
}

cli::ScenarioConfig load_scenario(const std::string& file)
{
    auto parsed = cli::parse_scenario_file(g_scenario_dir + "/" + file);
    if (!parsed.ok()) {
        std::ostringstream s;
        s << "scenario " << file << " failed to parse:";
        for (const auto& e : parsed.errors) {
            s << " [" << e.path << ": " << e.message << "]";
        }
        throw std::runtime_error(s.str());
    }
    return *parsed.config;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// ---- event line parsing -----------------------------------------------

struct LogLine {
    SimTime t = 0;
    std::string ev;
    std::map<std::string, std::string> fields;

    long long num(const std::string& key, long long missing = -2) const
    {
        auto it = fields.find(key);
        return it == fields.end() ? missing : std::stoll(it->second);
    }
    std::string str(const std::string& key) const
    {
        auto it = fields.find(key);
        return it == fields.end() ? std::string() : it->second;
    }
};

LogLine parse_line(const std::string& raw)
{
    LogLine out;
    std::istringstream in(raw);
    std::string token;
    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        std::string key = token.substr(0, eq);
        std::string value = token.substr(eq + 1);
        if (key == "t") {
            out.t = std::stoll(value);
        } else if (key == "ev") {
            out.ev = value;
        } else {
            out.fields[key] = value;
        }
    }
    return out;
}

// ---- criterion 1: AC 0 exemption ----------------------------------------

void criterion_1()
{
    auto t0 = Clock::now();
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> ac_key(0, 63);
    std::uniform_int_distribution<int> n_entries(0, 8);
    std::uniform_int_distribution<int> ai_value(0, 15);

    const int configs = 2000;
    int allowed = 0;
    for (int i = 0; i < configs; ++i) {
        preventive::UacConfig cfg;
        cfg.jittered_barring_time = (gen() & 1) != 0;
        int n = n_entries(gen);
        for (int e = 0; e < n; ++e) {
            preventive::UacBarringEntry entry;
            entry.barring_factor = unit(gen);
            entry.barring_time = from_seconds(unit(gen) * 10.0);
            for (int b = 0; b < 3; ++b) {
                entry.ai_allowed.insert(ai_value(gen));
            }
            // Deliberately includes key 0 sometimes: even a bogus entry for
            // AC 0 must never be consulted.
            cfg.entries[ac_key(gen)] = entry;
        }
        core::UeProfile profile;
        profile.ue_id = 1;
        if ((gen() & 1) != 0) {
            profile.wait_time_until = from_seconds(unit(gen) * 100.0);
        }
        core::AiSet ais;
        for (int b = 0; b < 2; ++b) {
            ais.insert(ai_value(gen));
        }
        SimTime now = from_seconds(unit(gen) * 50.0);
        auto res = preventive::uac_check(core::AccessCategory(0), ais, cfg,
                                         0.999999, now, profile, unit(gen));
        if (res.allowed && res.barred_until == 0) {
            ++allowed;
        }
    }
    double elapsed = seconds_since(t0);
    std::ostringstream d;
    d << allowed << "/" << configs << " AC-0 checks allowed, " << elapsed << " s (limit 1 s)";
    report(1, "uac_ac0_exemption", allowed == configs && elapsed < 1.0, d.str());
}

// ---- criterion 2: barring factor statistics ------------------------------

void criterion_2()
{
    auto t0 = Clock::now();
    const int n = 10000;
    bool ok = true;
    std::ostringstream d;
    for (double p : {0.05, 0.3, 0.5, 0.9}) {
        preventive::UacConfig cfg;
        cfg.entries[7] = preventive::UacBarringEntry{p, seconds(4), {}};
        core::UeProfile profile;
        profile.ue_id = 1;
        sim::RandomStreams rng(12345);
        int allowed = 0;
        for (int i = 0; i < n; ++i) {
            double draw = rng.uniform(sim::purpose::kUac, static_cast<std::uint64_t>(i));
            auto res = preventive::uac_check(core::AccessCategory(7), {}, cfg, draw,
                                             0, profile);
            if (res.allowed) {
                ++allowed;
            }
        }
        double frac = static_cast<double>(allowed) / n;
        double sigma = std::sqrt(p * (1.0 - p) / n);
        bool within = std::abs(frac - p) <= 3.0 * sigma;
        ok = ok && within;
        d << "p=" << p << " got " << frac << (within ? " ok; " : " OUT; ");
    }
    double elapsed = seconds_since(t0);
    d << elapsed << " s (limit 5 s)";
    report(2, "barring_factor_statistics", ok && elapsed < 5.0, d.str());
}

// ---- criterion 3: priority differentiation -------------------------------

void criterion_3()
{
    auto t0 = Clock::now();
    auto cfg = load_scenario("mc_surge.json");
    auto r = sim::run(cfg, cfg.default_seed);

    auto rate = [&](int ai) {
        auto attempts = r.metrics.total_for_ai(sim::metric::kAttempts, ai);
        auto success = r.metrics.total_for_ai(sim::metric::kAccessSuccess, ai);
        return attempts == 0 ? 0.0 : static_cast<double>(success) / attempts;
    };
    double mps = rate(1);
    double mcs = rate(2);
    double regular = rate(0);

    auto fa = r.metrics.total_for_ai(sim::metric::kUacFirstAllowed, 0);
    auto fb = r.metrics.total_for_ai(sim::metric::kUacFirstBarred, 0);
    double n = static_cast<double>(fa + fb);
    double first_frac = n == 0 ? 0.0 : static_cast<double>(fa) / n;
    double sigma = std::sqrt(0.05 * 0.95 / n);
    bool first_ok = n > 0 && std::abs(first_frac - 0.05) <= 3.0 * sigma;

    bool ok = mps >= 0.99 && mcs >= 0.99 && mps > regular && mcs > regular && first_ok;
    double elapsed = seconds_since(t0);
    std::ostringstream d;
    d << "mps=" << mps << " mcs=" << mcs << " regular=" << regular
      << " first_attempt_allowed=" << first_frac << " (target 0.05 +/- " << 3.0 * sigma
      << "), " << elapsed << " s (limit 30 s)";
    report(3, "priority_differentiation", ok && elapsed < 30.0, d.str());
}

// ---- criterion 4: backoff distribution ------------------------------------

void criterion_4()
{
    auto t0 = Clock::now();
    ra::RachConfig cfg;
    cfg.backoff_indicator = millis(160);
    cfg.max_attempts = 10;
    cfg.prioritized.enabled = true;
    cfg.prioritized.backoff_scaling = 0.25;
    cfg.prioritized.power_ramping_step_high_db = 4.0;

    ra::RaAttemptState normal;
    normal.attempt_no = 1;
    normal.current_power_dbm = cfg.initial_power_dbm;
    ra::RaAttemptState priority = normal;
    priority.priority_class = true;

    const int n = 10000;
    const int bins = 20;
    std::vector<int> counts(bins, 0);
    double sum_normal = 0.0;
    double sum_priority = 0.0;
    sim::RandomStreams rng(99);
    for (int i = 0; i < n; ++i) {
        double draw = rng.uniform(sim::purpose::kBackoff, static_cast<std::uint64_t>(i));
        auto pn = ra::next_attempt_params(normal, cfg, draw);
        auto pp = ra::next_attempt_params(priority, cfg, draw);
        double b = static_cast<double>(pn->backoff);
        sum_normal += b;
        sum_priority += static_cast<double>(pp->backoff);
        int bin = std::min(bins - 1, static_cast<int>(b * bins /
                                       static_cast<double>(cfg.backoff_indicator)));
        counts[static_cast<std::size_t>(bin)] += 1;
    }
    double expected = static_cast<double>(n) / bins;
    double chi2 = 0.0;
    for (int c : counts) {
        double diff = c - expected;
        chi2 += diff * diff / expected;
    }
    // Chi-square critical value, 19 degrees of freedom, alpha = 0.01.
    const double critical = 36.1909;
    double ratio = sum_priority / sum_normal;
    bool ratio_ok = std::abs(ratio - cfg.prioritized.backoff_scaling) <=
                    0.05 * cfg.prioritized.backoff_scaling;
    double elapsed = seconds_since(t0);
    std::ostringstream d;
    d << "chi2=" << chi2 << " (critical " << critical << "), prioritized/normal mean ratio="
      << ratio << " (target 0.25 +/- 5%), " << elapsed << " s";
    report(4, "backoff_distribution", chi2 < critical && ratio_ok, d.str());
}

// ---- criterion 5: message count exactness ---------------------------------

cli::ScenarioConfig single_ue_config(ra::RaMode mode)
{
    cli::ScenarioConfig cfg;
    cfg.name = mode == ra::RaMode::FourStep ? "msg_four" : "msg_two";
    cfg.duration_s = 1.0;
    cfg.default_seed = 5;

    cli::CellConfig cell;
    cell.id = 1;
    cell.gnb = 1;
    cell.tracking_area = 1;
    cell.access.plmn_ids = {core::PlmnId{1, 1}};
    cell.rach.n_preambles = 64;
    cell.rach.occasion_period = millis(10);
    cell.rach.backoff_indicator = millis(80);
    cell.rach.max_attempts = 10;
    cell.rach.mode = mode;
    if (mode == ra::RaMode::TwoStep) {
        cell.rach.two_step_allowed = true;
        cell.rach.msg_latencies = {millis(1), millis(1)};
    } else {
        cell.rach.msg_latencies = {millis(1), millis(1), millis(1), millis(1)};
    }
    cell.pools.push_back(admission::SlicePool{core::Snssai{1, std::nullopt}, 10, 0});
    cell.admission.queueing = false;
    cfg.cells.push_back(cell);

    cli::PopulationConfig pop;
    pop.name = "solo";
    pop.count = 1;
    pop.cell = 1;
    pop.ue.home_plmn = core::PlmnId{1, 1};
    pop.traffic.kind = cli::TrafficConfig::Kind::Burst;
    pop.traffic.at = millis(100);
    pop.traffic.jitter = 0;
    pop.cause_mix = {{core::EstablishmentCause::MoData, 1.0}};
    cli::FlowConfig flow;
    flow.arp.priority_level = 9;
    flow.resource_type = core::ResourceType::NonGbr;
    flow.snssai = core::Snssai{1, std::nullopt};
    flow.demand = 0;
    pop.flows.push_back(flow);
    pop.session_s = 0.0;
    cfg.populations.push_back(pop);
    return cfg;
}

void criterion_5()
{
    auto run_one = [](ra::RaMode mode, double& messages, double& latency,
                      std::uint64_t& collisions) {
        auto cfg = single_ue_config(mode);
        auto r = sim::run(cfg, cfg.default_seed);
        collisions = r.metrics.total(sim::metric::kRaCollisions);
        messages = -1.0;
        latency = -1.0;
        for (const auto& [key, values] : r.metrics.samples()) {
            if (key.metric == sim::metric::kMessagesPerAccess && values.size() == 1) {
                messages = values[0];
            }
            if (key.metric == sim::metric::kLatencyConnect && values.size() == 1) {
                latency = values[0];
            }
        }
    };
    double msg4 = 0.0, lat4 = 0.0, msg2 = 0.0, lat2 = 0.0;
    std::uint64_t coll4 = 0, coll2 = 0;
    run_one(ra::RaMode::FourStep, msg4, lat4, coll4);
    run_one(ra::RaMode::TwoStep, msg2, lat2, coll2);

    bool ok = coll4 == 0 && coll2 == 0 && msg4 == 4.0 && msg2 == 2.0 && lat2 > 0.0 &&
              lat2 < lat4;
    std::ostringstream d;
    d << "four_step messages=" << msg4 << " latency_us=" << lat4
      << ", two_step messages=" << msg2 << " latency_us=" << lat2;
    report(5, "message_count_exactness", ok, d.str());
}

// ---- criterion 6: preemption oracle + soak --------------------------------

struct OracleFlow {
    core::FlowId id = 0;
    int arp = 15;
    bool vulnerable = false;
    std::uint64_t reserved = 0;
    std::uint64_t admit_seq = 0;
};

// Brute force over every victim subset: minimal freed total, ties broken by
// the lexicographically first subset in (ARP desc, admit_seq desc) order.
std::optional<std::vector<core::FlowId>> oracle_victims(std::vector<OracleFlow> admitted,
                                                        int incoming_arp,
                                                        std::uint64_t needed)
{
    std::vector<OracleFlow> cands;
    for (const auto& f : admitted) {
        if (f.vulnerable && f.arp > incoming_arp) {
            cands.push_back(f);
        }
    }
    std::sort(cands.begin(), cands.end(), [](const OracleFlow& a, const OracleFlow& b) {
        if (a.arp != b.arp) {
            return a.arp > b.arp;
        }
        return a.admit_seq > b.admit_seq;
    });
    const std::size_t m = cands.size();
    std::optional<std::uint64_t> best_sum;
    std::optional<std::uint64_t> best_mask;
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask & (1ull << i)) {
                sum += cands[i].reserved;
            }
        }
        if (sum < needed) {
            continue;
        }
        if (!best_sum || sum < *best_sum) {
            best_sum = sum;
            best_mask = mask;
            continue;
        }
        if (sum == *best_sum) {
            // Lexicographic on candidate order: the mask whose earliest
            // differing candidate is taken wins.
            for (std::size_t i = 0; i < m; ++i) {
                bool a = (*best_mask >> i) & 1;
                bool b = (mask >> i) & 1;
                if (a != b) {
                    if (b) {
                        best_mask = mask;
                    }
                    break;
                }
            }
        }
    }
    if (!best_mask) {
        return std::nullopt;
    }
    std::vector<core::FlowId> out;
    for (std::size_t i = 0; i < m; ++i) {
        if (*best_mask & (1ull << i)) {
            out.push_back(cands[i].id);
        }
    }
    return out;
}

bool oracle_instance(std::mt19937_64& gen, std::string& why,
                     admission::AdmissionDecision::Kind& kind_out)
{
    std::uniform_int_distribution<int> arp_d(1, 15);
    std::uniform_int_distribution<int> nflows_d(0, 6);
    std::uniform_int_distribution<std::uint64_t> small_d(1, 3);
    std::uniform_int_distribution<std::uint64_t> demand_d(1, 8);
    std::uniform_int_distribution<std::uint64_t> extra_d(0, 2);
    std::uniform_int_distribution<int> coin4(0, 3);
    std::uniform_int_distribution<int> coin3(0, 2);

    const core::Snssai slice{1, std::nullopt};
    const core::PlmnId plmn{1, 1};

    admission::CellAdmissionState state;
    std::vector<OracleFlow> mirror;
    std::uint64_t used = 0;
    int n = nflows_d(gen);
    for (int i = 0; i < n; ++i) {
        OracleFlow f;
        f.id = 1000 + static_cast<core::FlowId>(i);
        f.arp = arp_d(gen);
        f.vulnerable = coin3(gen) != 0;
        f.reserved = small_d(gen);
        f.admit_seq = static_cast<std::uint64_t>(i) + 1;
        mirror.push_back(f);
        used += f.reserved;

        admission::AdmittedFlow af;
        af.flow_id = f.id;
        af.ue_id = 100 + static_cast<core::UeId>(i);
        af.arp.priority_level = f.arp;
        af.arp.preemption_vulnerability = f.vulnerable;
        af.resource_type = core::ResourceType::Gbr;
        af.snssai = slice;
        af.reserved = f.reserved;
        af.admit_seq = f.admit_seq;
        af.serving_plmn = plmn;
        state.admitted[f.id] = af;
    }
    std::uint64_t capacity = used + extra_d(gen);
    state.pools.push_back(admission::SlicePool{slice, capacity, used});
    state.shared_capacity = 0;
    state.next_admit_seq = static_cast<std::uint64_t>(n) + 1;
    if (used > 0) {
        state.plmn_reserved[plmn] = used;
    }

    core::QosFlowRequest incoming;
    incoming.flow_id = 9999;
    incoming.arp.priority_level = arp_d(gen);
    incoming.arp.preemption_capability = coin4(gen) != 0;
    incoming.resource_type = core::ResourceType::Gbr;
    incoming.snssai = slice;
    incoming.demand = demand_d(gen);

    admission::AdmissionRequest req;
    req.kind = admission::RequestKind::InitialSetup;
    req.cause = core::EstablishmentCause::MoData;
    req.flows = {incoming};
    req.ue_id = 999;
    req.serving_plmn = plmn;

    admission::AdmissionPolicy policy;
    policy.queueing = false;
    policy.attach_wait_time = true;
    policy.wait_time = seconds(4);

    auto decision = admission::admit_request(req, state, policy, 0);
    kind_out = decision.kind;

    // Oracle.
    std::uint64_t free = capacity - used;
    admission::AdmissionDecision::Kind want;
    std::vector<core::FlowId> want_victims;
    if (free >= incoming.demand) {
        want = admission::AdmissionDecision::Kind::Admit;
    } else if (incoming.arp.preemption_capability) {
        auto v = oracle_victims(mirror, incoming.arp.priority_level,
                                incoming.demand - free);
        if (v) {
            want = admission::AdmissionDecision::Kind::PreemptAndAdmit;
            want_victims = *v;
        } else {
            want = admission::AdmissionDecision::Kind::Reject;
        }
    } else {
        want = admission::AdmissionDecision::Kind::Reject;
    }

    std::ostringstream s;
    if (decision.kind != want) {
        s << "decision mismatch: got " << static_cast<int>(decision.kind) << " want "
          << static_cast<int>(want);
        why = s.str();
        return false;
    }
    if (decision.victims != want_victims) {
        s << "victim set mismatch (" << decision.victims.size() << " vs "
          << want_victims.size() << ")";
        why = s.str();
        return false;
    }
    std::uint64_t freed = 0;
    for (auto id : want_victims) {
        if (state.admitted.count(id) != 0) {
            why = "victim still admitted after preemption";
            return false;
        }
        for (const auto& f : mirror) {
            if (f.id == id) {
                freed += f.reserved;
            }
        }
    }
    std::uint64_t want_used = used;
    if (want != admission::AdmissionDecision::Kind::Reject) {
        want_used = used - freed + incoming.demand;
    }
    if (state.pools[0].used != want_used) {
        s << "post-state used mismatch: got " << state.pools[0].used << " want "
          << want_used;
        why = s.str();
        return false;
    }
    if (want == admission::AdmissionDecision::Kind::Reject && !decision.wait_time) {
        why = "reject without wait_time";
        return false;
    }
    auto audit = admission::audit_conservation(state);
    if (!audit.empty()) {
        why = "audit: " + audit[0];
        return false;
    }
    return true;
}

cli::ScenarioConfig soak_config()
{
    cli::ScenarioConfig cfg;
    cfg.name = "preemption_soak";
    cfg.duration_s = 30.0;
    cfg.default_seed = 17;

    cli::CellConfig cell;
    cell.id = 1;
    cell.gnb = 1;
    cell.tracking_area = 1;
    cell.access.plmn_ids = {core::PlmnId{1, 1}};
    cell.rach.n_preambles = 64;
    cell.rach.occasion_period = millis(10);
    cell.rach.backoff_indicator = millis(80);
    cell.rach.max_attempts = 10;
    cell.rach.msg_latencies = {millis(1), millis(1), millis(1), millis(1)};
    cell.pools.push_back(admission::SlicePool{core::Snssai{1, std::nullopt}, 24, 0});
    cell.shared_capacity = 8;
    cell.admission.queueing = true;
    cell.admission.queue_limit = 8;
    cell.admission.queue_timeout = millis(500);
    cfg.cells.push_back(cell);

    struct PopSpec {
        const char* name;
        int arp;
        bool capable;
        bool vulnerable;
        std::uint64_t demand;
    };
    const PopSpec specs[] = {
        {"gold", 3, true, false, 2},
        {"silver", 6, true, true, 2},
        {"bronze", 9, false, true, 3},
        {"best_effort", 12, false, true, 1},
    };
    for (const auto& spec : specs) {
        cli::PopulationConfig pop;
        pop.name = spec.name;
        pop.count = 10;
        pop.cell = 1;
        pop.ue.home_plmn = core::PlmnId{1, 1};
        pop.traffic.kind = cli::TrafficConfig::Kind::Burst;
        pop.traffic.at = millis(50);
        pop.traffic.jitter = millis(50);
        pop.cause_mix = {{core::EstablishmentCause::MoData, 1.0}};
        cli::FlowConfig base;
        base.arp.priority_level = 9;
        base.resource_type = core::ResourceType::NonGbr;
        base.snssai = core::Snssai{1, std::nullopt};
        base.demand = 0;
        pop.flows.push_back(base);
        pop.session_s = 0.0;

        pop.qos_flow_rate_hz = 800.0;
        pop.qos_flow_hold_s = 0.01;
        cli::FlowConfig churn;
        churn.arp.priority_level = spec.arp;
        churn.arp.preemption_capability = spec.capable;
        churn.arp.preemption_vulnerability = spec.vulnerable;
        churn.resource_type = core::ResourceType::Gbr;
        churn.snssai = core::Snssai{1, std::nullopt};
        churn.demand = spec.demand;
        pop.qos_flows.push_back(churn);
        cfg.populations.push_back(pop);
    }
    return cfg;
}

void criterion_6()
{
    auto t0 = Clock::now();
    std::mt19937_64 gen(424242);
    int matched = 0;
    int preempts = 0;
    int rejects = 0;
    std::string first_why;
    const int instances = 1000;
    for (int i = 0; i < instances; ++i) {
        std::string why;
        auto kind = admission::AdmissionDecision::Kind::Admit;
        if (oracle_instance(gen, why, kind)) {
            ++matched;
        } else if (first_why.empty()) {
            std::ostringstream s;
            s << "instance " << i << ": " << why;
            first_why = s.str();
        }
        if (kind == admission::AdmissionDecision::Kind::PreemptAndAdmit) {
            ++preempts;
        } else if (kind == admission::AdmissionDecision::Kind::Reject) {
            ++rejects;
        }
    }

    auto cfg = soak_config();
    sim::RunOptions opts;
    opts.audit = true;
    auto r = sim::run(cfg, cfg.default_seed, opts);
    bool eviction_rule_ok = true;
    for (const auto& ev : r.evictions) {
        if (!(ev.victim_arp > ev.incoming_arp) || !ev.victim_vulnerable) {
            eviction_rule_ok = false;
        }
    }
    bool soak_ok = r.events_processed >= 1000000 && r.audit_violations.empty() &&
                   eviction_rule_ok && !r.evictions.empty();

    double elapsed = seconds_since(t0);
    std::ostringstream d;
    d << matched << "/" << instances << " oracle matches (" << preempts << " preempt, "
      << rejects << " reject)";
    if (!first_why.empty()) {
        d << " [" << first_why << "]";
    }
    d << "; soak events=" << r.events_processed << " evictions=" << r.evictions.size()
      << " audit_violations=" << r.audit_violations.size() << ", " << elapsed << " s";
    bool ok = matched == instances && preempts >= 50 && rejects >= 50 && soak_ok;
    report(6, "preemption_oracle_and_soak", ok, d.str());
}

// ---- criterion 7: slice isolation -----------------------------------------

void criterion_7()
{
    auto cfg = load_scenario("slice_contention.json");
    auto busy = sim::run(cfg, cfg.default_seed);

    auto idle_cfg = cfg;
    for (auto& pop : idle_cfg.populations) {
        if (pop.name == "slice_a") {
            pop.traffic.kind = cli::TrafficConfig::Kind::None;
            pop.qos_flow_rate_hz = 0.0;
        }
    }
    auto idle = sim::run(idle_cfg, idle_cfg.default_seed);

    auto digest = [](const sim::RunReport& r, const std::string& tag) -> std::uint64_t {
        auto it = r.slice_digests.find(tag);
        return it == r.slice_digests.end() ? 0 : it->second;
    };
    std::uint64_t b_busy = digest(busy, "2");
    std::uint64_t b_idle = digest(idle, "2");
    std::uint64_t a_busy = digest(busy, "1");
    std::uint64_t a_idle = digest(idle, "1");

    bool ok = b_busy != 0 && b_busy == b_idle && a_busy != a_idle &&
              busy.metrics.total(sim::metric::kRejects) > 0 &&
              idle.metrics.total(sim::metric::kAttempts) > 0;
    std::ostringstream d;
    d << "slice B digest " << b_busy << " (A saturated) vs " << b_idle
      << " (A idle); A digests differ=" << (a_busy != a_idle)
      << "; saturated-run rejects=" << busy.metrics.total(sim::metric::kRejects);
    report(7, "slice_isolation", ok, d.str());
}

// ---- criterion 8: waitTime semantics ---------------------------------------

void criterion_8()
{
    auto cfg = load_scenario("wait_time_demo.json");
    sim::RunOptions opts;
    opts.keep_event_lines = true;
    auto r = sim::run(cfg, cfg.default_seed, opts);

    struct UeWatch {
        SimTime wait_set_at = -1;
        SimTime wait_until = -1;
        int current_ac = -1;
    };
    std::map<long long, UeWatch> watch;
    int windows = 0;
    int checked_evals = 0;
    int violations = 0;
    int ra_violations = 0;
    int emergency_ok = 0;

    for (const auto& raw : r.event_lines) {
        auto line = parse_line(raw);
        long long ue = line.num("ue");
        if (ue < 0) {
            continue;
        }
        auto& w = watch[ue];
        bool in_window = w.wait_until >= 0 && line.t > w.wait_set_at &&
                         line.t < w.wait_until;
        if (line.ev == "attempt_start") {
            w.current_ac = static_cast<int>(line.num("ac"));
        } else if (line.ev == "uac") {
            int ac = static_cast<int>(line.num("ac"));
            if (in_window && ac != 0 && ac != 2) {
                ++checked_evals;
                if (line.str("outcome") != "wait_barred") {
                    ++violations;
                }
            }
            if (in_window && ac == 2 && line.str("outcome") == "allowed") {
                ++emergency_ok;
            }
        } else if (line.ev == "ra_tx") {
            if (in_window && w.current_ac != 0 && w.current_ac != 2) {
                ++ra_violations;
            }
        } else if (line.ev == "dl" && line.str("outcome") == "rejected") {
            long long wait_us = line.num("wait_us", -1);
            if (wait_us >= 0) {
                w.wait_set_at = line.t;
                w.wait_until = line.t + wait_us;
                ++windows;
            }
        }
    }

    bool ok = windows > 0 && checked_evals > 0 && violations == 0 &&
              ra_violations == 0 && emergency_ok >= 1;
    std::ostringstream d;
    d << windows << " wait windows, " << checked_evals
      << " in-window non-exempt evaluations all wait_barred=" << (violations == 0)
      << ", in-window transmissions under non-exempt AC=" << ra_violations
      << ", in-window emergencies reaching UAC and allowed=" << emergency_ok;
    report(8, "wait_time_semantics", ok, d.str());
}

// ---- criterion 9: paging control -------------------------------------------

void criterion_9()
{
    auto cfg = load_scenario("paging_storm.json");
    sim::RunOptions opts;
    opts.keep_event_lines = true;
    auto r = sim::run(cfg, cfg.default_seed, opts);

    std::map<long long, SimTime> discard_us;
    std::map<long long, double> cell_capacity_hz;
    for (const auto& cell : cfg.cells) {
        discard_us[cell.id] = cell.paging.cycle * cell.paging.discard_cycles;
        cell_capacity_hz[cell.id] = static_cast<double>(cell.paging.budget) /
                                    to_seconds(cell.paging.cycle);
    }
    double offered_hz = 0.0;
    for (const auto& pop : cfg.populations) {
        offered_hz += pop.paging.rate_hz;
    }
    // The storm premise: per-cell paging capacity below the offered rate.
    bool overloaded = true;
    for (const auto& [id, cap] : cell_capacity_hz) {
        if (cap >= offered_hz) {
            overloaded = false;
        }
    }

    int cycles = 0;
    int priority_violations = 0;
    int stale_violations = 0;
    int cycles_with_deferral = 0;
    int cycles_with_drops = 0;
    for (const auto& raw : r.event_lines) {
        if (raw.find(" ev=paging_cycle ") == std::string::npos) {
            continue;
        }
        auto line = parse_line(raw);
        ++cycles;
        long long paged_maxp = line.num("paged_maxp");
        long long deferred_minp = line.num("deferred_minp");
        long long drop_age = line.num("drop_min_age_us");
        long long cell = line.num("cell");
        if (deferred_minp >= 0) {
            ++cycles_with_deferral;
        }
        if (paged_maxp >= 0 && deferred_minp >= 0 && paged_maxp > deferred_minp) {
            ++priority_violations;
        }
        if (drop_age >= 0) {
            ++cycles_with_drops;
            if (drop_age <= discard_us[cell]) {
                ++stale_violations;
            }
        }
    }

    bool ok = overloaded && cycles > 0 && cycles_with_deferral > 0 &&
              cycles_with_drops > 0 && priority_violations == 0 &&
              stale_violations == 0 &&
              r.metrics.total(sim::metric::kPagingDropped) > 0;
    std::ostringstream d;
    d << cycles << " cycles, " << cycles_with_deferral << " with deferrals, "
      << cycles_with_drops << " with drops; priority violations=" << priority_violations
      << ", premature drops=" << stale_violations
      << ", dropped total=" << r.metrics.total(sim::metric::kPagingDropped);
    report(9, "paging_control", ok, d.str());
}

// ---- criterion 10: determinism ----------------------------------------------

void criterion_10(Clock::time_point suite_start)
{
    const char* scenarios[] = {"mc_surge.json",        "npn_reservation.json",
                               "massive_iot_burst.json", "slice_contention.json",
                               "paging_storm.json",    "wait_time_demo.json"};
    const char* files[] = {"summary.txt", "metrics.csv", "metrics.json",
                           "eventlog.hash"};

    fs::path base = fs::temp_directory_path() / "accessim_acceptance";
    std::error_code ec;
    fs::remove_all(base, ec);
    fs::create_directories(base);

    bool ok = true;
    std::ostringstream d;
    for (const char* name : scenarios) {
        auto cfg = load_scenario(name);
        auto a = sim::run(cfg, cfg.default_seed);
        auto b = sim::run(cfg, cfg.default_seed);
        if (a.eventlog_digest != b.eventlog_digest || a.slice_digests != b.slice_digests) {
            ok = false;
            d << cfg.name << ": digest mismatch; ";
            continue;
        }
        fs::path dir_a = base / (cfg.name + "_a");
        fs::path dir_b = base / (cfg.name + "_b");
        cli::write_report(cfg, cfg.default_seed, a, {dir_a.string(), true, true});
        cli::write_report(cfg, cfg.default_seed, b, {dir_b.string(), true, true});
        for (const char* f : files) {
            auto bytes_a = read_file(dir_a / f);
            auto bytes_b = read_file(dir_b / f);
            if (bytes_a.empty() || bytes_a != bytes_b) {
                ok = false;
                d << cfg.name << "/" << f << ": bytes differ; ";
            }
        }
    }
    double suite_elapsed = seconds_since(suite_start);
    bool time_ok = suite_elapsed < 120.0;
    d << "6 scenarios x 2 runs byte-identical=" << ok << "; suite " << suite_elapsed
      << " s (limit 120 s)";
    report(10, "determinism", ok && time_ok, d.str());
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: acceptance <scenario-dir>\n";
        return 2;
    }
    g_scenario_dir = argv[1];
    auto suite_start = Clock::now();
    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criterion_8();
        criterion_9();
        criterion_10(suite_start);
    } catch (const std::exception& e) {
        std::cout << "[FAIL] acceptance aborted: " << e.what() << "\n";
        return 1;
    }
    std::cout << (g_failures == 0 ? "acceptance: all criteria passed"
                                  : "acceptance: FAILURES") << "\n";
    return g_failures == 0 ? 0 : 1;
}
