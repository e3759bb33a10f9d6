#include "accessim/cli/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

namespace accessim::cli {
namespace {

using nlohmann::json;
using Errors = std::vector<ValidationError>;

SimTime millis_in(double v) { return static_cast<SimTime>(std::llround(v * 1000.0)); }
double millis_out(SimTime t) { return static_cast<double>(t) / 1000.0; }

const json* child(const json& j, const char* key)
{
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

std::string idx(const std::string& path, const char* field, std::size_t i)
{
    std::ostringstream s;
    s << path << '.' << field << '[' << i << ']';
    return s.str();
}

/// Flags typos: every key must be one the loader knows.
void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed, Errors& errors)
{
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed) {
            if (item.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            errors.push_back({join(path, item.key()), "unknown key"});
        }
    }
}

bool get_bool(const json& j, const std::string& path, const char* key, bool def,
              Errors& errors)
{
    const json* c = child(j, key);
    if (c == nullptr) {
        return def;
    }
    if (!c->is_boolean()) {
        errors.push_back({join(path, key), "expected a boolean"});
        return def;
    }
    return c->get<bool>();
}

double get_num(const json& j, const std::string& path, const char* key, double def,
               Errors& errors)
{
    const json* c = child(j, key);
    if (c == nullptr) {
        return def;
    }
    if (!c->is_number()) {
        errors.push_back({join(path, key), "expected a number"});
        return def;
    }
    return c->get<double>();
}

std::int64_t get_int(const json& j, const std::string& path, const char* key,
                     std::int64_t def, Errors& errors)
{
    const json* c = child(j, key);
    if (c == nullptr) {
        return def;
    }
    if (!c->is_number_integer() && !c->is_number_unsigned()) {
        errors.push_back({join(path, key), "expected an integer"});
        return def;
    }
    return c->get<std::int64_t>();
}

std::string get_str(const json& j, const std::string& path, const char* key,
                    const std::string& def, Errors& errors)
{
    const json* c = child(j, key);
    if (c == nullptr) {
        return def;
    }
    if (!c->is_string()) {
        errors.push_back({join(path, key), "expected a string"});
        return def;
    }
    return c->get<std::string>();
}

core::PlmnId get_plmn(const json& j, const std::string& path, const char* key,
                      core::PlmnId def, Errors& errors)
{
    const json* c = child(j, key);
    if (c == nullptr) {
        return def;
    }
    if (!c->is_string()) {
        errors.push_back({join(path, key), "expected a string like \"001-01\""});
        return def;
    }
    auto plmn = core::parse_plmn(c->get<std::string>());
    if (!plmn) {
        errors.push_back({join(path, key),
                          "not a PLMN id (want \"mcc-mnc\", e.g. \"001-01\")"});
        return def;
    }
    return *plmn;
}

core::Snssai get_snssai(const json& j, const std::string& path, const char* key,
                        core::Snssai def, Errors& errors)
{
    const json* c = child(j, key);
    if (c == nullptr) {
        return def;
    }
    if (!c->is_string()) {
        errors.push_back({join(path, key), "expected a string like \"1\" or \"1-2\""});
        return def;
    }
    auto s = core::parse_snssai(c->get<std::string>());
    if (!s) {
        errors.push_back({join(path, key), "not an S-NSSAI (want \"sst\" or \"sst-sd\")"});
        return def;
    }
    return *s;
}

template <typename T>
std::vector<T> get_int_array(const json& j, const std::string& path, const char* key,
                             Errors& errors)
{
    std::vector<T> out;
    const json* c = child(j, key);
    if (c == nullptr) {
        return out;
    }
    if (!c->is_array()) {
        errors.push_back({join(path, key), "expected an array of integers"});
        return out;
    }
    for (std::size_t i = 0; i < c->size(); ++i) {
        const json& e = (*c)[i];
        if (!e.is_number_integer() && !e.is_number_unsigned()) {
            errors.push_back({idx(path, key, i), "expected an integer"});
            continue;
        }
        out.push_back(e.get<T>());
    }
    return out;
}

// ---- section parsers --------------------------------------------------------

preventive::CellAccessInfo parse_access(const json& j, const std::string& path,
                                        Errors& errors)
{
    preventive::CellAccessInfo out;
    check_keys(j, path,
               {"cell_barred", "reserved_for_operator_use", "reserved_for_other_use",
                "reserved_for_future_use", "npn_ids", "plmn_ids",
                "barred_retry_interval_s"},
               errors);
    out.cell_barred = get_bool(j, path, "cell_barred", out.cell_barred, errors);
    out.reserved_for_operator_use = get_bool(j, path, "reserved_for_operator_use",
                                             out.reserved_for_operator_use, errors);
    out.reserved_for_other_use =
        get_bool(j, path, "reserved_for_other_use", out.reserved_for_other_use, errors);
    out.reserved_for_future_use =
        get_bool(j, path, "reserved_for_future_use", out.reserved_for_future_use, errors);
    for (auto v : get_int_array<std::uint32_t>(j, path, "npn_ids", errors)) {
        out.npn_ids.insert(v);
    }
    if (const json* c = child(j, "plmn_ids")) {
        if (!c->is_array()) {
            errors.push_back({path + ".plmn_ids", "expected an array of PLMN strings"});
        } else {
            for (std::size_t i = 0; i < c->size(); ++i) {
                const json& e = (*c)[i];
                auto plmn = e.is_string() ? core::parse_plmn(e.get<std::string>())
                                          : std::nullopt;
                if (!plmn) {
                    errors.push_back({idx(path, "plmn_ids", i), "not a PLMN id"});
                    continue;
                }
                out.plmn_ids.push_back(*plmn);
            }
        }
    }
    out.barred_retry_interval = from_seconds(get_num(
        j, path, "barred_retry_interval_s", to_seconds(out.barred_retry_interval), errors));
    return out;
}

ra::RachConfig parse_rach(const json& j, const std::string& path, Errors& errors)
{
    ra::RachConfig out;
    check_keys(j, path,
               {"n_preambles", "occasion_period_ms", "backoff_indicator_ms",
                "initial_power_dbm", "power_ramping_step_db", "detection_threshold_dbm",
                "max_attempts", "mode", "two_step_allowed", "beam_change_probability",
                "prioritized", "msg_latencies_ms"},
               errors);
    out.n_preambles =
        static_cast<int>(get_int(j, path, "n_preambles", out.n_preambles, errors));
    out.occasion_period = millis_in(
        get_num(j, path, "occasion_period_ms", millis_out(out.occasion_period), errors));
    out.backoff_indicator = millis_in(get_num(j, path, "backoff_indicator_ms",
                                              millis_out(out.backoff_indicator), errors));
    out.initial_power_dbm =
        get_num(j, path, "initial_power_dbm", out.initial_power_dbm, errors);
    out.power_ramping_step_db =
        get_num(j, path, "power_ramping_step_db", out.power_ramping_step_db, errors);
    out.detection_threshold_dbm =
        get_num(j, path, "detection_threshold_dbm", out.detection_threshold_dbm, errors);
    out.max_attempts =
        static_cast<int>(get_int(j, path, "max_attempts", out.max_attempts, errors));
    std::string mode = get_str(j, path, "mode", "four_step", errors);
    if (mode == "four_step") {
        out.mode = ra::RaMode::FourStep;
    } else if (mode == "two_step") {
        out.mode = ra::RaMode::TwoStep;
    } else {
        errors.push_back({path + ".mode", "expected \"four_step\" or \"two_step\""});
    }
    out.two_step_allowed =
        get_bool(j, path, "two_step_allowed", out.two_step_allowed, errors);
    out.beam_change_probability = get_num(j, path, "beam_change_probability",
                                          out.beam_change_probability, errors);
    if (const json* c = child(j, "prioritized")) {
        std::string p = path + ".prioritized";
        if (!c->is_object()) {
            errors.push_back({p, "expected an object"});
        } else {
            check_keys(*c, p, {"enabled", "backoff_scaling", "power_ramping_step_high_db"},
                       errors);
            out.prioritized.enabled =
                get_bool(*c, p, "enabled", out.prioritized.enabled, errors);
            out.prioritized.backoff_scaling = get_num(
                *c, p, "backoff_scaling", out.prioritized.backoff_scaling, errors);
            out.prioritized.power_ramping_step_high_db =
                get_num(*c, p, "power_ramping_step_high_db",
                        out.prioritized.power_ramping_step_high_db, errors);
        }
    }
    if (const json* c = child(j, "msg_latencies_ms")) {
        if (!c->is_array()) {
            errors.push_back({path + ".msg_latencies_ms", "expected an array of numbers"});
        } else {
            for (std::size_t i = 0; i < c->size(); ++i) {
                const json& e = (*c)[i];
                if (!e.is_number()) {
                    errors.push_back({idx(path, "msg_latencies_ms", i),
                                      "expected a number"});
                    continue;
                }
                out.msg_latencies.push_back(millis_in(e.get<double>()));
            }
        }
    }
    return out;
}

preventive::UacConfig parse_uac(const json& j, const std::string& path, Errors& errors)
{
    preventive::UacConfig out;
    check_keys(j, path, {"jittered_barring_time", "entries"}, errors);
    out.jittered_barring_time =
        get_bool(j, path, "jittered_barring_time", out.jittered_barring_time, errors);
    const json* entries = child(j, "entries");
    if (entries == nullptr) {
        return out;
    }
    if (!entries->is_object()) {
        errors.push_back({path + ".entries", "expected an object keyed by access category"});
        return out;
    }
    for (const auto& item : entries->items()) {
        std::string epath = path + ".entries." + item.key();
        int ac = -1;
        try {
            std::size_t pos = 0;
            ac = std::stoi(item.key(), &pos);
            if (pos != item.key().size()) {
                ac = -1;
            }
        } catch (...) {
            ac = -1;
        }
        if (ac < 0) {
            errors.push_back({epath, "key must be an access category number"});
            continue;
        }
        if (!item.value().is_object()) {
            errors.push_back({epath, "expected an object"});
            continue;
        }
        check_keys(item.value(), epath, {"barring_factor", "barring_time_s", "ai_allowed"},
                   errors);
        preventive::UacBarringEntry entry;
        entry.barring_factor =
            get_num(item.value(), epath, "barring_factor", entry.barring_factor, errors);
        entry.barring_time = from_seconds(get_num(item.value(), epath, "barring_time_s",
                                                  to_seconds(entry.barring_time), errors));
        for (int ai : get_int_array<int>(item.value(), epath, "ai_allowed", errors)) {
            if (!core::ai_is_valid(ai)) {
                errors.push_back({epath + ".ai_allowed", "identity out of range"});
                continue;
            }
            entry.ai_allowed.insert(ai);
        }
        out.entries.emplace(ac, entry);
    }
    return out;
}

admission::AdmissionPolicy parse_admission(const json& j, const std::string& path,
                                           Errors& errors)
{
    admission::AdmissionPolicy out;
    check_keys(j, path,
               {"queueing", "queue_limit", "queue_timeout_s", "attach_wait_time",
                "wait_time_s", "delay_critical_boost", "plmn_quotas"},
               errors);
    out.queueing = get_bool(j, path, "queueing", out.queueing, errors);
    out.queue_limit = static_cast<std::size_t>(
        get_int(j, path, "queue_limit", static_cast<std::int64_t>(out.queue_limit), errors));
    out.queue_timeout = from_seconds(
        get_num(j, path, "queue_timeout_s", to_seconds(out.queue_timeout), errors));
    out.attach_wait_time =
        get_bool(j, path, "attach_wait_time", out.attach_wait_time, errors);
    out.wait_time =
        from_seconds(get_num(j, path, "wait_time_s", to_seconds(out.wait_time), errors));
    out.delay_critical_boost = static_cast<int>(
        get_int(j, path, "delay_critical_boost", out.delay_critical_boost, errors));
    if (const json* c = child(j, "plmn_quotas")) {
        if (!c->is_object()) {
            errors.push_back({path + ".plmn_quotas", "expected an object keyed by PLMN"});
        } else {
            for (const auto& item : c->items()) {
                auto plmn = core::parse_plmn(item.key());
                if (!plmn) {
                    errors.push_back({path + ".plmn_quotas." + item.key(),
                                      "key is not a PLMN id"});
                    continue;
                }
                if (!item.value().is_number_integer() &&
                    !item.value().is_number_unsigned()) {
                    errors.push_back({path + ".plmn_quotas." + item.key(),
                                      "expected an integer"});
                    continue;
                }
                out.plmn_quotas[*plmn] = item.value().get<std::uint64_t>();
            }
        }
    }
    return out;
}

PagingConfig parse_paging_cfg(const json& j, const std::string& path, Errors& errors)
{
    PagingConfig out;
    check_keys(j, path, {"cycle_ms", "budget", "discard_cycles", "priority_levels"},
               errors);
    out.cycle = millis_in(get_num(j, path, "cycle_ms", millis_out(out.cycle), errors));
    out.budget = static_cast<std::uint64_t>(
        get_int(j, path, "budget", static_cast<std::int64_t>(out.budget), errors));
    out.discard_cycles =
        static_cast<int>(get_int(j, path, "discard_cycles", out.discard_cycles, errors));
    out.priority_levels =
        static_cast<int>(get_int(j, path, "priority_levels", out.priority_levels, errors));
    return out;
}

CellConfig parse_cell(const json& j, const std::string& path, Errors& errors)
{
    CellConfig out;
    check_keys(j, path,
               {"id", "gnb", "tracking_area", "access", "rach", "uac", "pools",
                "shared_capacity", "admission", "paging"},
               errors);
    out.id = static_cast<core::CellId>(get_int(j, path, "id", 0, errors));
    out.gnb = static_cast<core::GnbId>(get_int(j, path, "gnb", 0, errors));
    out.tracking_area =
        static_cast<std::uint32_t>(get_int(j, path, "tracking_area", 0, errors));
    if (const json* c = child(j, "access")) {
        if (c->is_object()) {
            out.access = parse_access(*c, path + ".access", errors);
        } else {
            errors.push_back({path + ".access", "expected an object"});
        }
    }
    if (const json* c = child(j, "rach")) {
        if (c->is_object()) {
            out.rach = parse_rach(*c, path + ".rach", errors);
        } else {
            errors.push_back({path + ".rach", "expected an object"});
        }
    }
    if (const json* c = child(j, "uac")) {
        if (c->is_object()) {
            out.uac = parse_uac(*c, path + ".uac", errors);
        } else {
            errors.push_back({path + ".uac", "expected an object"});
        }
    }
    if (const json* c = child(j, "pools")) {
        if (!c->is_array()) {
            errors.push_back({path + ".pools", "expected an array"});
        } else {
            for (std::size_t i = 0; i < c->size(); ++i) {
                std::string p = idx(path, "pools", i);
                const json& e = (*c)[i];
                if (!e.is_object()) {
                    errors.push_back({p, "expected an object"});
                    continue;
                }
                check_keys(e, p, {"snssai", "dedicated_capacity"}, errors);
                admission::SlicePool pool;
                pool.snssai = get_snssai(e, p, "snssai", pool.snssai, errors);
                pool.dedicated_capacity = static_cast<std::uint64_t>(
                    get_int(e, p, "dedicated_capacity", 0, errors));
                out.pools.push_back(pool);
            }
        }
    }
    out.shared_capacity =
        static_cast<std::uint64_t>(get_int(j, path, "shared_capacity", 0, errors));
    if (const json* c = child(j, "admission")) {
        if (c->is_object()) {
            out.admission = parse_admission(*c, path + ".admission", errors);
        } else {
            errors.push_back({path + ".admission", "expected an object"});
        }
    }
    if (const json* c = child(j, "paging")) {
        if (c->is_object()) {
            out.paging = parse_paging_cfg(*c, path + ".paging", errors);
        } else {
            errors.push_back({path + ".paging", "expected an object"});
        }
    }
    return out;
}

std::vector<FlowConfig> parse_flows(const json& j, const std::string& path,
                                    const char* key, Errors& errors)
{
    std::vector<FlowConfig> out;
    const json* c = child(j, key);
    if (c == nullptr) {
        return out;
    }
    if (!c->is_array()) {
        errors.push_back({join(path, key), "expected an array"});
        return out;
    }
    for (std::size_t i = 0; i < c->size(); ++i) {
        std::string p = idx(path, key, i);
        const json& e = (*c)[i];
        if (!e.is_object()) {
            errors.push_back({p, "expected an object"});
            continue;
        }
        check_keys(e, p, {"arp", "resource_type", "snssai", "demand"}, errors);
        FlowConfig f;
        if (const json* a = child(e, "arp")) {
            std::string ap = p + ".arp";
            if (!a->is_object()) {
                errors.push_back({ap, "expected an object"});
            } else {
                check_keys(*a, ap,
                           {"priority_level", "preemption_capability",
                            "preemption_vulnerability"},
                           errors);
                f.arp.priority_level = static_cast<int>(
                    get_int(*a, ap, "priority_level", f.arp.priority_level, errors));
                f.arp.preemption_capability = get_bool(
                    *a, ap, "preemption_capability", f.arp.preemption_capability, errors);
                f.arp.preemption_vulnerability =
                    get_bool(*a, ap, "preemption_vulnerability",
                             f.arp.preemption_vulnerability, errors);
            }
        }
        std::string rt = get_str(e, p, "resource_type", "non_gbr", errors);
        if (auto parsed = core::parse_resource_type(rt)) {
            f.resource_type = *parsed;
        } else {
            errors.push_back(
                {p + ".resource_type", "expected gbr, delay_critical_gbr or non_gbr"});
        }
        f.snssai = get_snssai(e, p, "snssai", f.snssai, errors);
        f.demand = static_cast<std::uint64_t>(get_int(e, p, "demand", 0, errors));
        out.push_back(f);
    }
    return out;
}

PopulationConfig parse_population(const json& j, const std::string& path, Errors& errors)
{
    PopulationConfig out;
    check_keys(j, path,
               {"name", "count", "cell", "ue", "traffic", "paging_load", "cause_mix",
                "delay_tolerant", "exception_data", "nas_signalling", "operator_ac",
                "flows", "session_s", "release_to", "qos_flow_rate_hz", "qos_flow_hold_s",
                "qos_flows", "tracking_areas", "rna_cells"},
               errors);
    out.name = get_str(j, path, "name", "", errors);
    out.count = static_cast<std::uint64_t>(get_int(j, path, "count", 0, errors));
    out.cell = static_cast<core::CellId>(get_int(j, path, "cell", 0, errors));

    if (const json* c = child(j, "ue")) {
        std::string p = path + ".ue";
        if (!c->is_object()) {
            errors.push_back({p, "expected an object"});
        } else {
            check_keys(*c, p,
                       {"access_identities", "home_plmn", "in_home_country",
                        "in_home_plmn", "npn_authorized", "initial_state"},
                       errors);
            out.ue.access_identities = get_int_array<int>(*c, p, "access_identities",
                                                          errors);
            out.ue.home_plmn = get_plmn(*c, p, "home_plmn", out.ue.home_plmn, errors);
            out.ue.in_home_country =
                get_bool(*c, p, "in_home_country", out.ue.in_home_country, errors);
            out.ue.in_home_plmn =
                get_bool(*c, p, "in_home_plmn", out.ue.in_home_plmn, errors);
            out.ue.npn_authorized =
                get_int_array<std::uint32_t>(*c, p, "npn_authorized", errors);
            std::string st = get_str(*c, p, "initial_state", "idle", errors);
            if (st == "idle") {
                out.ue.initial_state = core::RrcState::Idle;
            } else if (st == "inactive") {
                out.ue.initial_state = core::RrcState::Inactive;
            } else if (st == "connected") {
                out.ue.initial_state = core::RrcState::Connected;
            } else {
                errors.push_back({p + ".initial_state", "expected idle or inactive"});
            }
        }
    }

    if (const json* c = child(j, "traffic")) {
        std::string p = path + ".traffic";
        if (!c->is_object()) {
            errors.push_back({p, "expected an object"});
        } else {
            check_keys(*c, p, {"kind", "rate_per_ue_hz", "at_s", "jitter_s"}, errors);
            std::string kind = get_str(*c, p, "kind", "none", errors);
            if (kind == "none") {
                out.traffic.kind = TrafficConfig::Kind::None;
            } else if (kind == "poisson") {
                out.traffic.kind = TrafficConfig::Kind::Poisson;
            } else if (kind == "burst") {
                out.traffic.kind = TrafficConfig::Kind::Burst;
            } else {
                errors.push_back({p + ".kind", "expected none, poisson or burst"});
            }
            out.traffic.rate_per_ue_hz =
                get_num(*c, p, "rate_per_ue_hz", out.traffic.rate_per_ue_hz, errors);
            out.traffic.at =
                from_seconds(get_num(*c, p, "at_s", to_seconds(out.traffic.at), errors));
            out.traffic.jitter = from_seconds(
                get_num(*c, p, "jitter_s", to_seconds(out.traffic.jitter), errors));
        }
    }

    if (const json* c = child(j, "paging_load")) {
        std::string p = path + ".paging_load";
        if (!c->is_object()) {
            errors.push_back({p, "expected an object"});
        } else {
            check_keys(*c, p, {"rate_hz", "priority_mix"}, errors);
            out.paging.rate_hz = get_num(*c, p, "rate_hz", out.paging.rate_hz, errors);
            if (const json* mix = child(*c, "priority_mix")) {
                if (!mix->is_array()) {
                    errors.push_back(
                        {p + ".priority_mix", "expected an array of [priority, weight]"});
                } else {
                    for (std::size_t i = 0; i < mix->size(); ++i) {
                        const json& e = (*mix)[i];
                        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
                            !e[1].is_number()) {
                            errors.push_back({idx(p, "priority_mix", i),
                                              "expected [priority, weight]"});
                            continue;
                        }
                        out.paging.priority_mix.emplace_back(e[0].get<int>(),
                                                             e[1].get<double>());
                    }
                }
            }
        }
    }

    if (const json* c = child(j, "cause_mix")) {
        std::string p = path + ".cause_mix";
        if (!c->is_array()) {
            errors.push_back({p, "expected an array"});
        } else {
            for (std::size_t i = 0; i < c->size(); ++i) {
                std::string ep = idx(path, "cause_mix", i);
                const json& e = (*c)[i];
                if (!e.is_object()) {
                    errors.push_back({ep, "expected an object"});
                    continue;
                }
                check_keys(e, ep, {"cause", "weight"}, errors);
                CauseMixEntry entry;
                std::string cause = get_str(e, ep, "cause", "mo_data", errors);
                if (auto parsed = core::parse_cause(cause)) {
                    entry.cause = *parsed;
                } else {
                    errors.push_back({ep + ".cause", "unknown establishment cause"});
                }
                entry.weight = get_num(e, ep, "weight", entry.weight, errors);
                out.cause_mix.push_back(entry);
            }
        }
    }

    out.delay_tolerant = get_bool(j, path, "delay_tolerant", out.delay_tolerant, errors);
    out.exception_data = get_bool(j, path, "exception_data", out.exception_data, errors);
    out.nas_signalling = get_bool(j, path, "nas_signalling", out.nas_signalling, errors);
    if (child(j, "operator_ac") != nullptr) {
        out.operator_ac = static_cast<int>(get_int(j, path, "operator_ac", 0, errors));
    }

    out.flows = parse_flows(j, path, "flows", errors);
    out.session_s = get_num(j, path, "session_s", out.session_s, errors);
    std::string rel = get_str(j, path, "release_to", "idle", errors);
    if (rel == "idle") {
        out.release_to = PopulationConfig::ReleaseTo::Idle;
    } else if (rel == "inactive") {
        out.release_to = PopulationConfig::ReleaseTo::Inactive;
    } else {
        errors.push_back({path + ".release_to", "expected idle or inactive"});
    }
    out.qos_flow_rate_hz =
        get_num(j, path, "qos_flow_rate_hz", out.qos_flow_rate_hz, errors);
    out.qos_flow_hold_s = get_num(j, path, "qos_flow_hold_s", out.qos_flow_hold_s, errors);
    out.qos_flows = parse_flows(j, path, "qos_flows", errors);
    out.tracking_areas = get_int_array<std::uint32_t>(j, path, "tracking_areas", errors);
    out.rna_cells = get_int_array<core::CellId>(j, path, "rna_cells", errors);
    return out;
}

// ---- validation --------------------------------------------------------------

void validate_cell(const CellConfig& cell, const std::string& path, Errors& errors)
{
    for (std::size_t i = 0; i < cell.access.plmn_ids.size(); ++i) {
        if (!cell.access.plmn_ids[i].valid()) {
            errors.push_back({idx(path, "access.plmn_ids", i), "invalid PLMN id"});
        }
    }
    if (cell.access.barred_retry_interval <= 0) {
        errors.push_back({path + ".access.barred_retry_interval_s", "must be positive"});
    }

    const auto& rach = cell.rach;
    std::string rp = path + ".rach";
    if (rach.n_preambles < 1 || rach.n_preambles > 64) {
        errors.push_back({rp + ".n_preambles", "must be in 1..64"});
    }
    if (rach.occasion_period <= 0) {
        errors.push_back({rp + ".occasion_period_ms", "must be positive"});
    }
    if (rach.backoff_indicator < 0) {
        errors.push_back({rp + ".backoff_indicator_ms", "must not be negative"});
    }
    if (rach.max_attempts < 1) {
        errors.push_back({rp + ".max_attempts", "must be at least 1"});
    }
    if (rach.mode == ra::RaMode::TwoStep && !rach.two_step_allowed) {
        errors.push_back({rp + ".mode", "two_step requires two_step_allowed"});
    }
    if (rach.beam_change_probability < 0.0 || rach.beam_change_probability > 1.0) {
        errors.push_back({rp + ".beam_change_probability", "must be in [0, 1]"});
    }
    if (rach.prioritized.enabled) {
        if (rach.prioritized.backoff_scaling <= 0.0 ||
            rach.prioritized.backoff_scaling > 1.0) {
            errors.push_back({rp + ".prioritized.backoff_scaling", "must be in (0, 1]"});
        }
        if (rach.prioritized.power_ramping_step_high_db < rach.power_ramping_step_db) {
            errors.push_back({rp + ".prioritized.power_ramping_step_high_db",
                              "must be at least power_ramping_step_db"});
        }
    }
    if (!rach.msg_latencies.empty() &&
        rach.msg_latencies.size() != static_cast<std::size_t>(rach.messages_per_access())) {
        errors.push_back({rp + ".msg_latencies_ms",
                          "must have one entry per message of the selected mode"});
    }

    for (const auto& [ac, entry] : cell.uac.entries) {
        std::string ep = path + ".uac.entries." + std::to_string(ac);
        if (ac == 0) {
            errors.push_back({ep, "category 0 is never barred and takes no entry"});
        } else if (!core::AccessCategory::valid(ac)) {
            errors.push_back({ep, "access category out of range"});
        }
        if (entry.barring_factor < 0.0 || entry.barring_factor > 1.0) {
            errors.push_back({ep + ".barring_factor", "must be in [0, 1]"});
        }
        if (entry.barring_time <= 0) {
            errors.push_back({ep + ".barring_time_s", "must be positive"});
        }
        if (!entry.ai_allowed.is_subset_of(core::AiSet::high_priority())) {
            errors.push_back(
                {ep + ".ai_allowed", "only identities 1, 2 and 11..15 carry allow bits"});
        }
    }

    std::set<core::Snssai> seen;
    for (std::size_t i = 0; i < cell.pools.size(); ++i) {
        if (!seen.insert(cell.pools[i].snssai).second) {
            errors.push_back({idx(path, "pools", i), "duplicate slice pool"});
        }
    }

    std::string ap = path + ".admission";
    if (cell.admission.queueing && cell.admission.queue_limit < 1) {
        errors.push_back({ap + ".queue_limit", "must be at least 1 when queueing"});
    }
    if (cell.admission.queue_timeout <= 0) {
        errors.push_back({ap + ".queue_timeout_s", "must be positive"});
    }
    if (cell.admission.wait_time <= 0) {
        errors.push_back({ap + ".wait_time_s", "must be positive"});
    }
    if (cell.admission.delay_critical_boost < 0) {
        errors.push_back({ap + ".delay_critical_boost", "must not be negative"});
    }

    std::string pp = path + ".paging";
    if (cell.paging.cycle <= 0) {
        errors.push_back({pp + ".cycle_ms", "must be positive"});
    }
    if (cell.paging.budget < 1) {
        errors.push_back({pp + ".budget", "must be at least 1"});
    }
    if (cell.paging.discard_cycles < 1) {
        errors.push_back({pp + ".discard_cycles", "must be at least 1"});
    }
    if (cell.paging.priority_levels < 1) {
        errors.push_back({pp + ".priority_levels", "must be at least 1"});
    }
}

void validate_flows(const std::vector<FlowConfig>& flows, const CellConfig* cell,
                    const std::string& path, const char* field, Errors& errors)
{
    for (std::size_t i = 0; i < flows.size(); ++i) {
        std::string p = idx(path, field, i);
        const auto& f = flows[i];
        if (f.arp.priority_level < 1 || f.arp.priority_level > 15) {
            errors.push_back({p + ".arp.priority_level", "must be in 1..15"});
        }
        if (f.resource_type != core::ResourceType::NonGbr && f.demand == 0) {
            errors.push_back({p + ".demand", "GBR flows must reserve at least 1 unit"});
        }
        if (cell != nullptr) {
            bool found = false;
            for (const auto& pool : cell->pools) {
                if (pool.snssai == f.snssai) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                errors.push_back({p + ".snssai", "slice " + core::to_string(f.snssai) +
                                                     " has no pool in cell " +
                                                     std::to_string(cell->id)});
            }
        }
    }
}

void validate_population(const PopulationConfig& pop, const ScenarioConfig& config,
                         const std::string& path, Errors& errors)
{
    if (pop.count < 1) {
        errors.push_back({path + ".count", "must be at least 1"});
    }
    const CellConfig* cell = config.find_cell(pop.cell);
    if (cell == nullptr) {
        errors.push_back({path + ".cell", "references a cell that does not exist"});
    }

    for (std::size_t i = 0; i < pop.ue.access_identities.size(); ++i) {
        int ai = pop.ue.access_identities[i];
        if (!core::ai_is_valid(ai) || core::ai_is_reserved(ai)) {
            errors.push_back(
                {idx(path, "ue.access_identities", i), "not an assignable identity"});
        }
    }
    if (!pop.ue.home_plmn.valid()) {
        errors.push_back({path + ".ue.home_plmn", "invalid PLMN id"});
    }
    if (pop.ue.initial_state == core::RrcState::Connected) {
        errors.push_back({path + ".ue.initial_state",
                          "connected is reachable only through an access attempt"});
    }

    std::string tp = path + ".traffic";
    if (pop.traffic.kind == TrafficConfig::Kind::Poisson &&
        pop.traffic.rate_per_ue_hz <= 0.0) {
        errors.push_back({tp + ".rate_per_ue_hz", "must be positive for poisson"});
    }
    if (pop.traffic.kind == TrafficConfig::Kind::Burst) {
        if (pop.traffic.at < 0) {
            errors.push_back({tp + ".at_s", "must not be negative"});
        }
        if (pop.traffic.jitter < 0) {
            errors.push_back({tp + ".jitter_s", "must not be negative"});
        }
    }

    if (!pop.cause_mix.empty()) {
        double sum = 0.0;
        for (std::size_t i = 0; i < pop.cause_mix.size(); ++i) {
            if (pop.cause_mix[i].weight <= 0.0) {
                errors.push_back({idx(path, "cause_mix", i) + ".weight",
                                  "must be positive"});
            }
            sum += pop.cause_mix[i].weight;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            errors.push_back({path + ".cause_mix", "weights must sum to 1"});
        }
    }

    if (pop.operator_ac && (*pop.operator_ac < 32 || *pop.operator_ac > 63)) {
        errors.push_back({path + ".operator_ac", "operator categories are 32..63"});
    }

    validate_flows(pop.flows, cell, path, "flows", errors);
    validate_flows(pop.qos_flows, cell, path, "qos_flows", errors);

    std::set<core::Snssai> slices;
    for (const auto& f : pop.flows) {
        slices.insert(f.snssai);
    }
    if (slices.size() > 8) {
        errors.push_back({path + ".flows", "a UE subscribes to at most 8 slices"});
    }

    if (pop.session_s < 0.0) {
        errors.push_back({path + ".session_s", "must not be negative"});
    }
    if (pop.qos_flow_rate_hz < 0.0) {
        errors.push_back({path + ".qos_flow_rate_hz", "must not be negative"});
    }
    if (pop.qos_flow_rate_hz > 0.0) {
        if (pop.qos_flow_hold_s <= 0.0) {
            errors.push_back(
                {path + ".qos_flow_hold_s", "must be positive when churn is enabled"});
        }
        if (pop.qos_flows.empty()) {
            errors.push_back(
                {path + ".qos_flows", "churn is enabled but requests no flows"});
        }
    }

    std::string lp = path + ".paging_load";
    if (pop.paging.rate_hz < 0.0) {
        errors.push_back({lp + ".rate_hz", "must not be negative"});
    }
    if (pop.paging.rate_hz > 0.0) {
        if (pop.paging.priority_mix.empty()) {
            errors.push_back({lp + ".priority_mix", "required when rate_hz is positive"});
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < pop.paging.priority_mix.size(); ++i) {
            auto [prio, weight] = pop.paging.priority_mix[i];
            if (weight <= 0.0) {
                errors.push_back({idx(lp, "priority_mix", i), "weight must be positive"});
            }
            if (prio < 1 || (cell != nullptr && prio > cell->paging.priority_levels)) {
                errors.push_back(
                    {idx(lp, "priority_mix", i), "priority outside the cell's levels"});
            }
            sum += weight;
        }
        if (!pop.paging.priority_mix.empty() && std::abs(sum - 1.0) > 1e-9) {
            errors.push_back({lp + ".priority_mix", "weights must sum to 1"});
        }
    }

    for (std::size_t i = 0; i < pop.rna_cells.size(); ++i) {
        if (config.find_cell(pop.rna_cells[i]) == nullptr) {
            errors.push_back(
                {idx(path, "rna_cells", i), "references a cell that does not exist"});
        }
    }
}

// ---- emit ---------------------------------------------------------------------

json emit_flows(const std::vector<FlowConfig>& flows)
{
    json out = json::array();
    for (const auto& f : flows) {
        json e;
        e["arp"] = {{"priority_level", f.arp.priority_level},
                    {"preemption_capability", f.arp.preemption_capability},
                    {"preemption_vulnerability", f.arp.preemption_vulnerability}};
        e["resource_type"] = core::to_string(f.resource_type);
        e["snssai"] = core::to_string(f.snssai);
        e["demand"] = f.demand;
        out.push_back(e);
    }
    return out;
}

json emit_cell(const CellConfig& cell)
{
    json j;
    j["id"] = cell.id;
    j["gnb"] = cell.gnb;
    j["tracking_area"] = cell.tracking_area;

    json access;
    access["cell_barred"] = cell.access.cell_barred;
    access["reserved_for_operator_use"] = cell.access.reserved_for_operator_use;
    access["reserved_for_other_use"] = cell.access.reserved_for_other_use;
    access["reserved_for_future_use"] = cell.access.reserved_for_future_use;
    access["npn_ids"] = json::array();
    for (auto id : cell.access.npn_ids) {
        access["npn_ids"].push_back(id);
    }
    access["plmn_ids"] = json::array();
    for (const auto& p : cell.access.plmn_ids) {
        access["plmn_ids"].push_back(core::to_string(p));
    }
    access["barred_retry_interval_s"] = to_seconds(cell.access.barred_retry_interval);
    j["access"] = access;

    json rach;
    rach["n_preambles"] = cell.rach.n_preambles;
    rach["occasion_period_ms"] = millis_out(cell.rach.occasion_period);
    rach["backoff_indicator_ms"] = millis_out(cell.rach.backoff_indicator);
    rach["initial_power_dbm"] = cell.rach.initial_power_dbm;
    rach["power_ramping_step_db"] = cell.rach.power_ramping_step_db;
    rach["detection_threshold_dbm"] = cell.rach.detection_threshold_dbm;
    rach["max_attempts"] = cell.rach.max_attempts;
    rach["mode"] = cell.rach.mode == ra::RaMode::FourStep ? "four_step" : "two_step";
    rach["two_step_allowed"] = cell.rach.two_step_allowed;
    rach["beam_change_probability"] = cell.rach.beam_change_probability;
    rach["prioritized"] = {
        {"enabled", cell.rach.prioritized.enabled},
        {"backoff_scaling", cell.rach.prioritized.backoff_scaling},
        {"power_ramping_step_high_db", cell.rach.prioritized.power_ramping_step_high_db}};
    rach["msg_latencies_ms"] = json::array();
    for (auto t : cell.rach.msg_latencies) {
        rach["msg_latencies_ms"].push_back(millis_out(t));
    }
    j["rach"] = rach;

    json uac;
    uac["jittered_barring_time"] = cell.uac.jittered_barring_time;
    uac["entries"] = json::object();
    for (const auto& [ac, entry] : cell.uac.entries) {
        json e;
        e["barring_factor"] = entry.barring_factor;
        e["barring_time_s"] = to_seconds(entry.barring_time);
        e["ai_allowed"] = entry.ai_allowed.values();
        uac["entries"][std::to_string(ac)] = e;
    }
    j["uac"] = uac;

    j["pools"] = json::array();
    for (const auto& pool : cell.pools) {
        j["pools"].push_back({{"snssai", core::to_string(pool.snssai)},
                              {"dedicated_capacity", pool.dedicated_capacity}});
    }
    j["shared_capacity"] = cell.shared_capacity;

    json adm;
    adm["queueing"] = cell.admission.queueing;
    adm["queue_limit"] = cell.admission.queue_limit;
    adm["queue_timeout_s"] = to_seconds(cell.admission.queue_timeout);
    adm["attach_wait_time"] = cell.admission.attach_wait_time;
    adm["wait_time_s"] = to_seconds(cell.admission.wait_time);
    adm["delay_critical_boost"] = cell.admission.delay_critical_boost;
    adm["plmn_quotas"] = json::object();
    for (const auto& [plmn, quota] : cell.admission.plmn_quotas) {
        adm["plmn_quotas"][core::to_string(plmn)] = quota;
    }
    j["admission"] = adm;

    j["paging"] = {{"cycle_ms", millis_out(cell.paging.cycle)},
                   {"budget", cell.paging.budget},
                   {"discard_cycles", cell.paging.discard_cycles},
                   {"priority_levels", cell.paging.priority_levels}};
    return j;
}

json emit_population(const PopulationConfig& pop)
{
    json j;
    j["name"] = pop.name;
    j["count"] = pop.count;
    j["cell"] = pop.cell;

    json ue;
    ue["access_identities"] = pop.ue.access_identities;
    ue["home_plmn"] = core::to_string(pop.ue.home_plmn);
    ue["in_home_country"] = pop.ue.in_home_country;
    ue["in_home_plmn"] = pop.ue.in_home_plmn;
    ue["npn_authorized"] = pop.ue.npn_authorized;
    ue["initial_state"] = core::to_string(pop.ue.initial_state);
    j["ue"] = ue;

    json traffic;
    switch (pop.traffic.kind) {
    case TrafficConfig::Kind::None:
        traffic["kind"] = "none";
        break;
    case TrafficConfig::Kind::Poisson:
        traffic["kind"] = "poisson";
        break;
    case TrafficConfig::Kind::Burst:
        traffic["kind"] = "burst";
        break;
    }
    traffic["rate_per_ue_hz"] = pop.traffic.rate_per_ue_hz;
    traffic["at_s"] = to_seconds(pop.traffic.at);
    traffic["jitter_s"] = to_seconds(pop.traffic.jitter);
    j["traffic"] = traffic;

    json paging;
    paging["rate_hz"] = pop.paging.rate_hz;
    paging["priority_mix"] = json::array();
    for (auto [prio, weight] : pop.paging.priority_mix) {
        paging["priority_mix"].push_back({prio, weight});
    }
    j["paging_load"] = paging;

    j["cause_mix"] = json::array();
    for (const auto& e : pop.cause_mix) {
        j["cause_mix"].push_back(
            {{"cause", core::to_string(e.cause)}, {"weight", e.weight}});
    }

    j["delay_tolerant"] = pop.delay_tolerant;
    j["exception_data"] = pop.exception_data;
    j["nas_signalling"] = pop.nas_signalling;
    if (pop.operator_ac) {
        j["operator_ac"] = *pop.operator_ac;
    }
    j["flows"] = emit_flows(pop.flows);
    j["session_s"] = pop.session_s;
    j["release_to"] =
        pop.release_to == PopulationConfig::ReleaseTo::Idle ? "idle" : "inactive";
    j["qos_flow_rate_hz"] = pop.qos_flow_rate_hz;
    j["qos_flow_hold_s"] = pop.qos_flow_hold_s;
    j["qos_flows"] = emit_flows(pop.qos_flows);
    j["tracking_areas"] = pop.tracking_areas;
    j["rna_cells"] = pop.rna_cells;
    return j;
}

} // namespace

std::vector<ValidationError> validate_scenario(const ScenarioConfig& config)
{
    Errors errors;
    if (config.duration_s <= 0.0) {
        errors.push_back({"duration_s", "must be positive"});
    }
    if (config.inter_gnb_delay < 0) {
        errors.push_back({"inter_gnb_delay_ms", "must not be negative"});
    }
    if (config.cells.empty()) {
        errors.push_back({"cells", "at least one cell is required"});
    }
    std::set<core::CellId> ids;
    for (std::size_t i = 0; i < config.cells.size(); ++i) {
        std::string path = "cells[" + std::to_string(i) + "]";
        if (!ids.insert(config.cells[i].id).second) {
            errors.push_back({path + ".id", "duplicate cell id"});
        }
        validate_cell(config.cells[i], path, errors);
    }
    for (std::size_t i = 0; i < config.populations.size(); ++i) {
        validate_population(config.populations[i], config,
                            "populations[" + std::to_string(i) + "]", errors);
    }
    return errors;
}

ParseResult parse_scenario_text(const std::string& text)
{
    ParseResult result;
    json j = json::parse(text, nullptr, false, true);
    if (j.is_discarded()) {
        result.errors.push_back({"", "not valid JSON"});
        return result;
    }
    if (!j.is_object()) {
        result.errors.push_back({"", "top level must be an object"});
        return result;
    }

    Errors& errors = result.errors;
    check_keys(j, "",
               {"name", "duration_s", "default_seed", "inter_gnb_delay_ms", "cells",
                "populations"},
               errors);
    ScenarioConfig config;
    config.name = get_str(j, "", "name", "", errors);
    config.duration_s = get_num(j, "", "duration_s", config.duration_s, errors);
    config.default_seed = static_cast<std::uint64_t>(
        get_int(j, "", "default_seed", static_cast<std::int64_t>(config.default_seed),
                errors));
    config.inter_gnb_delay = millis_in(
        get_num(j, "", "inter_gnb_delay_ms", millis_out(config.inter_gnb_delay), errors));

    if (const json* c = child(j, "cells")) {
        if (!c->is_array()) {
            errors.push_back({"cells", "expected an array"});
        } else {
            for (std::size_t i = 0; i < c->size(); ++i) {
                std::string path = "cells[" + std::to_string(i) + "]";
                if (!(*c)[i].is_object()) {
                    errors.push_back({path, "expected an object"});
                    continue;
                }
                config.cells.push_back(parse_cell((*c)[i], path, errors));
            }
        }
    }
    if (const json* c = child(j, "populations")) {
        if (!c->is_array()) {
            errors.push_back({"populations", "expected an array"});
        } else {
            for (std::size_t i = 0; i < c->size(); ++i) {
                std::string path = "populations[" + std::to_string(i) + "]";
                if (!(*c)[i].is_object()) {
                    errors.push_back({path, "expected an object"});
                    continue;
                }
                config.populations.push_back(parse_population((*c)[i], path, errors));
            }
        }
    }

    auto semantic = validate_scenario(config);
    errors.insert(errors.end(), semantic.begin(), semantic.end());
    if (errors.empty()) {
        result.config = std::move(config);
    }
    return result;
}

ParseResult parse_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        ParseResult result;
        result.errors.push_back({"", "cannot open " + path});
        return result;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

std::string emit_scenario(const ScenarioConfig& config)
{
    json j;
    j["name"] = config.name;
    j["duration_s"] = config.duration_s;
    j["default_seed"] = config.default_seed;
    j["inter_gnb_delay_ms"] = millis_out(config.inter_gnb_delay);
    j["cells"] = json::array();
    for (const auto& cell : config.cells) {
        j["cells"].push_back(emit_cell(cell));
    }
    j["populations"] = json::array();
    for (const auto& pop : config.populations) {
        j["populations"].push_back(emit_population(pop));
    }
    return j.dump(2) + "\n";
}

} // namespace accessim::cli
