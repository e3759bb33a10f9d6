#include "accessim/core/types.hpp"

#include <cstdio>
#include <cstdlib>

namespace accessim::core {

std::string to_string(RrcState s)
{
    switch (s) {
    case RrcState::Idle:
        return "idle";
    case RrcState::Inactive:
        return "inactive";
    case RrcState::Connected:
        return "connected";
    }
    return "?";
}

std::string to_string(AiSet ais)
{
    std::string out;
    for (int v : ais.values()) {
        if (!out.empty()) {
            out += ',';
        }
        out += std::to_string(v);
    }
    return out.empty() ? "-" : out;
}

std::string to_string(const PlmnId& plmn)
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), plmn.mnc_digits == 3 ? "%03u-%03u" : "%03u-%02u",
                  plmn.mcc, plmn.mnc);
    return buf;
}

std::optional<PlmnId> parse_plmn(const std::string& text)
{
    const auto dash = text.find('-');
    if (dash == std::string::npos) {
        return std::nullopt;
    }
    const std::string mcc = text.substr(0, dash);
    const std::string mnc = text.substr(dash + 1);
    if (mcc.size() != 3 || (mnc.size() != 2 && mnc.size() != 3)) {
        return std::nullopt;
    }
    for (char c : mcc + mnc) {
        if (c < '0' || c > '9') {
            return std::nullopt;
        }
    }
    PlmnId out;
    out.mcc = static_cast<std::uint16_t>(std::strtoul(mcc.c_str(), nullptr, 10));
    out.mnc = static_cast<std::uint16_t>(std::strtoul(mnc.c_str(), nullptr, 10));
    out.mnc_digits = static_cast<std::uint8_t>(mnc.size());
    return out;
}

std::string to_string(const Snssai& s)
{
    if (s.sd) {
        return std::to_string(s.sst) + "-" + std::to_string(*s.sd);
    }
    return std::to_string(s.sst);
}

std::optional<Snssai> parse_snssai(const std::string& text)
{
    if (text.empty()) {
        return std::nullopt;
    }
    const auto dash = text.find('-');
    const std::string sst = text.substr(0, dash == std::string::npos ? text.size() : dash);
    for (char c : sst) {
        if (c < '0' || c > '9') {
            return std::nullopt;
        }
    }
    Snssai out;
    out.sst = std::atoi(sst.c_str());
    if (dash != std::string::npos) {
        const std::string sd = text.substr(dash + 1);
        if (sd.empty()) {
            return std::nullopt;
        }
        for (char c : sd) {
            if (c < '0' || c > '9') {
                return std::nullopt;
            }
        }
        out.sd = std::atoi(sd.c_str());
    }
    return out;
}

namespace {

struct CauseName {
    EstablishmentCause cause;
    const char* name;
};

constexpr CauseName kCauseNames[] = {
    {EstablishmentCause::Emergency, "emergency"},
    {EstablishmentCause::HighPriorityAccess, "high_priority_access"},
    {EstablishmentCause::MtAccess, "mt_access"},
    {EstablishmentCause::MoSignalling, "mo_signalling"},
    {EstablishmentCause::MoData, "mo_data"},
    {EstablishmentCause::MoVoiceCall, "mo_voice_call"},
    {EstablishmentCause::MoVideoCall, "mo_video_call"},
    {EstablishmentCause::MoSms, "mo_sms"},
    {EstablishmentCause::MpsPriorityAccess, "mps_priority_access"},
    {EstablishmentCause::McsPriorityAccess, "mcs_priority_access"},
};

} // namespace

std::string to_string(EstablishmentCause c)
{
    for (const auto& entry : kCauseNames) {
        if (entry.cause == c) {
            return entry.name;
        }
    }
    return "?";
}

std::optional<EstablishmentCause> parse_cause(const std::string& text)
{
    for (const auto& entry : kCauseNames) {
        if (text == entry.name) {
            return entry.cause;
        }
    }
    return std::nullopt;
}

std::string to_string(ResourceType t)
{
    switch (t) {
    case ResourceType::Gbr:
        return "gbr";
    case ResourceType::DelayCriticalGbr:
        return "delay_critical_gbr";
    case ResourceType::NonGbr:
        return "non_gbr";
    }
    return "?";
}

std::optional<ResourceType> parse_resource_type(const std::string& text)
{
    if (text == "gbr") {
        return ResourceType::Gbr;
    }
    if (text == "delay_critical_gbr") {
        return ResourceType::DelayCriticalGbr;
    }
    if (text == "non_gbr") {
        return ResourceType::NonGbr;
    }
    return std::nullopt;
}

} // namespace accessim::core
