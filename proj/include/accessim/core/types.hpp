#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "accessim/core/time.hpp"

namespace accessim::core {

/// RRC connection states. Idle has no network context, Inactive keeps the UE
/// context anchored in the RAN for fast resume, Connected is fully attached.
enum class RrcState { Idle, Inactive, Connected };

std::string to_string(RrcState s);

/// Access Identities 0..15. 0 is the regular subscriber class; 1/2 mark MPS
/// and MCS subscribers; 11..15 are the operator/utility/emergency classes
/// inherited from the LTE access classes. 4..10 are reserved.
enum class AccessIdentity : std::uint8_t {
    Regular = 0,
    Mps = 1,
    Mcs = 2,
    Disaster = 3,
    PlmnUse = 11,
    SecurityServices = 12,
    PublicUtilities = 13,
    EmergencyServices = 14,
    PlmnStaff = 15,
};

constexpr int ai_value(AccessIdentity ai) { return static_cast<int>(ai); }
constexpr bool ai_is_reserved(int v) { return v >= 4 && v <= 10; }
constexpr bool ai_is_valid(int v) { return v >= 0 && v <= 15; }

/// A set of Access Identities as a 16-bit mask.
class AiSet {
  public:
    constexpr AiSet() = default;
    AiSet(std::initializer_list<AccessIdentity> ais)
    {
        for (auto ai : ais) {
            insert(ai);
        }
    }

    void insert(AccessIdentity ai) { bits_ |= mask(ai); }
    void insert(int v) { bits_ |= static_cast<std::uint16_t>(1u << v); }
    bool contains(AccessIdentity ai) const { return (bits_ & mask(ai)) != 0; }
    bool contains(int v) const { return (bits_ & (1u << v)) != 0; }

    AiSet intersect(AiSet other) const
    {
        AiSet r;
        r.bits_ = bits_ & other.bits_;
        return r;
    }
    AiSet unite(AiSet other) const
    {
        AiSet r;
        r.bits_ = bits_ | other.bits_;
        return r;
    }
    bool intersects(AiSet other) const { return (bits_ & other.bits_) != 0; }
    bool empty() const { return bits_ == 0; }
    bool is_subset_of(AiSet other) const { return (bits_ & ~other.bits_) == 0; }
    std::uint16_t raw() const { return bits_; }

    std::vector<int> values() const
    {
        std::vector<int> out;
        for (int v = 0; v <= 15; ++v) {
            if (contains(v)) {
                out.push_back(v);
            }
        }
        return out;
    }

    /// The seven identities a UAC barring entry carries allow bits for.
    static AiSet high_priority()
    {
        return AiSet{AccessIdentity::Mps,
                     AccessIdentity::Mcs,
                     AccessIdentity::PlmnUse,
                     AccessIdentity::SecurityServices,
                     AccessIdentity::PublicUtilities,
                     AccessIdentity::EmergencyServices,
                     AccessIdentity::PlmnStaff};
    }

    bool operator==(const AiSet&) const = default;

  private:
    static constexpr std::uint16_t mask(AccessIdentity ai)
    {
        return static_cast<std::uint16_t>(1u << static_cast<int>(ai));
    }

    std::uint16_t bits_ = 0;
};

std::string to_string(AiSet ais);

/// Access Category 0..63. 0..10 carry standardized service-type semantics,
/// 11..31 are reserved, 32..63 are operator-defined.
class AccessCategory {
  public:
    constexpr AccessCategory() = default;
    explicit constexpr AccessCategory(int v) : value_(static_cast<std::uint8_t>(v)) {}

    constexpr int value() const { return value_; }
    constexpr bool is_standardized() const { return value_ <= 31; }
    constexpr bool is_operator_defined() const { return value_ >= 32; }
    static constexpr bool valid(int v) { return v >= 0 && v <= 63; }

    constexpr bool operator==(const AccessCategory&) const = default;
    constexpr auto operator<=>(const AccessCategory&) const = default;

    static constexpr AccessCategory mt_access() { return AccessCategory(0); }
    static constexpr AccessCategory delay_tolerant() { return AccessCategory(1); }
    static constexpr AccessCategory emergency() { return AccessCategory(2); }
    static constexpr AccessCategory mo_nas_signalling() { return AccessCategory(3); }
    static constexpr AccessCategory mo_voice() { return AccessCategory(4); }
    static constexpr AccessCategory mo_video() { return AccessCategory(5); }
    static constexpr AccessCategory sms() { return AccessCategory(6); }
    static constexpr AccessCategory mo_data() { return AccessCategory(7); }
    static constexpr AccessCategory mo_rrc_signalling() { return AccessCategory(8); }
    static constexpr AccessCategory mo_ims_registration() { return AccessCategory(9); }
    static constexpr AccessCategory mo_exception_data() { return AccessCategory(10); }

  private:
    std::uint8_t value_ = 0;
};

/// PLMN identity: 3-digit MCC plus 2- or 3-digit MNC.
struct PlmnId {
    std::uint16_t mcc = 0;
    std::uint16_t mnc = 0;
    std::uint8_t mnc_digits = 2;

    bool operator==(const PlmnId&) const = default;
    auto operator<=>(const PlmnId&) const = default;

    bool valid() const
    {
        return mcc <= 999 && (mnc_digits == 2 || mnc_digits == 3) &&
               mnc < (mnc_digits == 2 ? 100 : 1000);
    }
};

std::string to_string(const PlmnId& plmn);
std::optional<PlmnId> parse_plmn(const std::string& text); // "mcc-mnc", e.g. "001-01"

/// Slice identity: mandatory slice/service type plus optional differentiator.
struct Snssai {
    int sst = 0;
    std::optional<int> sd;

    bool operator==(const Snssai&) const = default;
    auto operator<=>(const Snssai&) const = default;
};

std::string to_string(const Snssai& s);
std::optional<Snssai> parse_snssai(const std::string& text); // "sst" or "sst-sd"

enum class EstablishmentCause {
    Emergency,
    HighPriorityAccess,
    MtAccess,
    MoSignalling,
    MoData,
    MoVoiceCall,
    MoVideoCall,
    MoSms,
    MpsPriorityAccess,
    McsPriorityAccess,
};

std::string to_string(EstablishmentCause c);
std::optional<EstablishmentCause> parse_cause(const std::string& text);

/// Allocation and retention priority of a QoS flow. Level 1 is the highest
/// priority; the flags say whether the flow may evict others / be evicted.
struct ArpProfile {
    int priority_level = 15; // 1..15, 1 highest
    bool preemption_capability = false;
    bool preemption_vulnerability = false;

    bool operator==(const ArpProfile&) const = default;
};

enum class ResourceType { Gbr, DelayCriticalGbr, NonGbr };

std::string to_string(ResourceType t);
std::optional<ResourceType> parse_resource_type(const std::string& text);

using FlowId = std::uint64_t;
using UeId = std::uint64_t;
using CellId = std::uint32_t;
using GnbId = std::uint32_t;

/// One requested QoS flow. GBR kinds reserve `demand` abstract resource
/// units for their lifetime; non-GBR flows are admitted without reservation.
struct QosFlowRequest {
    FlowId flow_id = 0;
    ArpProfile arp;
    ResourceType resource_type = ResourceType::NonGbr;
    Snssai snssai;
    std::uint64_t demand = 0;

    bool operator==(const QosFlowRequest&) const = default;
};

/// Subscription-side identity of one UE plus its live access state.
struct UeProfile {
    UeId ue_id = 0;
    AiSet access_identities;            // configured identities, AI 0 implicit
    PlmnId home_plmn;
    bool in_home_country = true;
    bool in_home_plmn = true;
    std::set<std::uint32_t> npn_authorized;
    std::vector<Snssai> subscribed_slices; // at most 8
    RrcState rrc_state = RrcState::Idle;
    std::optional<CellId> serving_cell;
    std::optional<SimTime> wait_time_until;
};

/// Per-attempt flags fixed by the traffic source at attempt creation. The
/// category mapping cannot infer them from the cause alone.
struct AttemptTraits {
    bool delay_tolerant = false;  // maps the attempt to AC 1
    bool exception_data = false;  // maps the attempt to AC 10
    bool nas_signalling = false;  // MoSignalling uses AC 3 instead of AC 8
    std::optional<AccessCategory> operator_ac; // pre-provisioned, 32..63
};

} // namespace accessim::core
