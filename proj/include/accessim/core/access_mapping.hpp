#pragma once

#include "accessim/core/types.hpp"

namespace accessim::core {

struct AccessInfo {
    AccessCategory ac;
    AiSet ais;

    bool operator==(const AccessInfo&) const = default;
};

/// The identities a UE may actually assert right now: the configured set
/// filtered by location validity (12..14 and 1/2 need the home country,
/// 11/15 the home PLMN), with AI 0 always present and reserved values
/// dropped.
AiSet effective_access_identities(const UeProfile& profile);

/// Maps an access attempt to its Access Category and the set of Access
/// Identities asserted with it. Total and deterministic.
AccessInfo derive_access_info(EstablishmentCause cause,
                              const UeProfile& profile,
                              const AttemptTraits& traits = {});

} // namespace accessim::core
