#include "accessim/core/access_mapping.hpp"

namespace accessim::core {

AiSet effective_access_identities(const UeProfile& profile)
{
    AiSet out{AccessIdentity::Regular};
    for (int v : profile.access_identities.values()) {
        if (v == 0 || ai_is_reserved(v)) {
            continue;
        }
        const bool needs_home_country = (v == 1 || v == 2 || (v >= 12 && v <= 14));
        const bool needs_home_plmn = (v == 11 || v == 15);
        if (needs_home_country && !profile.in_home_country) {
            continue;
        }
        if (needs_home_plmn && !profile.in_home_plmn) {
            continue;
        }
        out.insert(v);
    }
    return out;
}

AccessInfo derive_access_info(EstablishmentCause cause,
                              const UeProfile& profile,
                              const AttemptTraits& traits)
{
    AccessInfo info;
    info.ais = effective_access_identities(profile);

    // MT access and emergency keep their standardized categories no matter
    // what the attempt carries.
    if (cause == EstablishmentCause::MtAccess) {
        info.ac = AccessCategory::mt_access();
        return info;
    }
    if (cause == EstablishmentCause::Emergency) {
        info.ac = AccessCategory::emergency();
        return info;
    }
    if (traits.operator_ac && traits.operator_ac->is_operator_defined()) {
        info.ac = *traits.operator_ac;
        return info;
    }
    if (traits.delay_tolerant) {
        info.ac = AccessCategory::delay_tolerant();
        return info;
    }
    if (traits.exception_data) {
        info.ac = AccessCategory::mo_exception_data();
        return info;
    }

    switch (cause) {
    case EstablishmentCause::MoSignalling:
        info.ac = traits.nas_signalling ? AccessCategory::mo_nas_signalling()
                                        : AccessCategory::mo_rrc_signalling();
        break;
    case EstablishmentCause::MoVoiceCall:
        info.ac = AccessCategory::mo_voice();
        break;
    case EstablishmentCause::MoVideoCall:
        info.ac = AccessCategory::mo_video();
        break;
    case EstablishmentCause::MoSms:
        info.ac = AccessCategory::sms();
        break;
    case EstablishmentCause::MoData:
    case EstablishmentCause::HighPriorityAccess:
    case EstablishmentCause::MpsPriorityAccess:
    case EstablishmentCause::McsPriorityAccess:
        // The priority causes mark who is asking, not what for; the category
        // defaults to MO data while the priority rides on the identities.
        info.ac = AccessCategory::mo_data();
        break;
    case EstablishmentCause::Emergency:
    case EstablishmentCause::MtAccess:
        break; // handled above
    }
    return info;
}

} // namespace accessim::core
