#include "accessim/preventive/cell_access.hpp"

#include <algorithm>

#include "accessim/core/access_mapping.hpp"

namespace accessim::preventive {

CellSelectionResult cell_selection_check(const core::UeProfile& profile,
                                         const CellAccessInfo& cell,
                                         bool is_emergency)
{
    const SimTime retry = cell.barred_retry_interval;

    if (cell.cell_barred) {
        return CellSelectionResult::no(retry);
    }
    if (cell.reserved_for_future_use) {
        return CellSelectionResult::no(retry);
    }
    if (cell.reserved_for_operator_use) {
        const core::AiSet operator_ais{core::AccessIdentity::PlmnUse,
                                       core::AccessIdentity::PlmnStaff};
        if (!core::effective_access_identities(profile).intersects(operator_ais)) {
            return CellSelectionResult::no(retry);
        }
    }
    if (cell.reserved_for_other_use) {
        const bool authorized =
            std::any_of(profile.npn_authorized.begin(), profile.npn_authorized.end(),
                        [&](std::uint32_t id) { return cell.npn_ids.count(id) > 0; });
        if (!authorized) {
            return CellSelectionResult::no(retry);
        }
    }

    const bool plmn_ok = std::find(cell.plmn_ids.begin(), cell.plmn_ids.end(),
                                   profile.home_plmn) != cell.plmn_ids.end();
    if (!plmn_ok && !is_emergency) {
        return CellSelectionResult::no(retry);
    }
    return CellSelectionResult::yes();
}

} // namespace accessim::preventive
