#pragma once

#include <set>
#include <vector>

#include "accessim/core/types.hpp"

namespace accessim::preventive {

/// Cell barring and reservation flags as broadcast in MIB/SIB1, plus the
/// identities needed to evaluate them.
struct CellAccessInfo {
    bool cell_barred = false;               // MIB: bars everyone, even emergencies
    bool reserved_for_operator_use = false; // SIB1: AI 11/15 only
    bool reserved_for_other_use = false;    // SIB1: authorized NPN UEs only
    bool reserved_for_future_use = false;   // SIB1: bars everyone
    std::set<std::uint32_t> npn_ids;
    std::vector<core::PlmnId> plmn_ids;
    SimTime barred_retry_interval = seconds(300);
};

struct CellSelectionResult {
    bool selectable = false;
    SimTime retry_after = 0; // valid when not selectable

    static CellSelectionResult yes() { return {true, 0}; }
    static CellSelectionResult no(SimTime retry) { return {false, retry}; }
};

/// Decides whether the UE may select this cell. Every reservation flag that
/// is set imposes its own requirement; a barred cell rejects everyone for the
/// retry interval, emergencies included. Emergency attempts may camp despite
/// a PLMN mismatch (limited service), but never on a barred or reserved cell.
CellSelectionResult cell_selection_check(const core::UeProfile& profile,
                                         const CellAccessInfo& cell,
                                         bool is_emergency);

} // namespace accessim::preventive
