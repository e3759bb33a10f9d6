#include "accessim/preventive/uac.hpp"

namespace accessim::preventive {

UacResult uac_check(core::AccessCategory ac,
                    core::AiSet ais,
                    const UacConfig& config,
                    double uniform_draw,
                    SimTime now,
                    const core::UeProfile& profile,
                    std::optional<double> jitter_draw)
{
    if (profile.wait_time_until && now < *profile.wait_time_until && ac.value() != 0 &&
        ac.value() != 2) {
        return UacResult::barred(*profile.wait_time_until);
    }
    if (ac.value() == 0) {
        return UacResult::ok();
    }
    const UacBarringEntry* entry = config.find(ac);
    if (entry == nullptr) {
        return UacResult::ok();
    }
    if (ais.intersect(core::AiSet::high_priority()).intersects(entry->ai_allowed)) {
        return UacResult::ok();
    }
    if (uniform_draw < entry->barring_factor) {
        return UacResult::ok();
    }
    SimTime hold = entry->barring_time;
    if (config.jittered_barring_time && jitter_draw) {
        hold = static_cast<SimTime>(static_cast<double>(hold) * (0.7 + 0.6 * *jitter_draw));
    }
    return UacResult::barred(now + hold);
}

core::UeProfile apply_wait_time(core::UeProfile profile, SimTime wait_time, SimTime now)
{
    profile.wait_time_until = now + wait_time;
    return profile;
}

} // namespace accessim::preventive
