#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "accessim/ra/rach.hpp"
#include "accessim/sim/random.hpp"

using namespace accessim;
using namespace accessim::ra;

namespace {

RachConfig base_cfg()
{
    RachConfig cfg;
    cfg.n_preambles = 64;
    cfg.occasion_period = millis(10);
    cfg.backoff_indicator = millis(160);
    cfg.initial_power_dbm = -100.0;
    cfg.power_ramping_step_db = 2.0;
    cfg.detection_threshold_dbm = -104.0;
    cfg.max_attempts = 10;
    cfg.msg_latencies = {millis(1), millis(1), millis(1), millis(1)};
    return cfg;
}

RaAttemptState state_at(int attempt_no, double power, bool same_beam = true,
                        bool priority = false)
{
    RaAttemptState s;
    s.attempt_no = attempt_no;
    s.current_power_dbm = power;
    s.same_beam_as_previous = same_beam;
    s.priority_class = priority;
    return s;
}

} // namespace

TEST_CASE("backoff is uniform over the indicated window")
{
    auto cfg = base_cfg();
    sim::RandomStreams rng(7);

    const int n = 20000;
    double sum = 0.0;
    SimTime max_seen = 0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform(sim::purpose::kBackoff, 1, static_cast<std::uint64_t>(i), 1);
        auto p = next_attempt_params(state_at(1, -100.0), cfg, u);
        REQUIRE(p.has_value());
        CHECK(p->backoff >= 0);
        CHECK(p->backoff <= cfg.backoff_indicator);
        sum += static_cast<double>(p->backoff);
        max_seen = std::max(max_seen, p->backoff);
    }
    // Mean of U(0, BI) is BI/2 with sd BI/sqrt(12n).
    double mean = sum / n;
    double expect = static_cast<double>(cfg.backoff_indicator) / 2.0;
    double sigma = static_cast<double>(cfg.backoff_indicator) / std::sqrt(12.0 * n);
    CHECK(std::abs(mean - expect) < 3.0 * sigma);
    CHECK(max_seen > static_cast<SimTime>(0.99 * static_cast<double>(cfg.backoff_indicator)));
}

TEST_CASE("prioritized backoff scales the window down")
{
    auto cfg = base_cfg();
    cfg.prioritized.enabled = true;
    cfg.prioritized.backoff_scaling = 0.25;
    cfg.prioritized.power_ramping_step_high_db = 4.0;

    auto normal = next_attempt_params(state_at(1, -100.0), cfg, 0.8);
    auto priority = next_attempt_params(state_at(1, -100.0, true, true), cfg, 0.8);
    REQUIRE(normal.has_value());
    REQUIRE(priority.has_value());
    CHECK(normal->backoff == std::llround(0.8 * 160000.0));
    CHECK(priority->backoff == std::llround(0.8 * 0.25 * 160000.0));

    // With prioritization disabled the class flag changes nothing.
    cfg.prioritized.enabled = false;
    auto off = next_attempt_params(state_at(1, -100.0, true, true), cfg, 0.8);
    CHECK(off->backoff == normal->backoff);
}

TEST_CASE("power ramps per same-beam retry and resets on beam change")
{
    auto cfg = base_cfg();

    // Walk the ramp: attempt k transmits at initial + (k-1) * step as long
    // as the UE stays on one beam.
    double power = cfg.initial_power_dbm;
    for (int k = 1; k < 6; ++k) {
        auto p = next_attempt_params(state_at(k, power), cfg, 0.5);
        REQUIRE(p.has_value());
        CHECK(p->power_dbm == doctest::Approx(cfg.initial_power_dbm + k * 2.0));
        power = p->power_dbm;
    }

    // A beam switch restarts the ramp from the initial power.
    auto reset = next_attempt_params(state_at(6, power, false), cfg, 0.5);
    REQUIRE(reset.has_value());
    CHECK(reset->power_dbm == doctest::Approx(cfg.initial_power_dbm));

    // Prioritized class ramps with the larger step.
    cfg.prioritized.enabled = true;
    cfg.prioritized.backoff_scaling = 0.5;
    cfg.prioritized.power_ramping_step_high_db = 4.0;
    auto pri = next_attempt_params(state_at(1, -100.0, true, true), cfg, 0.5);
    CHECK(pri->power_dbm == doctest::Approx(-96.0));
}

TEST_CASE("attempts to reach the detection threshold follow the ramp")
{
    auto cfg = base_cfg();
    cfg.initial_power_dbm = -110.0;
    cfg.detection_threshold_dbm = -104.0;
    cfg.power_ramping_step_db = 2.5;
    cfg.max_attempts = 10;

    // Deficit 6 dB at step 2.5 dB: detected on attempt 1 + ceil(6/2.5) = 4.
    double deficit = cfg.detection_threshold_dbm - cfg.initial_power_dbm;
    int expect = 1 + static_cast<int>(std::ceil(deficit / cfg.power_ramping_step_db));

    RaAttemptState s = state_at(1, cfg.initial_power_dbm);
    int attempt = 1;
    while (s.current_power_dbm < cfg.detection_threshold_dbm) {
        auto p = next_attempt_params(s, cfg, 0.5);
        REQUIRE(p.has_value());
        ++attempt;
        s.attempt_no = attempt;
        s.current_power_dbm = p->power_dbm;
    }
    CHECK(attempt == expect);
    CHECK(attempt == 4);
}

TEST_CASE("the attempt budget is a hard stop")
{
    auto cfg = base_cfg();
    cfg.max_attempts = 3;
    CHECK(next_attempt_params(state_at(2, -96.0), cfg, 0.5).has_value());
    CHECK(!next_attempt_params(state_at(3, -96.0), cfg, 0.5).has_value());
    CHECK(!next_attempt_params(state_at(4, -96.0), cfg, 0.5).has_value());
}

TEST_CASE("rach round detects by threshold and flags shared preambles")
{
    auto cfg = base_cfg();
    std::vector<PreambleTx> txs = {
        {1, 5, -100.0},  // detected, alone on 5
        {2, 9, -104.0},  // detected, exactly at threshold, shares 9
        {3, 9, -100.0},  // detected, shares 9
        {4, 9, -104.1},  // below threshold: lost, does not contend on 9
        {5, 7, -120.0},  // below threshold: lost
    };
    auto outcomes = rach_round(txs, cfg);
    REQUIRE(outcomes.size() == 5);

    CHECK(outcomes[0].result == RaDetection::Proceed);
    CHECK(!outcomes[0].contended);
    CHECK(outcomes[1].result == RaDetection::Proceed);
    CHECK(outcomes[1].contended);
    CHECK(outcomes[2].result == RaDetection::Proceed);
    CHECK(outcomes[2].contended);
    CHECK(outcomes[3].result == RaDetection::NotDetected);
    CHECK(outcomes[4].result == RaDetection::NotDetected);

    // An undetected transmission never turns a solo preamble into a
    // contention: UE 4 did not make preamble 9 three-way, and a lost UE
    // sharing with one detected UE leaves that UE uncontended.
    auto solo = rach_round({{1, 3, -100.0}, {2, 3, -120.0}}, cfg);
    CHECK(solo[0].result == RaDetection::Proceed);
    CHECK(!solo[0].contended);
    CHECK(solo[1].result == RaDetection::NotDetected);
}

TEST_CASE("contention resolution picks one winner by draw")
{
    auto cfg = base_cfg();
    std::vector<core::UeId> contenders = {11, 22, 33};

    auto r0 = contention_resolution(contenders, cfg, 0.0);
    CHECK(r0.winner == 11);
    CHECK(r0.losers == std::vector<core::UeId>{22, 33});

    auto r1 = contention_resolution(contenders, cfg, 0.34);
    CHECK(r1.winner == 22);

    auto r2 = contention_resolution(contenders, cfg, 0.999);
    CHECK(r2.winner == 33);
    CHECK(r2.losers == std::vector<core::UeId>{11, 22});

    // Draw 1.0 would index past the end; it clamps to the last contender.
    auto clamp = contention_resolution(contenders, cfg, 1.0);
    CHECK(clamp.winner == 33);

    CHECK(r0.messages_charged == 4);
    CHECK(r0.exchange_latency == millis(4));
}

TEST_CASE("message count and latency per mode")
{
    auto cfg = base_cfg();
    cfg.msg_latencies = {millis(2), millis(3), millis(4), millis(5)};
    CHECK(cfg.messages_per_access() == 4);
    CHECK(cfg.uplink_request_latency() == millis(9));
    CHECK(cfg.full_exchange_latency() == millis(14));
    CHECK(cfg.response_timeout_latency() == millis(5));

    RachConfig two = cfg;
    two.mode = RaMode::TwoStep;
    two.two_step_allowed = true;
    two.msg_latencies = {millis(2), millis(3)};
    CHECK(two.messages_per_access() == 2);
    CHECK(two.uplink_request_latency() == millis(2));
    CHECK(two.full_exchange_latency() == millis(5));

    auto r = contention_resolution({1, 2}, two, 0.6);
    CHECK(r.messages_charged == 2);
    CHECK(r.exchange_latency == millis(5));
    CHECK(r.winner == 2);
    CHECK(r.losers == std::vector<core::UeId>{1});
}

TEST_CASE("priority class selection needs the feature and an identity")
{
    auto cfg = base_cfg();
    core::AiSet mps{core::AccessIdentity::Mps};
    core::AiSet mcs{core::AccessIdentity::Mcs};
    core::AiSet staff{core::AccessIdentity::PlmnStaff};

    CHECK(!cfg.is_priority_class(mps)); // feature disabled

    cfg.prioritized.enabled = true;
    cfg.prioritized.backoff_scaling = 0.25;
    cfg.prioritized.power_ramping_step_high_db = 4.0;
    CHECK(cfg.is_priority_class(mps));
    CHECK(cfg.is_priority_class(mcs));
    CHECK(!cfg.is_priority_class(staff)); // only MPS/MCS get RA priority
    CHECK(!cfg.is_priority_class({}));

    CHECK(cfg.ramping_step(true) == doctest::Approx(4.0));
    CHECK(cfg.ramping_step(false) == doctest::Approx(2.0));
    CHECK(cfg.backoff_scale(true) == doctest::Approx(0.25));
    CHECK(cfg.backoff_scale(false) == doctest::Approx(1.0));
}

TEST_CASE("keyed draws are order-independent and seed-sensitive")
{
    sim::RandomStreams a(42);
    sim::RandomStreams b(42);

    // Same key yields the same value no matter what was drawn before.
    double first = a.uniform(sim::purpose::kBackoff, 10, 2, 3);
    for (int i = 0; i < 100; ++i) {
        b.uniform(sim::purpose::kPreamble, static_cast<std::uint64_t>(i), 0, 0);
    }
    CHECK(b.uniform(sim::purpose::kBackoff, 10, 2, 3) == first);

    // Different purposes decorrelate the same entity key.
    CHECK(a.uniform(sim::purpose::kPreamble, 10, 2, 3) != first);

    sim::RandomStreams c(43);
    CHECK(c.uniform(sim::purpose::kBackoff, 10, 2, 3) != first);

    CHECK(a.draw_count() == 2);
}

TEST_CASE("keyed exponential has the requested mean")
{
    sim::RandomStreams rng(5);
    const int n = 50000;
    const double mean = 0.02;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = rng.exponential(sim::purpose::kTraffic, mean, 3, i, 0);
        CHECK(v >= 0.0);
        sum += v;
    }
    // Exponential sd equals the mean.
    double got = sum / n;
    CHECK(std::abs(got - mean) < 3.0 * mean / std::sqrt(static_cast<double>(n)));
}
