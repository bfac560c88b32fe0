#include "bdicover/monitors.hpp"

#include <string>

#include "bdicover/sutsim.hpp"
#include "bdicover/util.hpp"
#include "doctest.h"
#include "loggen.hpp"

using namespace bdicover;
namespace ts = bdicover::testsupport;

namespace {

SimEventLog log_of(std::initializer_list<SimLogEntry> entries) {
    SimEventLog log;
    for (const auto& e : entries) log.entries.push_back(e);
    return log;
}

} // namespace

TEST_CASE("release deadline holds when the release is prompt") {
    SimEventLog log = log_of({
        {43.0, "sensor", "1 1 1"},
        {46.0, "leg", "release 1"},
    });
    AssertionOutcome out = monitor_release_deadline(log, 10.0);
    CHECK(out.verdict == Verdict::Passed);
    CHECK(out.triggers == 1);
    CHECK(out.violations == 0);
}

TEST_CASE("release deadline flags a slow release") {
    SimEventLog log = log_of({
        {43.0, "sensor", "1 1 1"},
        {55.5, "leg", "release 1"},
    });
    AssertionOutcome out = monitor_release_deadline(log, 10.0);
    CHECK(out.verdict == Verdict::Failed);
    CHECK(out.violations == 1);
    CHECK(out.diagnostic.find("12.5000") != std::string::npos);
}

TEST_CASE("release deadline flags a ready read never answered") {
    SimEventLog log = log_of({
        {43.0, "sensor", "1 1 1"},
        {45.0, "leg", "retract"},
    });
    AssertionOutcome out = monitor_release_deadline(log, 10.0);
    CHECK(out.verdict == Verdict::Failed);
    CHECK(out.diagnostic.find("never followed") != std::string::npos);
}

TEST_CASE("release deadline is exact at the boundary") {
    SimEventLog log = log_of({
        {40.0, "sensor", "1 1 1"},
        {50.0, "leg", "release 1"},
    });
    CHECK(monitor_release_deadline(log, 10.0).verdict == Verdict::Passed);
    log.entries[1].time = 50.001;
    CHECK(monitor_release_deadline(log, 10.0).verdict == Verdict::Failed);
}

TEST_CASE("release deadline counts each ready read separately") {
    SimEventLog log = log_of({
        {10.0, "sensor", "1 1 1"},
        {12.0, "leg", "release 1"},
        {40.0, "sensor", "1 1 1"},
        {60.0, "leg", "release 2"},
    });
    AssertionOutcome out = monitor_release_deadline(log, 10.0);
    CHECK(out.triggers == 2);
    CHECK(out.violations == 1);
    CHECK(out.verdict == Verdict::Failed);
}

TEST_CASE("release deadline ignores logs with no ready read") {
    SimEventLog log = log_of({
        {10.0, "sensor", "0 1 1"},
        {12.0, "leg", "retract"},
    });
    CHECK(monitor_release_deadline(log, 10.0).verdict == Verdict::NotChecked);
    CHECK(monitor_release_deadline(SimEventLog{}, 10.0).verdict ==
          Verdict::NotChecked);
}

TEST_CASE("unwanted release passes when the leg goes back first") {
    SimEventLog log = log_of({
        {43.0, "sensor", "0 1 1"},
        {45.0, "leg", "retract"},
        {70.0, "leg", "release 1"},
    });
    AssertionOutcome out = monitor_no_unwanted_release(log);
    CHECK(out.verdict == Verdict::Passed);
    CHECK(out.triggers == 1);
}

TEST_CASE("unwanted release flags a release after a not-ready read") {
    SimEventLog log = log_of({
        {43.0, "sensor", "1 0 1"},
        {46.0, "leg", "release 1"},
        {48.0, "leg", "retract"},
    });
    AssertionOutcome out = monitor_no_unwanted_release(log);
    CHECK(out.verdict == Verdict::Failed);
    CHECK(out.violations == 1);
    CHECK(out.diagnostic.find("not-ready read") != std::string::npos);
}

TEST_CASE("a rig restart also closes the unwanted-release window") {
    SimEventLog log = log_of({
        {43.0, "sensor", "0 0 0"},
        {50.0, "state", "reset"},
        {80.0, "leg", "release 1"},
    });
    CHECK(monitor_no_unwanted_release(log).verdict == Verdict::Passed);
}

TEST_CASE("all-ready reads do not arm the unwanted-release monitor") {
    SimEventLog log = log_of({
        {43.0, "sensor", "1 1 1"},
        {46.0, "leg", "release 1"},
    });
    CHECK(monitor_no_unwanted_release(log).verdict == Verdict::NotChecked);
}

TEST_CASE("hand clearance passes at or above the safe separation") {
    SimEventLog log = log_of({
        {28.0, "hand", "close"},
        {28.0, "distance", "0.5000"},
        {60.0, "hand", "close"},
        {60.0, "distance", "0.1000"},
    });
    AssertionOutcome out = monitor_hand_clearance(log, 0.1);
    CHECK(out.verdict == Verdict::Passed);
    CHECK(out.triggers == 2);
}

TEST_CASE("hand clearance flags a close inside the safe separation") {
    SimEventLog log = log_of({
        {28.0, "hand", "close"},
        {28.0, "distance", "0.0450"},
    });
    AssertionOutcome out = monitor_hand_clearance(log, 0.1);
    CHECK(out.verdict == Verdict::Failed);
    CHECK(out.diagnostic.find("0.0450") != std::string::npos);
}

TEST_CASE("closes without a distance sample are set aside, not judged") {
    SimEventLog log = log_of({
        {28.0, "hand", "close"},
        {30.0, "distance", "0.0450"},
    });
    AssertionOutcome out = monitor_hand_clearance(log, 0.1);
    CHECK(out.verdict == Verdict::NotChecked);
    CHECK(out.triggers == 0);
    CHECK(out.diagnostic.find("without a distance sample") != std::string::npos);
}

TEST_CASE("speed limit flags any commanded speed at or over the limit") {
    SimEventLog log = log_of({
        {0.0, "speed", "0.2100"},
        {5.0, "speed", "0.2500"},
        {9.0, "speed", "0.1200"},
    });
    AssertionOutcome out = monitor_speed_limit(log, 0.25);
    CHECK(out.verdict == Verdict::Failed);
    CHECK(out.triggers == 3);
    CHECK(out.violations == 1);
    log.entries[1].payload = "0.2499";
    CHECK(monitor_speed_limit(log, 0.25).verdict == Verdict::Passed);
}

TEST_CASE("every monitor reports not-checked on an empty log") {
    SimEventLog log;
    MonitorThresholds thresholds;
    auto outcomes = run_monitors(log, thresholds);
    REQUIRE(outcomes.size() == 4);
    CHECK(outcomes[0].requirement == "R1");
    CHECK(outcomes[1].requirement == "R2");
    CHECK(outcomes[2].requirement == "R3");
    CHECK(outcomes[3].requirement == "R4");
    for (const auto& out : outcomes) {
        CHECK(out.verdict == Verdict::NotChecked);
        CHECK(out.triggers == 0);
    }
}

TEST_CASE("verdict names match the report vocabulary") {
    CHECK(verdict_name(Verdict::Passed) == "passed");
    CHECK(verdict_name(Verdict::Failed) == "failed");
    CHECK(verdict_name(Verdict::NotChecked) == "not_checked");
}

TEST_CASE("monitors agree with naive oracles on random logs") {
    Rng rng(20240817);
    MonitorThresholds thresholds;
    for (int trial = 0; trial < 500; ++trial) {
        SimEventLog log = ts::make_synthetic_log(rng);

        AssertionOutcome r1 =
            monitor_release_deadline(log, thresholds.release_deadline);
        ts::NaiveOutcome n1 =
            ts::naive_release_deadline(log, thresholds.release_deadline);
        CHECK(r1.triggers == n1.triggers);
        CHECK(r1.violations == n1.violations);
        CHECK(r1.verdict == n1.verdict());

        AssertionOutcome r2 = monitor_no_unwanted_release(log);
        ts::NaiveOutcome n2 = ts::naive_no_unwanted_release(log);
        CHECK(r2.triggers == n2.triggers);
        CHECK(r2.violations == n2.violations);
        CHECK(r2.verdict == n2.verdict());

        AssertionOutcome r3 =
            monitor_hand_clearance(log, thresholds.safe_hand_distance);
        ts::NaiveOutcome n3 =
            ts::naive_hand_clearance(log, thresholds.safe_hand_distance);
        CHECK(r3.triggers == n3.triggers);
        CHECK(r3.violations == n3.violations);
        CHECK(r3.verdict == n3.verdict());

        AssertionOutcome r4 = monitor_speed_limit(log, thresholds.speed_limit);
        ts::NaiveOutcome n4 = ts::naive_speed_limit(log, thresholds.speed_limit);
        CHECK(r4.triggers == n4.triggers);
        CHECK(r4.violations == n4.violations);
        CHECK(r4.verdict == n4.verdict());
    }
}
