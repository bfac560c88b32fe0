#include "bdicover/sutsim.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

using namespace bdicover;

namespace {

TimedStimulus voice(std::string utterance, double duration, double delay = 0.0) {
    TimedStimulus st;
    st.channel = "voice";
    st.kind = std::move(utterance);
    st.duration = duration;
    if (delay > 0.0) st.params.push_back({"delay", delay});
    return st;
}

TimedStimulus posture(std::string kind, int value, double duration,
                      double distance = -1.0) {
    TimedStimulus st;
    st.channel = "posture";
    st.kind = std::move(kind);
    st.value = value;
    st.duration = duration;
    if (distance >= 0.0) st.params.push_back({"distance", distance});
    return st;
}

TimedStimulus wait_signal(double cap) {
    TimedStimulus st;
    st.channel = "wait";
    st.kind = "signal";
    st.duration = cap;
    return st;
}

ConcreteTest make_test(std::vector<TimedStimulus> stimuli) {
    ConcreteTest test;
    test.id = "unit";
    test.abstract_id = "unit-a";
    test.seed = 11;
    test.stimuli = std::move(stimuli);
    return test;
}

// All randomness pinned: exact sensors, fixed release latency, no hazard.
FaultConfig pinned_faults(double latency = 3.0) {
    FaultConfig f;
    f.gaze_flip = 0.0;
    f.pressure_flip = 0.0;
    f.location_flip = 0.0;
    f.release_latency_lo = latency;
    f.release_latency_hi = latency;
    f.hand_hazard = 0.0;
    return f;
}

// One full handover exchange; append four of these to assemble all legs.
std::vector<TimedStimulus> happy_leg() {
    return {
        voice("leg", 5.0),
        wait_signal(120.0),
        voice("humanReady", 2.0, 1.0),
        posture("gaze", 1, 1.0),
        posture("pressure", 1, 1.0),
        posture("location", 1, 1.0, 0.3),
    };
}

int count_entries(const SimEventLog& log, const std::string& channel) {
    int n = 0;
    for (const auto& e : log.entries)
        if (e.channel == channel) ++n;
    return n;
}

const SimLogEntry* find_entry(const SimEventLog& log, const std::string& channel,
                              const std::string& payload) {
    for (const auto& e : log.entries)
        if (e.channel == channel && e.payload == payload) return &e;
    return nullptr;
}

int hit_count(const SimResult& r, const std::string& key) {
    return r.coverage.hits.at(key);
}

} // namespace

TEST_CASE("coverage inventory is fixed and starts at zero") {
    const auto& inv = SutCoverage::inventory();
    CHECK(inv.size() == 35);
    SutCoverage cov = SutCoverage::empty();
    CHECK(cov.total() == 35);
    CHECK(cov.covered() == 0);
    CHECK(cov.fraction() == doctest::Approx(0.0));
    CHECK(cov.signature().empty());
    cov.hit("state:reset");
    cov.hit("state:reset");
    cov.hit("action:sensor_read");
    CHECK(cov.covered() == 2);
    CHECK(cov.hits.at("state:reset") == 2);
    CHECK(cov.signature() == "state:reset;action:sensor_read");
    CHECK_THROWS(cov.hit("state:unheard_of"));
}

TEST_CASE("coverage text round trips") {
    SutCoverage cov = SutCoverage::empty();
    cov.hit("state:grab");
    cov.hit("branch:gaze_ok");
    cov.hit("branch:gaze_ok");
    SutCoverage back = SutCoverage::from_text(cov.to_text());
    CHECK(back.hits == cov.hits);
    CHECK_THROWS(SutCoverage::from_text("3 branch:imaginary\n"));
}

TEST_CASE("event log text round trips with spaces in payloads") {
    SimEventLog log;
    log.record(0.0, "state", "reset");
    log.record(43.0, "sensor", "1 1 1");
    log.record(46.5, "leg", "release 1");
    SimEventLog back = SimEventLog::from_text(log.to_text());
    REQUIRE(back.entries.size() == 3);
    CHECK(back.entries[1].payload == "1 1 1");
    CHECK(back.entries[2].payload == "release 1");
    CHECK(back.entries[2].time == doctest::Approx(46.5));
    CHECK_THROWS(SimEventLog::from_text("justoneword\n"));
}

TEST_CASE("fault config text round trips") {
    FaultConfig f;
    f.gaze_flip = 0.25;
    f.release_latency_lo = 4.0;
    f.release_latency_hi = 4.0;
    f.hand_hazard = 1.0;
    f.speed_cap = 0.5;
    FaultConfig back = FaultConfig::from_text(f.to_text());
    CHECK(back.gaze_flip == doctest::Approx(0.25));
    CHECK(back.release_latency_lo == doctest::Approx(4.0));
    CHECK(back.release_latency_hi == doctest::Approx(4.0));
    CHECK(back.hand_hazard == doctest::Approx(1.0));
    CHECK(back.speed_cap == doctest::Approx(0.5));
    CHECK_THROWS(FaultConfig::from_text("gaze_flip 0.5\n"));
    CHECK_THROWS(FaultConfig::from_text("warp_drive=1\n"));
}

TEST_CASE("four clean handovers reach finished") {
    std::vector<TimedStimulus> stimuli;
    for (int leg = 0; leg < 4; ++leg)
        for (auto& st : happy_leg()) stimuli.push_back(st);
    SimResult r = run_simulation(make_test(stimuli), pinned_faults(), 5);

    CHECK(r.final_state == "finished");
    CHECK_FALSE(r.hit_time_cap);
    CHECK(find_entry(r.log, "leg", "release 4") != nullptr);
    CHECK(count_entries(r.log, "delivery") == 4);
    CHECK(hit_count(r, "branch:release_all_delivered") == 1);
    CHECK(hit_count(r, "branch:release_more_legs") == 3);
    CHECK(hit_count(r, "branch:waiting_voice_leg") == 4);
    CHECK(hit_count(r, "branch:sensing_voice_ready") == 4);
    CHECK(hit_count(r, "branch:gaze_ok") == 4);
    CHECK(hit_count(r, "branch:pressure_ok") == 4);
    CHECK(hit_count(r, "branch:location_ok") == 4);
    CHECK(hit_count(r, "branch:unexpected_input") == 0);
    CHECK(hit_count(r, "state:discard") == 0);
    CHECK(hit_count(r, "branch:sensing_window_timeout") == 0);
    // 7 states + 7 branches + 10 actions; no discard, timeout, or retract.
    CHECK(r.coverage.covered() == 24);
}

TEST_CASE("handover timeline follows the rig's fixed delays") {
    // Reset runs 20s; the leg request buffered at t=0 is accepted then.
    // Grab takes 8s, the offer 4s, so the signal and sensing start at 32.
    // The ready call lands at 33 and the sensors settle for 10s more.
    SimResult r = run_simulation(make_test(happy_leg()), pinned_faults(4.0), 5);

    const SimLogEntry* sensor = find_entry(r.log, "sensor", "1 1 1");
    REQUIRE(sensor != nullptr);
    CHECK(sensor->time == doctest::Approx(43.0));
    const SimLogEntry* open = find_entry(r.log, "hand", "open");
    REQUIRE(open != nullptr);
    CHECK(open->time == doctest::Approx(47.0));  // read + pinned latency 4
    const SimLogEntry* close = find_entry(r.log, "hand", "close");
    REQUIRE(close != nullptr);
    CHECK(close->time == doctest::Approx(28.0));
    // One leg delivered, then the stream dries up and the wait times out.
    CHECK(r.final_state == "timed_out");
    CHECK(hit_count(r, "branch:waiting_voice_timeout") == 1);
}

TEST_CASE("guard chain records how far the posture got") {
    auto run_with_postures = [](bool gaze, bool pressure, bool location) {
        std::vector<TimedStimulus> stimuli = {
            voice("leg", 5.0),
            wait_signal(120.0),
            voice("humanReady", 2.0, 1.0),
        };
        if (gaze) stimuli.push_back(posture("gaze", 1, 1.0));
        if (pressure) stimuli.push_back(posture("pressure", 1, 1.0));
        if (location) stimuli.push_back(posture("location", 1, 1.0, 0.3));
        return run_simulation(make_test(stimuli), pinned_faults(), 7);
    };

    SimResult none = run_with_postures(false, false, false);
    CHECK(hit_count(none, "branch:gaze_away") == 1);
    CHECK(hit_count(none, "branch:gaze_ok") == 0);
    CHECK(hit_count(none, "branch:pressure_low") == 0);
    CHECK(hit_count(none, "state:discard") == 1);

    SimResult gaze_only = run_with_postures(true, false, false);
    CHECK(hit_count(gaze_only, "branch:gaze_ok") == 1);
    CHECK(hit_count(gaze_only, "branch:pressure_low") == 1);
    CHECK(hit_count(gaze_only, "branch:pressure_ok") == 0);
    CHECK(hit_count(gaze_only, "branch:location_off") == 0);

    SimResult no_location = run_with_postures(true, true, false);
    CHECK(hit_count(no_location, "branch:pressure_ok") == 1);
    CHECK(hit_count(no_location, "branch:location_off") == 1);
    CHECK(hit_count(no_location, "branch:location_ok") == 0);
    CHECK(hit_count(no_location, "state:release") == 0);

    SimResult all = run_with_postures(true, true, true);
    CHECK(hit_count(all, "branch:location_ok") == 1);
    CHECK(hit_count(all, "state:release") == 1);
    CHECK(hit_count(all, "state:discard") == 0);
}

TEST_CASE("sensing window expires without a ready call") {
    SimResult r =
        run_simulation(make_test({voice("leg", 5.0)}), pinned_faults(), 3);
    CHECK(hit_count(r, "branch:sensing_window_timeout") == 1);
    CHECK(hit_count(r, "action:sensor_read") == 0);
    CHECK(hit_count(r, "state:discard") == 1);
    CHECK(hit_count(r, "branch:discard_back_to_waiting") == 1);
    CHECK(hit_count(r, "action:leg_retract") == 1);
    CHECK(hit_count(r, "action:resupply_return") == 1);
    CHECK(find_entry(r.log, "leg", "retract") != nullptr);
    CHECK(find_entry(r.log, "leg", "return") != nullptr);
    CHECK(r.final_state == "timed_out");
}

TEST_CASE("a ready call after the window lands as unexpected") {
    // Signal at 32, window shuts at 47, discard returns to waiting at 49.
    // A 19s reaction delay puts the utterance at 51, out of turn.
    SimResult r = run_simulation(
        make_test({voice("leg", 5.0), wait_signal(120.0),
                   voice("humanReady", 2.0, 19.0)}),
        pinned_faults(), 3);
    CHECK(hit_count(r, "branch:sensing_window_timeout") == 1);
    CHECK(hit_count(r, "branch:unexpected_input") == 1);
    CHECK(hit_count(r, "action:sensor_read") == 0);
    CHECK(find_entry(r.log, "voice", "unexpected humanReady") != nullptr);
}

TEST_CASE("ready during grab aborts and the stale grab timer stays dead") {
    // The utterance at t=22 interrupts the 20..28 grab. The hand close
    // scheduled for t=28 must not fire out of the discard that follows.
    SimResult r = run_simulation(
        make_test({voice("leg", 5.0), voice("humanReady", 2.0, 17.0)}),
        pinned_faults(), 3);
    CHECK(hit_count(r, "branch:unexpected_input") == 1);
    CHECK(hit_count(r, "state:discard") == 1);
    CHECK(hit_count(r, "action:hand_close") == 0);
    CHECK(hit_count(r, "state:offer") == 0);
    CHECK(find_entry(r.log, "hand", "close") == nullptr);
    CHECK(r.final_state == "timed_out");
}

TEST_CASE("ready during offer aborts before the signal") {
    // Offer runs 28..32; a 25s delay lands the utterance at t=30.
    SimResult r = run_simulation(
        make_test({voice("leg", 5.0), voice("humanReady", 2.0, 25.0)}),
        pinned_faults(), 3);
    CHECK(hit_count(r, "action:hand_close") == 1);
    CHECK(hit_count(r, "action:offer_signal") == 0);
    CHECK(hit_count(r, "state:sensing") == 0);
    CHECK(hit_count(r, "state:discard") == 1);
    CHECK(count_entries(r.log, "signal") == 0);
}

TEST_CASE("one leg request buffers and further ones are unexpected") {
    SimResult r = run_simulation(
        make_test({voice("leg", 1.0), voice("leg", 1.0), voice("leg", 1.0)}),
        pinned_faults(), 3);
    // First buffers silently during reset, the other two are out of turn.
    CHECK(hit_count(r, "branch:unexpected_input") == 2);
    CHECK(hit_count(r, "branch:waiting_voice_leg") == 1);
    CHECK(hit_count(r, "state:grab") == 1);
}

TEST_CASE("a held pose relaxes before a late read") {
    // Gaze is set at t=5 and drifts back at t=35; the read at t=43 sees
    // the neutral pose even though the test once set it.
    SimResult r = run_simulation(
        make_test({voice("leg", 5.0), posture("gaze", 1, 1.0),
                   wait_signal(120.0), voice("humanReady", 2.0, 1.0)}),
        pinned_faults(), 3);
    CHECK(find_entry(r.log, "posture", "gaze relax") != nullptr);
    const SimLogEntry* sensor = find_entry(r.log, "sensor", "0 0 0");
    REQUIRE(sensor != nullptr);
    CHECK(hit_count(r, "branch:gaze_away") == 1);
}

TEST_CASE("a certain sensor flip inverts one bit of the read") {
    FaultConfig f = pinned_faults();
    f.gaze_flip = 1.0;
    SimResult r = run_simulation(make_test(happy_leg()), f, 3);
    CHECK(find_entry(r.log, "sensor", "0 1 1") != nullptr);
    CHECK(hit_count(r, "branch:gaze_away") == 1);
    CHECK(hit_count(r, "branch:gaze_ok") == 0);
}

TEST_CASE("hand hazard pulls the close inside the reach band") {
    FaultConfig f = pinned_faults();
    f.hand_hazard = 1.0;
    SimResult r =
        run_simulation(make_test({voice("leg", 5.0)}), f, 3);
    REQUIRE(count_entries(r.log, "distance") == 1);
    double d = 0.0;
    for (const auto& e : r.log.entries)
        if (e.channel == "distance") d = std::stod(e.payload);
    CHECK(d >= 0.02 - 1e-9);
    CHECK(d < 0.08);

    FaultConfig safe = pinned_faults();
    SimResult rs = run_simulation(make_test({voice("leg", 5.0)}), safe, 3);
    CHECK(find_entry(rs.log, "distance", "0.5000") != nullptr);
}

TEST_CASE("logged speeds stay under the commanded cap") {
    std::vector<TimedStimulus> stimuli;
    for (int leg = 0; leg < 4; ++leg)
        for (auto& st : happy_leg()) stimuli.push_back(st);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        SimResult r = run_simulation(make_test(stimuli), pinned_faults(), seed);
        for (const auto& e : r.log.entries) {
            if (e.channel != "speed") continue;
            double v = std::stod(e.payload);
            CHECK(v < 0.25);
            CHECK(v >= 0.25 * 0.5 - 1e-4);
        }
    }
}

TEST_CASE("identical runs produce identical logs") {
    std::vector<TimedStimulus> stimuli;
    for (int leg = 0; leg < 4; ++leg)
        for (auto& st : happy_leg()) stimuli.push_back(st);
    FaultConfig f;  // stock faults, latency and hazard draws live
    SimResult a = run_simulation(make_test(stimuli), f, 99);
    SimResult b = run_simulation(make_test(stimuli), f, 99);
    CHECK(a.log.to_text() == b.log.to_text());
    CHECK(a.coverage.to_text() == b.coverage.to_text());
    CHECK(a.final_state == b.final_state);

    SimResult c = run_simulation(make_test(stimuli), f, 100);
    CHECK(a.log.to_text() != c.log.to_text());
}

TEST_CASE("the time cap truncates a pending run") {
    SimResult r =
        run_simulation(make_test({}), pinned_faults(), 3, 10.0);
    CHECK(r.hit_time_cap);
    CHECK(r.final_state == "reset");

    SimResult full = run_simulation(make_test({}), pinned_faults(), 3);
    CHECK_FALSE(full.hit_time_cap);
    CHECK(full.final_state == "timed_out");
}

TEST_CASE("unknown stimulus channels and kinds are rejected") {
    TimedStimulus bogus;
    bogus.channel = "telepathy";
    bogus.kind = "think";
    CHECK_THROWS(run_simulation(make_test({bogus}), pinned_faults(), 3));

    TimedStimulus wait = wait_signal(5.0);
    wait.kind = "sunrise";
    CHECK_THROWS(run_simulation(make_test({wait}), pinned_faults(), 3));

    TimedStimulus pose = posture("elbow", 1, 1.0);
    CHECK_THROWS(run_simulation(make_test({pose}), pinned_faults(), 3));
}

TEST_CASE("departing resets presence without confusing the rig") {
    TimedStimulus depart;
    depart.channel = "location";
    depart.kind = "depart";
    depart.duration = 1.0;
    depart.params.push_back({"distance", 2.0});
    SimResult r =
        run_simulation(make_test({depart}), pinned_faults(), 3);
    CHECK(count_entries(r.log, "location") == 1);
    CHECK(r.final_state == "timed_out");
}
