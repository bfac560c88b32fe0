#ifndef BDICOVER_SUTSIM_HPP
#define BDICOVER_SUTSIM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bdicover/testgen.hpp"
#include "bdicover/util.hpp"

namespace bdicover {

// Timestamped observations from one simulated execution. Channels:
//   state    controller state entries
//   voice    utterances heard (and ones dropped as unexpected)
//   signal   the controller's offer signal
//   posture  hand posture changes applied by the test driver
//   location gross human movement (depart)
//   sensor   posture triples the controller read, "g p l"
//   hand     gripper "close" / "open"
//   distance gripper-to-hand separation sampled at each close, metres
//   delivery handover confirmations
//   leg      "release <n>" / "retract" / "return"
//   arm      arm motions back to home
//   speed    commanded motion speed per move, metres per second
struct SimLogEntry {
    double time = 0.0;
    std::string channel;
    std::string payload;
};

struct SimEventLog {
    std::vector<SimLogEntry> entries;

    void record(double time, std::string channel, std::string payload);
    std::string to_text() const;
    static SimEventLog from_text(const std::string& text);
};

// Tunable imperfections of the rig. Sensor flips misread one posture bit
// with the given probability per read.
struct FaultConfig {
    double gaze_flip = 0.0;
    double pressure_flip = 0.0;
    double location_flip = 0.0;
    double release_latency_lo = 2.0;   // seconds from ready decision to release
    double release_latency_hi = 12.0;
    double hand_hazard = 0.05;  // chance a close happens at reach distance
    double speed_cap = 0.25;    // metres per second commanded ceiling

    static FaultConfig from_text(const std::string& text);
    static FaultConfig load(const std::string& path);
    std::string to_text() const;
};

// Structural coverage over the controller implementation: every state,
// decision branch, and actuation routine it can hit. The inventory is fixed,
// so uncovered points always show up as zeros.
struct SutCoverage {
    std::map<std::string, int> hits;

    static const std::vector<std::string>& inventory();
    static SutCoverage empty();
    void hit(const std::string& key);
    int covered() const;
    int total() const;
    double fraction() const;
    // Covered point names joined by ';', an identity for coverage shapes.
    std::string signature() const;
    std::string to_text() const;  // "count key" per line, inventory order
    static SutCoverage from_text(const std::string& text);
};

struct SimResult {
    SimEventLog log;
    SutCoverage coverage;
    std::string final_state;
    bool hit_time_cap = false;
};

// Plays the test's stimuli against the assembly controller and records what
// the rig did. Deterministic for a given test, fault set, and seed.
SimResult run_simulation(const ConcreteTest& test, const FaultConfig& faults,
                         std::uint64_t seed, double time_cap = 300.0);

} // namespace bdicover

#endif
