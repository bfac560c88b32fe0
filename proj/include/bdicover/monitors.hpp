#ifndef BDICOVER_MONITORS_HPP
#define BDICOVER_MONITORS_HPP

#include <string>
#include <vector>

#include "bdicover/sutsim.hpp"

namespace bdicover {

enum class Verdict { Passed, Failed, NotChecked };

std::string verdict_name(Verdict verdict);

// A requirement is NotChecked when the run never triggered it; checking
// happens per trigger and one bad trigger fails the whole run.
struct AssertionOutcome {
    std::string requirement;
    Verdict verdict = Verdict::NotChecked;
    int triggers = 0;
    int violations = 0;
    std::string diagnostic;  // first violation, plus caveats
};

struct MonitorThresholds {
    double release_deadline = 10.0;   // R1: seconds from ready read to release
    double safe_hand_distance = 0.1;  // R3: metres of clearance at hand close
    double speed_limit = 0.25;        // R4: metres per second
};

// R1: every ready posture read must be followed by a leg release within the
// deadline. A trigger with no release at all is a violation.
AssertionOutcome monitor_release_deadline(const SimEventLog& log,
                                          double deadline);

// R2: after a not-ready posture read, no release may happen before the rig
// either retracts the leg or resets (or the log ends).
AssertionOutcome monitor_no_unwanted_release(const SimEventLog& log);

// R3: at each hand close the sampled clearance must be at least the safe
// distance. Closes with no same-time distance sample are not triggers; they
// are counted in the diagnostic instead.
AssertionOutcome monitor_hand_clearance(const SimEventLog& log,
                                        double safe_distance);

// R4: every commanded motion speed stays below the limit.
AssertionOutcome monitor_speed_limit(const SimEventLog& log, double limit);

// All four, in requirement order.
std::vector<AssertionOutcome> run_monitors(const SimEventLog& log,
                                           const MonitorThresholds& thresholds);

} // namespace bdicover

#endif
