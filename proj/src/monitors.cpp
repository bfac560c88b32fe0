#include "bdicover/monitors.hpp"

#include <sstream>

#include "bdicover/util.hpp"

namespace bdicover {

std::string verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Passed: return "passed";
        case Verdict::Failed: return "failed";
        case Verdict::NotChecked: return "not_checked";
    }
    return "?";
}

namespace {

void settle(AssertionOutcome& outcome) {
    if (outcome.triggers == 0)
        outcome.verdict = Verdict::NotChecked;
    else
        outcome.verdict =
            outcome.violations > 0 ? Verdict::Failed : Verdict::Passed;
}

bool is_release(const SimLogEntry& e) {
    return e.channel == "leg" && e.payload.rfind("release", 0) == 0;
}

bool is_retract(const SimLogEntry& e) {
    return e.channel == "leg" && e.payload == "retract";
}

bool is_reset(const SimLogEntry& e) {
    return e.channel == "state" && e.payload == "reset";
}

} // namespace

AssertionOutcome monitor_release_deadline(const SimEventLog& log,
                                          double deadline) {
    AssertionOutcome outcome;
    outcome.requirement = "R1";
    const auto& entries = log.entries;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].channel != "sensor" || entries[i].payload != "1 1 1")
            continue;
        ++outcome.triggers;
        bool released = false;
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            if (!is_release(entries[j])) continue;
            released = true;
            double took = entries[j].time - entries[i].time;
            if (took > deadline) {
                ++outcome.violations;
                if (outcome.diagnostic.empty()) {
                    std::ostringstream d;
                    d << "ready read at " << format_fixed(entries[i].time, 4)
                      << ", released " << format_fixed(took, 4)
                      << "s later (deadline " << format_fixed(deadline, 4)
                      << "s)";
                    outcome.diagnostic = d.str();
                }
            }
            break;
        }
        if (!released) {
            ++outcome.violations;
            if (outcome.diagnostic.empty())
                outcome.diagnostic = "ready read at " +
                                     format_fixed(entries[i].time, 4) +
                                     " never followed by a release";
        }
    }
    settle(outcome);
    return outcome;
}

AssertionOutcome monitor_no_unwanted_release(const SimEventLog& log) {
    AssertionOutcome outcome;
    outcome.requirement = "R2";
    const auto& entries = log.entries;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].channel != "sensor" || entries[i].payload == "1 1 1")
            continue;
        ++outcome.triggers;
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            if (is_retract(entries[j]) || is_reset(entries[j])) break;
            if (is_release(entries[j])) {
                ++outcome.violations;
                if (outcome.diagnostic.empty()) {
                    std::ostringstream d;
                    d << "not-ready read at " << format_fixed(entries[i].time, 4)
                      << " followed by release at "
                      << format_fixed(entries[j].time, 4);
                    outcome.diagnostic = d.str();
                }
                break;
            }
        }
    }
    settle(outcome);
    return outcome;
}

AssertionOutcome monitor_hand_clearance(const SimEventLog& log,
                                        double safe_distance) {
    AssertionOutcome outcome;
    outcome.requirement = "R3";
    const auto& entries = log.entries;
    int unpaired = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].channel != "hand" || entries[i].payload != "close")
            continue;
        bool paired = false;
        for (std::size_t j = 0; j < entries.size(); ++j) {
            if (entries[j].channel != "distance" ||
                entries[j].time != entries[i].time)
                continue;
            paired = true;
            ++outcome.triggers;
            double clearance = std::stod(entries[j].payload);
            if (clearance < safe_distance) {
                ++outcome.violations;
                if (outcome.diagnostic.empty()) {
                    std::ostringstream d;
                    d << "close at " << format_fixed(entries[i].time, 4)
                      << " with " << format_fixed(clearance, 4)
                      << "m clearance (safe "
                      << format_fixed(safe_distance, 4) << "m)";
                    outcome.diagnostic = d.str();
                }
            }
            break;
        }
        if (!paired) ++unpaired;
    }
    if (unpaired > 0) {
        if (!outcome.diagnostic.empty()) outcome.diagnostic += "; ";
        outcome.diagnostic += std::to_string(unpaired) +
                              " close(s) without a distance sample ignored";
    }
    settle(outcome);
    return outcome;
}

AssertionOutcome monitor_speed_limit(const SimEventLog& log, double limit) {
    AssertionOutcome outcome;
    outcome.requirement = "R4";
    for (const SimLogEntry& e : log.entries) {
        if (e.channel != "speed") continue;
        ++outcome.triggers;
        double speed = std::stod(e.payload);
        if (speed >= limit) {
            ++outcome.violations;
            if (outcome.diagnostic.empty()) {
                std::ostringstream d;
                d << "speed " << format_fixed(speed, 4) << " at "
                  << format_fixed(e.time, 4) << " (limit "
                  << format_fixed(limit, 4) << ")";
                outcome.diagnostic = d.str();
            }
        }
    }
    settle(outcome);
    return outcome;
}

std::vector<AssertionOutcome> run_monitors(const SimEventLog& log,
                                           const MonitorThresholds& thresholds) {
    return {
        monitor_release_deadline(log, thresholds.release_deadline),
        monitor_no_unwanted_release(log),
        monitor_hand_clearance(log, thresholds.safe_hand_distance),
        monitor_speed_limit(log, thresholds.speed_limit),
    };
}

} // namespace bdicover
