#ifndef BDICOVER_CAMPAIGN_HPP
#define BDICOVER_CAMPAIGN_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bdicover/explorer.hpp"
#include "bdicover/monitors.hpp"
#include "bdicover/sutsim.hpp"
#include "bdicover/testgen.hpp"

namespace bdicover {

// A campaign lives in one directory: generate writes test_NNNN/abstract.txt
// and concrete.txt, simulate adds events.log, coverage.txt and result.txt,
// report adds report.csv, sorted_coverage.csv, summary.txt and summary.csv.
// Each stage only needs the files of the one before it.

struct GenerateConfig {
    std::string strategy = "random";  // manual | random | rl | baseline
    // manual runs every file entry; random and baseline draw this many tests;
    // rl cycles the extracted policy out to this many.
    int size = 20;
    std::uint64_t seed = 1;
    std::string manual_path;  // manual strategy input
    ParamRangeTable ranges = ParamRangeTable::defaults();
    LearningConfig learning;  // rl strategy; its seed is taken from `seed`
    int step_budget = kDefaultStepBudget;
};

struct GenerateOutcome {
    int tests = 0;
    std::vector<std::string> warnings;
    bool learned = false;  // rl only
    bool converged = false;
    int iterations = 0;
};

GenerateOutcome generate_campaign(const GenerateConfig& cfg,
                                  const std::string& dir);

struct SimulateConfig {
    FaultConfig faults;
    double time_cap = 300.0;
};

// Returns the number of tests simulated.
int simulate_campaign(const SimulateConfig& cfg, const std::string& dir);

struct ReportConfig {
    MonitorThresholds thresholds;
};

struct SuiteSummary {
    std::string strategy;
    int tests = 0;
    double coverage_mean = 0.0;
    int coverage_min = 0;
    int coverage_max = 0;
    int distinct_values = 0;  // steps in the sorted per-test coverage curve
    // requirement -> verdict name -> count
    std::map<std::string, std::map<std::string, int>> tallies;

    std::string to_text() const;
    std::string to_csv() const;  // one header row, one value row
    static SuiteSummary from_csv(const std::string& text);
};

SuiteSummary report_campaign(const ReportConfig& cfg, const std::string& dir);

// Reads each campaign's summary.csv; returns a side by side table.
std::string compare_campaigns(const std::vector<std::string>& dirs);
std::string compare_campaigns_csv(const std::vector<std::string>& dirs);

// Everything a finished campaign recorded about one test.
struct StoredTest {
    std::string id;
    AbstractTest abstract;
    ConcreteTest concrete;
    SimEventLog log;
    SutCoverage coverage;
    std::string final_state;
    bool hit_time_cap = false;
};

std::vector<std::string> campaign_test_dirs(const std::string& dir);
std::vector<StoredTest> load_campaign_tests(const std::string& dir);

// Random walks over the command alphabet, the strategy the model-driven
// suites are judged against.
AbstractTest random_command_test(Rng& rng, std::string id);

} // namespace bdicover

#endif
