#ifndef BDICOVER_EXPLORER_HPP
#define BDICOVER_EXPLORER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bdicover/scenario.hpp"
#include "bdicover/util.hpp"

namespace bdicover {

// Square action-value table over the belief vocabulary. Rows are the
// previously selected belief (the state proxy), columns the next choice.
struct QTable {
    int size = 0;
    std::vector<double> cells;   // row-major
    std::vector<int> updates;    // per-cell update counts, same layout

    static QTable zeros(int size);
    double at(int prev, int next) const;
    double& at(int prev, int next);
    int update_count(int prev, int next) const;
    // Highest value in a row across every column.
    double row_max(int prev) const;

    // Nonzero cells as "prev next value" lines, row-major order.
    std::string to_text() const;
};

// One temporal-difference update:
//   Q(p,b) <- (1-alpha) Q(p,b) + alpha (r + gamma max_b' Q(b,b'))
// Returns |change| of the updated cell.
double q_update(QTable& q, int prev, int chosen, double reward, double alpha,
                double gamma);

// Softmax selection among the legal columns of row prev:
//   P(b) = exp(Q(prev,b)/kT) / sum over legal b' of exp(Q(prev,b')/kT)
// Probabilities are computed max-shifted, so large values cannot overflow.
std::vector<double> boltzmann_probabilities(const QTable& q, int prev,
                                            const std::vector<int>& legal,
                                            double kT);
int boltzmann_select(const QTable& q, int prev, const std::vector<int>& legal,
                     double kT, Rng& rng);

// Reward tiers over a run's plan coverage, relative to the best coverage
// any run can reach per agent:
//   both agents at their maximum            -> tier_both
//   otherwise near-max bonuses accumulate   -> tier_human and/or tier_robot
//   neither near the maximum                -> tier_none
// "near" means fraction >= near_max_fraction * max fraction.
struct RewardConfig {
    double tier_both = 100.0;
    double tier_human = 5.0;
    double tier_robot = 1.0;
    double tier_none = -100.0;
    double near_max_fraction = 0.8;
    double human_max_fraction = 1.0;
    double robot_max_fraction = 1.0;
};

double coverage_reward(double human_fraction, double robot_fraction,
                       const RewardConfig& cfg);
double coverage_reward(const PlanCoverage& coverage, const RewardConfig& cfg);

struct LearningConfig {
    double gamma = 0.1;
    double alpha0 = 0.1;        // alpha(j) = alpha0 * alpha_decay^j
    double alpha_decay = 0.9;
    double kT = 10.0;
    double epsilon = 1e-4;      // stop when an update changes no cell by more
    int max_iterations = 1000;
    // One reward per belief selection, evaluated on the partial subset built
    // so far (the default), or one per completed subset with zero-reward
    // updates in between.
    bool per_episode_reward = false;
    std::uint64_t seed = 1;
    int step_budget = kDefaultStepBudget;
    RewardConfig reward;  // max fractions are filled in from the scenario
};

struct IterationDiagnostic {
    int iteration = 0;
    double max_abs_dq = 0.0;
    double reward = 0.0;
};

struct StrategyResult {
    std::string provenance;  // "manual" | "random" | "rl"
    std::vector<BeliefSubset> subsets;
    std::vector<std::string> warnings;   // skipped manual entries
    // Learning only:
    std::vector<IterationDiagnostic> diagnostics;
    QTable q;
    bool converged = false;
    int iterations_run = 0;
};

// Reads one subset per line, comma-separated belief names; '#' starts a
// comment. Unknown names or structurally invalid subsets are skipped with a
// warning, never fatal.
StrategyResult manual_subsets_from_text(const std::string& text);
StrategyResult manual_subsets(const std::string& path);

// Grouped pseudorandom sampling: leg count, boredom, then one gpl
// combination per requested leg, each uniform within its group.
StrategyResult random_subsets(int n, std::uint64_t seed);

// Belief selections run in one continuous stream across episodes: each
// episode picks a leg count uniformly (bypassing the table), then Boltzmann
// selection fills the remaining positions. Every iteration updates the cell
// (previous belief -> chosen belief); the very first iteration uses the
// chosen belief itself as its row. Stops on convergence or at the cap. The
// result's subsets are the extracted policy of the final table.
StrategyResult learn(const LearningConfig& cfg);

// Greedy policy readout: rank the four leg counts by their best continuation
// value, keep the top two; at every later position keep the best and
// second-best legal belief by row value (ties to the lower index); emit every
// combination of those choices, deduplicated, in walk order.
std::vector<BeliefSubset> extract_policy(const QTable& q);

// "iteration,max_abs_dq,reward" per line.
std::string diagnostics_to_csv(const StrategyResult& result);

} // namespace bdicover

#endif
