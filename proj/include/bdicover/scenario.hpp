#ifndef BDICOVER_SCENARIO_HPP
#define BDICOVER_SCENARIO_HPP

#include <string>
#include <vector>

#include "bdicover/agent.hpp"

namespace bdicover {

// Cooperative table-assembly scenario: a human asks a robot arm for up to
// four table legs, one at a time. For each handover the robot offers the
// leg and releases it only when gaze, pressure and location sensing all
// read "ready". The model has four agents:
//
//   meta        installed per run; tells the human the controllable beliefs
//   human       48 plans: requests, posturing per sensing channel, outcome
//   sensors     relays the human's posture to the robot as a readiness call
//   robot_code  12 plans mirroring the handover controller
//
// The controllable vocabulary has 38 beliefs in three groups:
//   [0..3]   legs_requested(1..4)    how many legs the human asks for
//   [4..5]   bored / not_bored       gives up after a failed handover or not
//   [6..37]  gpl(leg, g, p, l)       posture per leg: gaze, pressure,
//                                    location, each 0 or 1, leg-major order
struct VocabularyEntry {
    Belief belief;
    std::string group;  // "legs_requested" | "boredom" | "gpl"
    int leg = 0;        // gpl entries only
};

const std::vector<VocabularyEntry>& vocabulary();
int vocabulary_size();

// Index helpers. Out-of-range arguments throw.
int leg_count_index(int k);                      // k in 1..4
int boredom_index(bool bored);
int gpl_index(int leg, int g, int p, int l);     // leg in 1..4, flags 0/1

// Resolves a canonical belief name ("gpl(2,1,0,1)") to its index; -1 when
// the name is not in the vocabulary.
int vocabulary_index(const std::string& name);

// Group names and index ranges, one belief per line; shipped next to the
// agent files so subset configs can be written by hand.
std::string vocabulary_manifest();

// An ordered set of vocabulary indices. With the leg-major index layout,
// ascending index order equals the episode position order (leg count,
// boredom, then gpl per leg), so the canonical form is a sorted vector.
struct BeliefSubset {
    std::vector<int> indices;

    static BeliefSubset from_indices(std::vector<int> idx);  // sorts, dedups
    static BeliefSubset from_names(const std::vector<std::string>& names);

    // Exactly one leg count k, exactly one boredom flag, exactly one gpl
    // entry per leg 1..k and none beyond.
    bool valid() const;

    // A position-ordered prefix of some valid subset: leg count first, then
    // boredom, then gpl(1..m) without gaps. Used while a subset is still
    // being assembled during learning.
    bool valid_prefix() const;

    int leg_count() const;  // 0 when no leg-count belief is present
    bool contains(int index) const;
    std::vector<std::string> names() const;
    std::string to_line() const;  // comma-separated names
};

// Episode structure: position 0 picks the leg count, position 1 the boredom
// flag, positions 2..k+1 one gpl entry per leg. Legal choices at a position
// depend only on the already-chosen leg count.
int subset_positions(int leg_count);             // 2 + k
std::vector<int> legal_indices_at(int position, int leg_count);

// Fresh system with the human, sensors and robot_code agents plus an empty
// meta agent. Deterministic: stepping order is meta, human, sensors,
// robot_code.
MultiAgentSystem build_mas();

// Installs the meta agent for the given subset: one plan that tells the
// human every subset belief and then start. Rejects structurally invalid
// subsets. seed_mas_partial accepts any valid prefix instead, which is what
// reward evaluation over half-built subsets needs.
void seed_mas(MultiAgentSystem& mas, const BeliefSubset& subset);
void seed_mas_partial(MultiAgentSystem& mas, const BeliefSubset& subset);

struct ScenarioRun {
    MasTrace trace;
    PlanCoverage coverage;
};

// build + seed + run in one call. allow_partial selects seed_mas_partial.
ScenarioRun run_subset(const BeliefSubset& subset, int step_budget,
                       bool allow_partial = false);

// Highest per-run plan coverage each agent can reach over all valid
// subsets. Computed by running every k=1 subset plus a fixed list of k=4
// completions that exercise both handover outcomes in one session; the
// k<=2 exhaustive check lives in the tests.
struct ScenarioMaxima {
    int human_covered_max = 0;
    int robot_covered_max = 0;
    int human_total = 0;
    int robot_total = 0;
};

ScenarioMaxima compute_maxima(int step_budget);
std::vector<BeliefSubset> maxima_reference_subsets();

// Source text of the bundled agents, also shipped under assets/agents/.
const std::string& human_agent_source();
const std::string& sensors_agent_source();
const std::string& robot_code_agent_source();

extern const char* const kHumanAgentName;
extern const char* const kSensorsAgentName;
extern const char* const kRobotAgentName;
extern const char* const kMetaAgentName;

// Default per-run step budget: generous against the ~400 steps a full
// k=4 session needs, small enough that a livelocked partial run stays cheap.
inline constexpr int kDefaultStepBudget = 2500;

} // namespace bdicover

#endif
