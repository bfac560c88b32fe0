#ifndef BDICOVER_AGENT_HPP
#define BDICOVER_AGENT_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bdicover/belief.hpp"

namespace bdicover {

enum class ActionKind {
    AddBelief,     // +b        queue an add-belief event to self
    DeleteBelief,  // -b        queue a delete-belief event to self
    CreateGoal,    // !g        queue an add-goal event to self
    SendBelief,    // .send(a, tell, b)  queue an add-belief event to agent a
    Emit,          // .emit(label, args...)  trace marker, no engine effect
    AdvanceTime,   // add_time(s)  advance the shared simulated clock
    Print          // .print("...")  trace marker
};

struct Action {
    ActionKind kind;
    Belief belief;                  // AddBelief / DeleteBelief / SendBelief
    Goal goal;                      // CreateGoal
    std::string target;             // SendBelief
    std::string label;              // Emit
    std::vector<std::string> args;  // Emit
    double seconds = 0.0;           // AdvanceTime
    std::string text;               // Print

    std::string to_string() const;
};

struct ContextLiteral {
    bool negated = false;
    Belief pattern;
};

struct Plan {
    TriggerEvent trigger;
    std::vector<ContextLiteral> context;  // conjunction; empty means "true"
    std::vector<Action> body;
    std::string id;       // "<agent>/<ordinal>", ordinal is 1-based
    int ordinal = 0;      // position in the declaration order, 1-based

    std::string head_text() const;
};

class Agent {
public:
    std::string name;
    std::vector<Plan> plans;            // declaration order decides selection
    std::vector<Belief> initial_beliefs;
    std::vector<Goal> initial_goals;    // duplicates preserved

    // Runtime state.
    std::set<Belief> beliefs;
    std::deque<Event> queue;

    bool holds(const Belief& atom) const;
    // Context truth under negation-as-failure against the current base.
    bool context_holds(const std::vector<ContextLiteral>& ctx) const;
    // First plan, in declaration order, whose trigger matches and whose
    // context holds. Nullptr when no plan is applicable.
    const Plan* select_plan(const Event& e) const;

    void reset_runtime();
};

// One engine step: which event was processed, by whom, what ran.
struct TraceRecord {
    int step = 0;
    std::string agent;
    Event event;
    std::string plan_id;     // empty when the event fired no plan
    bool failed = false;     // goal event with no applicable plan
    std::vector<Action> actions;  // executed body, in order
    double sim_time = 0.0;   // clock after the step
};

enum class RunStatus { Quiescent, Truncated };

struct MasTrace {
    std::vector<TraceRecord> records;
    RunStatus status = RunStatus::Quiescent;
    int steps = 0;
    double sim_time = 0.0;
};

// Per-agent plan coverage: hit counts by plan id plus library totals.
struct PlanCoverage {
    struct AgentCoverage {
        int total_plans = 0;
        std::map<std::string, int> hits;  // plan id -> times fired
        int covered() const;
        double fraction() const;
    };
    std::map<std::string, AgentCoverage> agents;
};

// Agents step round-robin in declaration order; each agent processes its
// events in FIFO order; plan bodies run to completion. With a fixed agent
// list and fixed initial events the whole run is a pure function of both.
class MultiAgentSystem {
public:
    std::vector<Agent> agents;

    Agent* find(const std::string& name);
    const Agent* find(const std::string& name) const;

    // Queues every agent's initial beliefs and goals as events and clears
    // runtime state. Call before stepping a fresh run.
    void start();

    // Processes one event of the next agent (round-robin, skipping agents
    // with empty queues). Returns false when every queue is empty.
    bool step();

    // Steps until quiescence or until max_steps, whichever comes first. A
    // budget exit marks the trace Truncated, which signals a livelock in
    // the model rather than an engine error.
    const MasTrace& run_to_quiescence(int max_steps);

    // External event injection, e.g. for tests: deliver to the named
    // agent's queue. Unknown agent names are a configuration error.
    void post_event(const std::string& agent, const Event& e);

    const MasTrace& trace() const { return trace_; }
    double sim_time() const { return sim_time_; }

private:
    void execute_body(Agent& owner, const Plan& plan, TraceRecord& rec);

    MasTrace trace_;
    double sim_time_ = 0.0;
    std::size_t rr_cursor_ = 0;
    int step_count_ = 0;
};

PlanCoverage plan_coverage(const MultiAgentSystem& mas, const MasTrace& trace);

// Human-readable trace listing, one record per line.
std::string trace_to_text(const MasTrace& trace);

} // namespace bdicover

#endif
