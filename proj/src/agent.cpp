#include "bdicover/agent.hpp"

#include <sstream>
#include <stdexcept>

namespace bdicover {

std::string Action::to_string() const {
    switch (kind) {
        case ActionKind::AddBelief: return "+" + belief.key();
        case ActionKind::DeleteBelief: return "-" + belief.to_string();
        case ActionKind::CreateGoal: return goal.to_string();
        case ActionKind::SendBelief: return ".send(" + target + ",tell," + belief.key() + ")";
        case ActionKind::Emit: {
            std::string s = ".emit(" + label;
            for (const auto& a : args) s += "," + a;
            return s + ")";
        }
        case ActionKind::AdvanceTime: {
            std::ostringstream ss;
            ss << "add_time(" << seconds << ")";
            return ss.str();
        }
        case ActionKind::Print: return ".print(\"" + text + "\")";
    }
    return "?";
}

std::string Plan::head_text() const {
    std::string s = trigger.to_string() + " : ";
    if (context.empty()) {
        s += "true";
    } else {
        for (std::size_t i = 0; i < context.size(); ++i) {
            if (i) s += " & ";
            if (context[i].negated) s += "not ";
            s += context[i].pattern.key();
        }
    }
    return s;
}

bool Agent::holds(const Belief& atom) const {
    // Patterns with wildcards need a scan; ground atoms use set lookup.
    bool ground = true;
    for (const auto& a : atom.args) {
        if (a == "_") { ground = false; break; }
    }
    if (ground) return beliefs.count(atom) > 0;
    for (const auto& b : beliefs) {
        if (atom.matches(b)) return true;
    }
    return false;
}

bool Agent::context_holds(const std::vector<ContextLiteral>& ctx) const {
    for (const auto& lit : ctx) {
        const bool present = holds(lit.pattern);
        if (lit.negated == present) return false;
    }
    return true;
}

const Plan* Agent::select_plan(const Event& e) const {
    for (const auto& p : plans) {
        if (p.trigger.matches(e) && context_holds(p.context)) return &p;
    }
    return nullptr;
}

void Agent::reset_runtime() {
    beliefs.clear();
    queue.clear();
}

Agent* MultiAgentSystem::find(const std::string& name) {
    for (auto& a : agents) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

const Agent* MultiAgentSystem::find(const std::string& name) const {
    for (const auto& a : agents) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

void MultiAgentSystem::start() {
    trace_ = MasTrace{};
    sim_time_ = 0.0;
    rr_cursor_ = 0;
    step_count_ = 0;
    for (auto& a : agents) {
        a.reset_runtime();
        for (const auto& b : a.initial_beliefs) {
            Event e;
            e.kind = EventKind::BeliefEvent;
            e.polarity = Polarity::Add;
            e.belief = b;
            a.queue.push_back(e);
        }
        for (const auto& g : a.initial_goals) {
            Event e;
            e.kind = EventKind::GoalEvent;
            e.polarity = Polarity::Add;
            e.goal = g;
            a.queue.push_back(e);
        }
    }
}

bool MultiAgentSystem::step() {
    if (agents.empty()) return false;
    std::size_t probe = rr_cursor_;
    Agent* active = nullptr;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        Agent& cand = agents[(probe + i) % agents.size()];
        if (!cand.queue.empty()) {
            active = &cand;
            rr_cursor_ = (probe + i + 1) % agents.size();
            break;
        }
    }
    if (!active) return false;

    Event e = active->queue.front();
    active->queue.pop_front();

    TraceRecord rec;
    rec.step = step_count_++;
    rec.agent = active->name;
    rec.event = e;

    // Plan selection sees the belief base as it stood when the event was
    // dequeued; the event's own base mutation applies afterwards. This keeps
    // every fired context re-checkable against the pre-step base.
    const Plan* plan = active->select_plan(e);

    if (e.kind == EventKind::BeliefEvent) {
        if (e.polarity == Polarity::Add) {
            active->beliefs.insert(e.belief);
        } else {
            active->beliefs.erase(e.belief);  // absent atom: deletion is a no-op
        }
    }

    if (plan) {
        rec.plan_id = plan->id;
        execute_body(*active, *plan, rec);
    } else if (e.kind == EventKind::GoalEvent) {
        // A goal nobody can handle is recorded, never fatal.
        rec.failed = true;
    }

    rec.sim_time = sim_time_;
    trace_.records.push_back(std::move(rec));
    trace_.steps = step_count_;
    trace_.sim_time = sim_time_;
    return true;
}

void MultiAgentSystem::execute_body(Agent& owner, const Plan& plan, TraceRecord& rec) {
    for (const auto& act : plan.body) {
        switch (act.kind) {
            case ActionKind::AddBelief: {
                Event e;
                e.kind = EventKind::BeliefEvent;
                e.polarity = Polarity::Add;
                e.belief = act.belief;
                e.belief.source = "self";
                owner.queue.push_back(e);
                break;
            }
            case ActionKind::DeleteBelief: {
                Event e;
                e.kind = EventKind::BeliefEvent;
                e.polarity = Polarity::Delete;
                e.belief = act.belief;
                owner.queue.push_back(e);
                break;
            }
            case ActionKind::CreateGoal: {
                Event e;
                e.kind = EventKind::GoalEvent;
                e.polarity = Polarity::Add;
                e.goal = act.goal;
                owner.queue.push_back(e);
                break;
            }
            case ActionKind::SendBelief: {
                Agent* target = find(act.target);
                if (!target) {
                    throw std::runtime_error("send target is not an agent in this system: " +
                                             act.target + " (from " + owner.name + ")");
                }
                Event e;
                e.kind = EventKind::BeliefEvent;
                e.polarity = Polarity::Add;
                e.belief = act.belief;
                e.belief.source = owner.name;
                target->queue.push_back(e);
                break;
            }
            case ActionKind::Emit:
            case ActionKind::Print:
                break;  // trace markers only
            case ActionKind::AdvanceTime:
                sim_time_ += act.seconds;
                break;
        }
        rec.actions.push_back(act);
    }
}

const MasTrace& MultiAgentSystem::run_to_quiescence(int max_steps) {
    start();
    while (step_count_ < max_steps) {
        if (!step()) {
            trace_.status = RunStatus::Quiescent;
            return trace_;
        }
    }
    // Budget exhausted with events still queued: livelock in the model.
    bool drained = true;
    for (const auto& a : agents) {
        if (!a.queue.empty()) { drained = false; break; }
    }
    trace_.status = drained ? RunStatus::Quiescent : RunStatus::Truncated;
    return trace_;
}

void MultiAgentSystem::post_event(const std::string& agent, const Event& e) {
    Agent* a = find(agent);
    if (!a) throw std::runtime_error("post_event: unknown agent: " + agent);
    a->queue.push_back(e);
}

int PlanCoverage::AgentCoverage::covered() const {
    return static_cast<int>(hits.size());
}

double PlanCoverage::AgentCoverage::fraction() const {
    if (total_plans == 0) return 0.0;
    return static_cast<double>(covered()) / total_plans;
}

PlanCoverage plan_coverage(const MultiAgentSystem& mas, const MasTrace& trace) {
    PlanCoverage cov;
    for (const auto& a : mas.agents) {
        cov.agents[a.name].total_plans = static_cast<int>(a.plans.size());
    }
    for (const auto& rec : trace.records) {
        if (rec.plan_id.empty()) continue;
        cov.agents[rec.agent].hits[rec.plan_id] += 1;
    }
    return cov;
}

std::string trace_to_text(const MasTrace& trace) {
    std::ostringstream ss;
    for (const auto& rec : trace.records) {
        ss << rec.step << ' ' << rec.agent << ' ' << rec.event.to_string();
        if (!rec.plan_id.empty()) {
            ss << " -> " << rec.plan_id;
            for (const auto& act : rec.actions) ss << ' ' << act.to_string();
        } else if (rec.failed) {
            ss << " -> failed";
        } else {
            ss << " -> base";
        }
        ss << '\n';
    }
    ss << (trace.status == RunStatus::Quiescent ? "quiescent" : "truncated")
       << " steps=" << trace.steps << '\n';
    return ss.str();
}

} // namespace bdicover
