#include "bdicover/belief.hpp"

#include <sstream>

namespace bdicover {

namespace {

std::string atom_text(const std::string& functor, const std::vector<std::string>& args) {
    if (args.empty()) return functor;
    std::ostringstream ss;
    ss << functor << '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) ss << ',';
        ss << args[i];
    }
    ss << ')';
    return ss.str();
}

} // namespace

std::string Belief::key() const {
    return atom_text(functor, args);
}

std::string Belief::to_string() const {
    if (source == "self" || source.empty()) return key();
    return key() + "[source(" + source + ")]";
}

bool Belief::same_atom(const Belief& other) const {
    return functor == other.functor && args == other.args;
}

bool Belief::matches(const Belief& concrete) const {
    if (functor != concrete.functor) return false;
    if (args.size() != concrete.args.size()) return false;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] != "_" && args[i] != concrete.args[i]) return false;
    }
    return true;
}

bool operator==(const Belief& a, const Belief& b) {
    return a.same_atom(b);
}

bool operator<(const Belief& a, const Belief& b) {
    if (a.functor != b.functor) return a.functor < b.functor;
    return a.args < b.args;
}

std::string Goal::to_string() const {
    return "!" + atom_text(name, args);
}

bool Goal::matches(const Goal& concrete) const {
    if (name != concrete.name) return false;
    if (args.size() != concrete.args.size()) return false;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] != "_" && args[i] != concrete.args[i]) return false;
    }
    return true;
}

bool operator==(const Goal& a, const Goal& b) {
    return a.name == b.name && a.args == b.args;
}

std::string Event::to_string() const {
    const char* sign = polarity == Polarity::Add ? "+" : "-";
    if (kind == EventKind::GoalEvent) return sign + goal.to_string();
    return sign + belief.key();
}

bool TriggerEvent::matches(const Event& e) const {
    if (kind != e.kind || polarity != e.polarity) return false;
    if (kind == EventKind::GoalEvent) return goal.matches(e.goal);
    return belief.matches(e.belief);
}

std::string TriggerEvent::to_string() const {
    const char* sign = polarity == Polarity::Add ? "+" : "-";
    if (kind == EventKind::GoalEvent) return sign + goal.to_string();
    return sign + belief.key();
}

} // namespace bdicover
