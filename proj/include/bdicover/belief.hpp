#ifndef BDICOVER_BELIEF_HPP
#define BDICOVER_BELIEF_HPP

#include <string>
#include <vector>

namespace bdicover {

// Ground atom: functor plus argument tuple. Arguments are kept as token
// strings ("1", "leg", "_"), which makes exact matching and the single-level
// wildcard "_" uniform. The source annotation records which agent asserted
// the belief; it is provenance only and never takes part in equality.
struct Belief {
    std::string functor;
    std::vector<std::string> args;
    std::string source = "self";

    // functor(arg,...) without the source annotation.
    std::string key() const;
    // key() plus "[source(x)]" when the source is not "self".
    std::string to_string() const;

    bool same_atom(const Belief& other) const;

    // Pattern match: this belief acts as the pattern, "_" matches any one
    // argument. Arities must agree.
    bool matches(const Belief& concrete) const;
};

bool operator==(const Belief& a, const Belief& b);
bool operator<(const Belief& a, const Belief& b);

struct Goal {
    std::string name;
    std::vector<std::string> args;

    std::string to_string() const;
    bool matches(const Goal& concrete) const;
};

bool operator==(const Goal& a, const Goal& b);

enum class EventKind { BeliefEvent, GoalEvent };
enum class Polarity { Add, Delete };

// A queued occurrence: something was added or deleted. Goal events only ever
// use the Add polarity.
struct Event {
    EventKind kind = EventKind::BeliefEvent;
    Polarity polarity = Polarity::Add;
    Belief belief;
    Goal goal;

    std::string to_string() const;
};

// Plan head pattern. Delete polarity is only meaningful for belief triggers.
struct TriggerEvent {
    EventKind kind = EventKind::GoalEvent;
    Polarity polarity = Polarity::Add;
    Belief belief;
    Goal goal;

    bool matches(const Event& e) const;
    std::string to_string() const;
};

} // namespace bdicover

#endif
