#ifndef BDICOVER_TESTGEN_HPP
#define BDICOVER_TESTGEN_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bdicover/agent.hpp"
#include "bdicover/util.hpp"

namespace bdicover {

// Abstract tier: the environment-facing commands a model run implies.
enum class AbstractKind { Tell, ReceiveSignal, SetParam };

struct AbstractAction {
    AbstractKind kind = AbstractKind::Tell;
    std::string name;   // Tell: belief told to the controller
    std::string param;  // SetParam: gaze | pressure | location
    int value = 0;      // SetParam: 0 or 1

    static AbstractAction tell(std::string name);
    static AbstractAction receive_signal();
    static AbstractAction set_param(std::string param, int value);

    // "tell leg" | "receivesignal" | "set_param gaze=1"
    std::string to_line() const;
    static AbstractAction from_line(const std::string& line);
};

bool operator==(const AbstractAction& a, const AbstractAction& b);

struct AbstractTest {
    std::string id;
    std::vector<AbstractAction> actions;

    std::string to_text() const;  // one action per line
    static AbstractTest from_text(std::string id, const std::string& text);
};

// Projects a model trace onto the command alphabet: beliefs the human agent
// sends to the controller become tell commands, and the human's emitted
// markers become receivesignal / set_param commands. Everything else in the
// trace is internal to the model and dropped.
AbstractTest trace_to_abstract(const MasTrace& trace, std::string id);

// The full command alphabet, in a fixed order.
std::vector<AbstractAction> abstract_alphabet();

// Concrete tier: timed stimuli with drawn physical parameters.
struct TimedStimulus {
    std::string channel;  // voice | posture | wait | location
    std::string kind;     // utterance / posture name / wait kind / move kind
    int value = -1;       // posture target, -1 elsewhere
    double duration = 0.0;  // seconds; for waits this is the cap
    std::vector<std::pair<std::string, double>> params;  // drawn measurements

    std::string to_line() const;
    static TimedStimulus from_line(const std::string& line);
};

struct ConcreteTest {
    std::string id;
    std::string abstract_id;
    std::uint64_t seed = 0;
    std::vector<TimedStimulus> stimuli;

    std::string to_text() const;
    static ConcreteTest from_text(const std::string& text);
};

// Inclusive lower bound, exclusive upper; lo == hi pins the value.
struct RangeSpec {
    double lo = 0.0;
    double hi = 0.0;
};

struct StimulusSpec {
    std::string channel;
    std::string kind;
    int value = -1;
    RangeSpec duration;
    std::vector<std::pair<std::string, RangeSpec>> params;  // draw order
};

// Maps each abstract command to the stimulus shape and parameter ranges used
// to concretize it. Text form, one entry per line:
//   tell leg -> voice leg duration=5
//   set_param gaze=1 -> posture gaze value=1 duration=1 angle=15..40
struct ParamRangeTable {
    std::map<std::string, StimulusSpec> entries;  // key: abstract action line

    static ParamRangeTable defaults();
    static ParamRangeTable from_text(const std::string& text);
    static ParamRangeTable load(const std::string& path);
    std::string to_text() const;
    // Throws, naming the command, when no entry covers it.
    const StimulusSpec& require(const std::string& action_line) const;
};

ConcreteTest concretize(const AbstractTest& abstract,
                        const ParamRangeTable& table, std::uint64_t seed);

// n concrete variants of one abstract test, seeded from base_seed.
std::vector<ConcreteTest> expand(const AbstractTest& abstract,
                                 const ParamRangeTable& table,
                                 std::uint64_t base_seed, int n);

} // namespace bdicover

#endif
