#include "bdicover/testgen.hpp"

#include <sstream>
#include <stdexcept>

#include "bdicover/scenario.hpp"

namespace bdicover {

AbstractAction AbstractAction::tell(std::string name) {
    AbstractAction a;
    a.kind = AbstractKind::Tell;
    a.name = std::move(name);
    return a;
}

AbstractAction AbstractAction::receive_signal() {
    AbstractAction a;
    a.kind = AbstractKind::ReceiveSignal;
    return a;
}

AbstractAction AbstractAction::set_param(std::string param, int value) {
    AbstractAction a;
    a.kind = AbstractKind::SetParam;
    a.param = std::move(param);
    a.value = value;
    return a;
}

std::string AbstractAction::to_line() const {
    switch (kind) {
        case AbstractKind::Tell: return "tell " + name;
        case AbstractKind::ReceiveSignal: return "receivesignal";
        case AbstractKind::SetParam:
            return "set_param " + param + "=" + std::to_string(value);
    }
    return {};
}

AbstractAction AbstractAction::from_line(const std::string& line) {
    std::string text = trim(line);
    if (text == "receivesignal") return receive_signal();
    if (text.rfind("tell ", 0) == 0) {
        std::string name = trim(text.substr(5));
        if (!name.empty()) return tell(name);
    }
    if (text.rfind("set_param ", 0) == 0) {
        std::string rest = trim(text.substr(10));
        auto eq = rest.find('=');
        if (eq != std::string::npos) {
            std::string param = trim(rest.substr(0, eq));
            std::string value = trim(rest.substr(eq + 1));
            if (!param.empty() && (value == "0" || value == "1"))
                return set_param(param, value == "1" ? 1 : 0);
        }
    }
    throw std::invalid_argument("unrecognized abstract action: " + text);
}

bool operator==(const AbstractAction& a, const AbstractAction& b) {
    return a.kind == b.kind && a.name == b.name && a.param == b.param &&
           a.value == b.value;
}

std::string AbstractTest::to_text() const {
    std::ostringstream out;
    for (const AbstractAction& a : actions) out << a.to_line() << '\n';
    return out.str();
}

AbstractTest AbstractTest::from_text(std::string id, const std::string& text) {
    AbstractTest test;
    test.id = std::move(id);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        test.actions.push_back(AbstractAction::from_line(line));
    }
    return test;
}

AbstractTest trace_to_abstract(const MasTrace& trace, std::string id) {
    AbstractTest test;
    test.id = std::move(id);
    for (const TraceRecord& record : trace.records) {
        bool from_environment = record.agent == kHumanAgentName ||
                                record.agent == kMetaAgentName;
        if (!from_environment) continue;
        for (const Action& action : record.actions) {
            if (action.kind == ActionKind::SendBelief &&
                action.target == kRobotAgentName) {
                test.actions.push_back(AbstractAction::tell(action.belief.functor));
            } else if (action.kind == ActionKind::Emit) {
                if (action.label == "receivesignal") {
                    test.actions.push_back(AbstractAction::receive_signal());
                } else if (action.label == "set_param" && action.args.size() == 2) {
                    test.actions.push_back(AbstractAction::set_param(
                        action.args[0], std::stoi(action.args[1])));
                }
            }
        }
    }
    return test;
}

std::vector<AbstractAction> abstract_alphabet() {
    std::vector<AbstractAction> all;
    all.push_back(AbstractAction::tell("leg"));
    all.push_back(AbstractAction::tell("humanReady"));
    all.push_back(AbstractAction::tell("human_gone"));
    all.push_back(AbstractAction::receive_signal());
    for (const char* param : {"gaze", "pressure", "location"}) {
        all.push_back(AbstractAction::set_param(param, 0));
        all.push_back(AbstractAction::set_param(param, 1));
    }
    return all;
}

std::string TimedStimulus::to_line() const {
    std::ostringstream out;
    out << channel << ' ' << kind;
    if (value >= 0) out << " value=" << value;
    out << " duration=" << format_fixed(duration, 4);
    for (const auto& [name, v] : params) out << ' ' << name << '=' << format_fixed(v, 4);
    return out.str();
}

TimedStimulus TimedStimulus::from_line(const std::string& line) {
    std::istringstream in(trim(line));
    TimedStimulus st;
    if (!(in >> st.channel >> st.kind))
        throw std::invalid_argument("unrecognized stimulus: " + line);
    std::string token;
    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("unrecognized stimulus field: " + token);
        std::string name = token.substr(0, eq);
        std::string rest = token.substr(eq + 1);
        if (name == "value")
            st.value = std::stoi(rest);
        else if (name == "duration")
            st.duration = std::stod(rest);
        else
            st.params.emplace_back(name, std::stod(rest));
    }
    return st;
}

std::string ConcreteTest::to_text() const {
    std::ostringstream out;
    out << "test " << id << '\n';
    out << "abstract " << abstract_id << '\n';
    out << "seed " << seed << '\n';
    for (const TimedStimulus& st : stimuli) out << "stimulus " << st.to_line() << '\n';
    return out.str();
}

ConcreteTest ConcreteTest::from_text(const std::string& text) {
    ConcreteTest test;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("test ", 0) == 0)
            test.id = trim(line.substr(5));
        else if (line.rfind("abstract ", 0) == 0)
            test.abstract_id = trim(line.substr(9));
        else if (line.rfind("seed ", 0) == 0)
            test.seed = std::stoull(trim(line.substr(5)));
        else if (line.rfind("stimulus ", 0) == 0)
            test.stimuli.push_back(TimedStimulus::from_line(line.substr(9)));
        else
            throw std::invalid_argument("unrecognized test line: " + line);
    }
    return test;
}

namespace {

RangeSpec parse_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        double v = std::stod(text);
        return {v, v};
    }
    return {std::stod(text.substr(0, dots)), std::stod(text.substr(dots + 2))};
}

std::string range_text(const RangeSpec& r) {
    if (r.lo == r.hi) return format_fixed(r.lo, 4);
    return format_fixed(r.lo, 4) + ".." + format_fixed(r.hi, 4);
}

double draw(Rng& rng, const RangeSpec& r) {
    if (r.lo == r.hi) return r.lo;
    return rng.uniform(r.lo, r.hi);
}

} // namespace

ParamRangeTable ParamRangeTable::defaults() {
    return from_text(
        "tell leg -> voice leg duration=5\n"
        "tell humanReady -> voice humanReady duration=2 delay=1..20\n"
        "tell human_gone -> location depart duration=2 distance=1.5..3.0\n"
        "receivesignal -> wait signal duration=60\n"
        "set_param gaze=1 -> posture gaze value=1 duration=1"
        " offset=0.1..0.2 depth=0.5..0.6 angle=15..40\n"
        "set_param gaze=0 -> posture gaze value=0 duration=1"
        " offset=0.4..0.8 depth=0.9..1.5 angle=60..120\n"
        "set_param pressure=1 -> posture pressure value=1 duration=1 force=8..15\n"
        "set_param pressure=0 -> posture pressure value=0 duration=1 force=0.5..3.0\n"
        "set_param location=1 -> posture location value=1 duration=1"
        " distance=0.02..0.08\n"
        "set_param location=0 -> posture location value=0 duration=1"
        " distance=0.35..0.6\n");
}

ParamRangeTable ParamRangeTable::from_text(const std::string& text) {
    ParamRangeTable table;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto arrow = line.find("->");
        if (arrow == std::string::npos)
            throw std::invalid_argument("range table line " +
                                        std::to_string(line_no) + ": missing ->");
        std::string key = trim(line.substr(0, arrow));
        std::istringstream rhs(trim(line.substr(arrow + 2)));
        StimulusSpec spec;
        if (!(rhs >> spec.channel >> spec.kind))
            throw std::invalid_argument("range table line " +
                                        std::to_string(line_no) +
                                        ": missing channel or kind");
        std::string token;
        while (rhs >> token) {
            auto eq = token.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("range table line " +
                                            std::to_string(line_no) +
                                            ": bad field " + token);
            std::string name = token.substr(0, eq);
            std::string value = token.substr(eq + 1);
            if (name == "value")
                spec.value = std::stoi(value);
            else if (name == "duration")
                spec.duration = parse_range(value);
            else
                spec.params.emplace_back(name, parse_range(value));
        }
        table.entries[key] = std::move(spec);
    }
    return table;
}

ParamRangeTable ParamRangeTable::load(const std::string& path) {
    return from_text(read_text_file(path));
}

std::string ParamRangeTable::to_text() const {
    std::ostringstream out;
    for (const auto& [key, spec] : entries) {
        out << key << " -> " << spec.channel << ' ' << spec.kind;
        if (spec.value >= 0) out << " value=" << spec.value;
        out << " duration=" << range_text(spec.duration);
        for (const auto& [name, range] : spec.params)
            out << ' ' << name << '=' << range_text(range);
        out << '\n';
    }
    return out.str();
}

const StimulusSpec& ParamRangeTable::require(const std::string& action_line) const {
    auto it = entries.find(action_line);
    if (it == entries.end())
        throw std::runtime_error("no concretization ranges for command '" +
                                 action_line + "'");
    return it->second;
}

ConcreteTest concretize(const AbstractTest& abstract,
                        const ParamRangeTable& table, std::uint64_t seed) {
    ConcreteTest test;
    test.id = abstract.id + "-c";
    test.abstract_id = abstract.id;
    test.seed = seed;
    Rng rng(seed);
    for (const AbstractAction& action : abstract.actions) {
        const StimulusSpec& spec = table.require(action.to_line());
        TimedStimulus st;
        st.channel = spec.channel;
        st.kind = spec.kind;
        st.value = spec.value;
        st.duration = draw(rng, spec.duration);
        for (const auto& [name, range] : spec.params)
            st.params.emplace_back(name, draw(rng, range));
        test.stimuli.push_back(std::move(st));
    }
    return test;
}

std::vector<ConcreteTest> expand(const AbstractTest& abstract,
                                 const ParamRangeTable& table,
                                 std::uint64_t base_seed, int n) {
    std::vector<ConcreteTest> tests;
    tests.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ConcreteTest test =
            concretize(abstract, table, derive_seed(base_seed, i));
        test.id = abstract.id + "-c" + std::to_string(i + 1);
        tests.push_back(std::move(test));
    }
    return tests;
}

} // namespace bdicover
