#include "bdicover/scenario.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bdicover/parser.hpp"
#include "bdicover/util.hpp"

namespace bdicover {

const char* const kHumanAgentName = "human";
const char* const kSensorsAgentName = "sensors";
const char* const kRobotAgentName = "robot_code";
const char* const kMetaAgentName = "meta";

namespace {

std::vector<VocabularyEntry> make_vocabulary() {
    std::vector<VocabularyEntry> v;
    for (int k = 1; k <= 4; ++k) {
        VocabularyEntry e;
        e.belief.functor = "legs_requested";
        e.belief.args = {std::to_string(k)};
        e.group = "legs_requested";
        v.push_back(e);
    }
    for (const char* name : {"bored", "not_bored"}) {
        VocabularyEntry e;
        e.belief.functor = name;
        e.group = "boredom";
        v.push_back(e);
    }
    for (int leg = 1; leg <= 4; ++leg) {
        for (int g = 0; g <= 1; ++g) {
            for (int p = 0; p <= 1; ++p) {
                for (int l = 0; l <= 1; ++l) {
                    VocabularyEntry e;
                    e.belief.functor = "gpl";
                    e.belief.args = {std::to_string(leg), std::to_string(g),
                                     std::to_string(p), std::to_string(l)};
                    e.group = "gpl";
                    e.leg = leg;
                    v.push_back(e);
                }
            }
        }
    }
    return v;
}

// The human walks through the legs in order. Instead of a counter it
// consumes its gpl belief when posturing (declaration order picks the
// lowest remaining leg) and rewrites legs_requested(k) downwards after each
// outcome, so "one leg left" and "that was the last leg" stay expressible
// as exact atoms.
std::string make_human_source() {
    std::ostringstream src;
    src <<
        "// Table-assembly human. All behaviour is driven by beliefs the meta\n"
        "// agent tells at run start: legs_requested(k), bored/not_bored, and\n"
        "// one gpl(leg,g,p,l) posture per requested leg.\n"
        "\n"
        "+start : bored <- .print(\"Arrives already impatient\"); !serve.\n"
        "+start : not_bored <- .print(\"Arrives relaxed\"); !serve.\n"
        "\n"
        "+!serve : not had_setback <- .print(\"Asks for a leg\"); "
        ".send(robot_code, tell, leg); .emit(receivesignal); !waitOffer.\n"
        "+!serve : had_setback <- .print(\"Asks for another leg anyway\"); "
        ".send(robot_code, tell, leg); .emit(receivesignal); !waitOffer.\n"
        "\n"
        "+!waitOffer : robot_offering <- -robot_offering; !approach.\n"
        "+!waitOffer : not robot_offering <- !waitOffer.\n"
        "\n";
    for (int leg = 1; leg <= 4; ++leg) {
        src << "// Posturing for leg " << leg << ".\n";
        for (int g = 0; g <= 1; ++g) {
            for (int p = 0; p <= 1; ++p) {
                for (int l = 0; l <= 1; ++l) {
                    const std::string atom = "gpl(" + std::to_string(leg) + "," +
                                             std::to_string(g) + "," + std::to_string(p) + "," +
                                             std::to_string(l) + ")";
                    if (g == 0 && p == 0 && l == 0) {
                        // Fully disengaged: no ready call, no posture. The
                        // robot's sensing window has to run out on its own;
                        // the relay still closes the model-level loop.
                        src << "+!approach : " << atom << " <- -" << atom
                            << "; .print(\"Ignores the offered leg\"); "
                               ".send(sensors, tell, reading(0,0,0)); !outcome.\n";
                    } else {
                        src << "+!approach : " << atom << " <- -" << atom
                            << "; .send(robot_code, tell, humanReady); "
                            << ".emit(set_param, gaze, " << g << "); "
                            << ".emit(set_param, pressure, " << p << "); "
                            << ".emit(set_param, location, " << l << "); "
                            << ".send(sensors, tell, reading(" << g << "," << p << "," << l
                            << ")); !outcome.\n";
                    }
                }
            }
        }
        src << "\n";
    }
    src <<
        "+!outcome : leg_given & legs_requested(1) <- -leg_given; "
        ".print(\"Takes the last leg, table complete\"); !next.\n"
        "+!outcome : leg_given & not legs_requested(1) <- -leg_given; "
        ".print(\"Takes the leg\"); !next.\n"
        "+!outcome : leg_withdrawn & bored <- -leg_withdrawn; "
        ".print(\"Fed up with this robot\"); !leave.\n"
        "+!outcome : leg_withdrawn & not_bored <- -leg_withdrawn; +had_setback; "
        ".print(\"Shrugs it off\"); !next.\n"
        "+!outcome : not leg_given & not leg_withdrawn <- !outcome.\n"
        "\n"
        "+!next : legs_requested(1) <- -legs_requested(1); !leave.\n"
        "+!next : legs_requested(2) <- -legs_requested(2); +legs_requested(1); !serve.\n"
        "+!next : legs_requested(3) <- -legs_requested(3); +legs_requested(2); !serve.\n"
        "+!next : legs_requested(4) <- -legs_requested(4); +legs_requested(3); !serve.\n"
        "\n"
        "+!leave : true <- .print(\"Walks away\"); .send(robot_code, tell, human_gone).\n";
    return src.str();
}

const char* kSensorsSource =
    "// Sensing bench: classifies the human's posture into the single\n"
    "// readiness call the handover controller acts on.\n"
    "\n"
    "+reading(1,1,1) : true <- .print(\"All three channels ready\"); "
    ".send(robot_code, tell, human_ready).\n"
    "+reading(_,_,_) : true <- .print(\"Channels not all ready\"); "
    ".send(robot_code, tell, human_not_ready).\n";

const char* kRobotSource =
    "// Handover controller model: wait for a request, grab and offer a leg,\n"
    "// sense, then release or withdraw. Times are the controller's motion\n"
    "// and window budgets in simulated seconds.\n"
    "\n"
    "!reset.\n"
    "\n"
    "+!reset : true <- add_time(20); .print(\"Robot is resetting\"); !waiting.\n"
    "+!waiting : not leg & not human_gone <- .print(\"Waiting\"); !waiting.\n"
    "+!waiting : leg <- add_time(40); .print(\"You asked for leg\"); -leg[source(human)]; !grabLeg.\n"
    "+!waiting : human_gone <- -human_gone; .print(\"Nobody left to serve\"); !finish.\n"
    "+!grabLeg : true <- add_time(10); .print(\"Grabbing a leg from the supply\"); !offerLeg.\n"
    "+!offerLeg : true <- add_time(5); .print(\"Holding the leg out\"); "
    ".send(human, tell, robot_offering); !sense.\n"
    "+!sense : human_ready <- -human_ready; add_time(5); .print(\"Sensors all read ready\"); !release.\n"
    "+!sense : human_not_ready <- -human_not_ready; add_time(5); .print(\"Sensors read not ready\"); !discard.\n"
    "+!sense : not human_ready & not human_not_ready <- .print(\"Sensing\"); !sense.\n"
    "+!release : true <- add_time(2); .print(\"Releasing the leg\"); "
    ".send(human, tell, leg_given); !waiting.\n"
    "+!discard : true <- add_time(2); .print(\"Withdrawing the leg\"); "
    ".send(human, tell, leg_withdrawn); !waiting.\n"
    "+!finish : true <- .print(\"Session over\").\n";

const MultiAgentSystem& mas_template() {
    static const MultiAgentSystem tmpl = [] {
        MultiAgentSystem mas;
        Agent meta;
        meta.name = kMetaAgentName;
        mas.agents.push_back(std::move(meta));
        mas.agents.push_back(parse_plans(human_agent_source(), kHumanAgentName));
        mas.agents.push_back(parse_plans(sensors_agent_source(), kSensorsAgentName));
        mas.agents.push_back(parse_plans(robot_code_agent_source(), kRobotAgentName));
        return mas;
    }();
    return tmpl;
}

std::string meta_source_for(const BeliefSubset& subset) {
    std::ostringstream src;
    src << "!inject.\n+!inject : true <- .print(\"Installing the scenario\")";
    for (int idx : subset.indices) {
        src << "; .send(human, tell, " << vocabulary()[idx].belief.key() << ")";
    }
    src << "; .send(human, tell, start).\n";
    return src.str();
}

void install_meta(MultiAgentSystem& mas, const BeliefSubset& subset) {
    Agent* meta = mas.find(kMetaAgentName);
    if (!meta) throw std::runtime_error("seed_mas: system has no meta agent");
    *meta = parse_plans(meta_source_for(subset), kMetaAgentName);
}

} // namespace

const std::vector<VocabularyEntry>& vocabulary() {
    static const std::vector<VocabularyEntry> v = make_vocabulary();
    return v;
}

int vocabulary_size() {
    return static_cast<int>(vocabulary().size());
}

int leg_count_index(int k) {
    if (k < 1 || k > 4) throw std::out_of_range("leg count must be 1..4");
    return k - 1;
}

int boredom_index(bool bored) {
    return bored ? 4 : 5;
}

int gpl_index(int leg, int g, int p, int l) {
    if (leg < 1 || leg > 4) throw std::out_of_range("gpl leg must be 1..4");
    if ((g | p | l) < 0 || g > 1 || p > 1 || l > 1) {
        throw std::out_of_range("gpl flags must be 0 or 1");
    }
    return 6 + (leg - 1) * 8 + g * 4 + p * 2 + l;
}

int vocabulary_index(const std::string& name) {
    const auto& v = vocabulary();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].belief.key() == name) return static_cast<int>(i);
    }
    return -1;
}

std::string vocabulary_manifest() {
    std::ostringstream ss;
    ss << "# Controllable belief vocabulary, one belief per line: index name group\n";
    ss << "# legs_requested: 0..3, boredom: 4..5, gpl: 6..37 (leg-major)\n";
    const auto& v = vocabulary();
    for (std::size_t i = 0; i < v.size(); ++i) {
        ss << i << ' ' << v[i].belief.key() << ' ' << v[i].group << '\n';
    }
    return ss.str();
}

BeliefSubset BeliefSubset::from_indices(std::vector<int> idx) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    for (int i : idx) {
        if (i < 0 || i >= vocabulary_size()) {
            throw std::out_of_range("belief index out of range: " + std::to_string(i));
        }
    }
    BeliefSubset s;
    s.indices = std::move(idx);
    return s;
}

BeliefSubset BeliefSubset::from_names(const std::vector<std::string>& names) {
    std::vector<int> idx;
    for (const auto& n : names) {
        int i = vocabulary_index(trim(n));
        if (i < 0) throw std::invalid_argument("unknown belief name: " + n);
        idx.push_back(i);
    }
    return from_indices(std::move(idx));
}

bool BeliefSubset::valid() const {
    if (!valid_prefix()) return false;
    const int k = leg_count();
    if (k == 0) return false;
    return static_cast<int>(indices.size()) == 2 + k;
}

bool BeliefSubset::valid_prefix() const {
    // Sorted canonical order equals position order: leg count, boredom,
    // gpl legs ascending.
    int legcount_seen = 0;
    int boredom_seen = 0;
    int k = 0;
    std::set<int> gpl_legs;
    for (int i : indices) {
        if (i < 0 || i >= vocabulary_size()) return false;
        const auto& e = vocabulary()[i];
        if (e.group == "legs_requested") {
            ++legcount_seen;
            k = i + 1;
        } else if (e.group == "boredom") {
            ++boredom_seen;
        } else {
            if (!gpl_legs.insert(e.leg).second) return false;  // two postures, one leg
        }
    }
    if (legcount_seen > 1 || boredom_seen > 1) return false;
    if (!gpl_legs.empty()) {
        if (legcount_seen == 0 || boredom_seen == 0) return false;
        // Legs must form the gapless prefix 1..m with m <= k.
        int expect = 1;
        for (int leg : gpl_legs) {
            if (leg != expect++) return false;
        }
        if (static_cast<int>(gpl_legs.size()) > k) return false;
    }
    if (boredom_seen == 1 && legcount_seen == 0) return false;
    return true;
}

int BeliefSubset::leg_count() const {
    for (int i : indices) {
        if (i >= 0 && i <= 3) return i + 1;
    }
    return 0;
}

bool BeliefSubset::contains(int index) const {
    return std::binary_search(indices.begin(), indices.end(), index);
}

std::vector<std::string> BeliefSubset::names() const {
    std::vector<std::string> out;
    for (int i : indices) out.push_back(vocabulary()[i].belief.key());
    return out;
}

std::string BeliefSubset::to_line() const {
    std::string line;
    const auto ns = names();
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (i) line += ", ";
        line += ns[i];
    }
    return line;
}

int subset_positions(int leg_count) {
    return 2 + leg_count;
}

std::vector<int> legal_indices_at(int position, int leg_count) {
    if (position == 0) return {0, 1, 2, 3};
    if (position == 1) return {4, 5};
    const int leg = position - 1;
    if (leg_count < 1 || leg > leg_count) return {};
    std::vector<int> out;
    for (int c = 0; c < 8; ++c) out.push_back(6 + (leg - 1) * 8 + c);
    return out;
}

MultiAgentSystem build_mas() {
    return mas_template();
}

void seed_mas(MultiAgentSystem& mas, const BeliefSubset& subset) {
    if (!subset.valid()) {
        throw std::invalid_argument("seed_mas: structurally invalid subset: {" +
                                    subset.to_line() + "}");
    }
    install_meta(mas, subset);
}

void seed_mas_partial(MultiAgentSystem& mas, const BeliefSubset& subset) {
    if (!subset.valid_prefix()) {
        throw std::invalid_argument("seed_mas_partial: not a valid subset prefix: {" +
                                    subset.to_line() + "}");
    }
    install_meta(mas, subset);
}

ScenarioRun run_subset(const BeliefSubset& subset, int step_budget, bool allow_partial) {
    MultiAgentSystem mas = build_mas();
    if (allow_partial) {
        seed_mas_partial(mas, subset);
    } else {
        seed_mas(mas, subset);
    }
    ScenarioRun run;
    run.trace = mas.run_to_quiescence(step_budget);
    run.coverage = plan_coverage(mas, run.trace);
    return run;
}

std::vector<BeliefSubset> maxima_reference_subsets() {
    std::vector<BeliefSubset> out;
    // Every k=1 subset.
    for (int bored = 0; bored <= 1; ++bored) {
        for (int c = 0; c < 8; ++c) {
            out.push_back(BeliefSubset::from_indices(
                {leg_count_index(1), boredom_index(bored == 1), 6 + c}));
        }
    }
    // k=4 completions covering both outcomes in one session: all-ready,
    // all-disengaged, and mixes that hit release, withdrawal and the
    // disengaged sensing window together.
    auto k4 = [](bool bored, int c1, int c2, int c3, int c4) {
        auto combo = [](int leg, int c) { return 6 + (leg - 1) * 8 + c; };
        return BeliefSubset::from_indices({leg_count_index(4), boredom_index(bored),
                                           combo(1, c1), combo(2, c2), combo(3, c3),
                                           combo(4, c4)});
    };
    out.push_back(k4(false, 7, 7, 7, 7));  // every handover succeeds
    out.push_back(k4(true, 7, 7, 7, 7));
    out.push_back(k4(false, 0, 0, 0, 0));  // every sensing window runs out
    out.push_back(k4(false, 7, 2, 0, 7));  // success, refusal, disengaged, success
    out.push_back(k4(true, 7, 2, 0, 7));
    return out;
}

ScenarioMaxima compute_maxima(int step_budget) {
    ScenarioMaxima m;
    const auto& tmpl = mas_template();
    m.human_total = static_cast<int>(tmpl.find(kHumanAgentName)->plans.size());
    m.robot_total = static_cast<int>(tmpl.find(kRobotAgentName)->plans.size());
    for (const auto& subset : maxima_reference_subsets()) {
        ScenarioRun run = run_subset(subset, step_budget);
        const auto& agents = run.coverage.agents;
        auto h = agents.find(kHumanAgentName);
        auto r = agents.find(kRobotAgentName);
        if (h != agents.end()) m.human_covered_max = std::max(m.human_covered_max, h->second.covered());
        if (r != agents.end()) m.robot_covered_max = std::max(m.robot_covered_max, r->second.covered());
    }
    return m;
}

const std::string& human_agent_source() {
    static const std::string src = make_human_source();
    return src;
}

const std::string& sensors_agent_source() {
    static const std::string src = kSensorsSource;
    return src;
}

const std::string& robot_code_agent_source() {
    static const std::string src = kRobotSource;
    return src;
}

} // namespace bdicover
