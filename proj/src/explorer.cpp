#include "bdicover/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bdicover {

QTable QTable::zeros(int size) {
    QTable q;
    q.size = size;
    q.cells.assign(static_cast<std::size_t>(size) * size, 0.0);
    q.updates.assign(static_cast<std::size_t>(size) * size, 0);
    return q;
}

double QTable::at(int prev, int next) const {
    return cells[static_cast<std::size_t>(prev) * size + next];
}

double& QTable::at(int prev, int next) {
    return cells[static_cast<std::size_t>(prev) * size + next];
}

int QTable::update_count(int prev, int next) const {
    return updates[static_cast<std::size_t>(prev) * size + next];
}

double QTable::row_max(int prev) const {
    double best = at(prev, 0);
    for (int b = 1; b < size; ++b) best = std::max(best, at(prev, b));
    return best;
}

std::string QTable::to_text() const {
    std::ostringstream out;
    for (int p = 0; p < size; ++p) {
        for (int b = 0; b < size; ++b) {
            double v = at(p, b);
            if (v == 0.0) continue;
            out << p << ' ' << b << ' ' << format_fixed(v, 6) << '\n';
        }
    }
    return out.str();
}

double q_update(QTable& q, int prev, int chosen, double reward, double alpha,
                double gamma) {
    double& cell = q.at(prev, chosen);
    double updated =
        (1.0 - alpha) * cell + alpha * (reward + gamma * q.row_max(chosen));
    double delta = std::fabs(updated - cell);
    cell = updated;
    q.updates[static_cast<std::size_t>(prev) * q.size + chosen] += 1;
    return delta;
}

std::vector<double> boltzmann_probabilities(const QTable& q, int prev,
                                            const std::vector<int>& legal,
                                            double kT) {
    if (legal.empty()) throw std::invalid_argument("no legal beliefs to weigh");
    if (!(kT > 0.0)) throw std::invalid_argument("temperature must be positive");
    double top = q.at(prev, legal[0]);
    for (int b : legal) top = std::max(top, q.at(prev, b));
    std::vector<double> probs;
    probs.reserve(legal.size());
    double total = 0.0;
    for (int b : legal) {
        double w = std::exp((q.at(prev, b) - top) / kT);
        probs.push_back(w);
        total += w;
    }
    for (double& p : probs) p /= total;
    return probs;
}

int boltzmann_select(const QTable& q, int prev, const std::vector<int>& legal,
                     double kT, Rng& rng) {
    std::vector<double> probs = boltzmann_probabilities(q, prev, legal, kT);
    double u = rng.uniform(0.0, 1.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < legal.size(); ++i) {
        acc += probs[i];
        if (u < acc) return legal[i];
    }
    return legal.back();
}

double coverage_reward(double human_fraction, double robot_fraction,
                       const RewardConfig& cfg) {
    const double slack = 1e-9;
    bool human_at_max = human_fraction >= cfg.human_max_fraction - slack;
    bool robot_at_max = robot_fraction >= cfg.robot_max_fraction - slack;
    if (human_at_max && robot_at_max) return cfg.tier_both;
    bool human_near =
        human_fraction >= cfg.near_max_fraction * cfg.human_max_fraction - slack;
    bool robot_near =
        robot_fraction >= cfg.near_max_fraction * cfg.robot_max_fraction - slack;
    if (!human_near && !robot_near) return cfg.tier_none;
    double reward = 0.0;
    if (human_near) reward += cfg.tier_human;
    if (robot_near) reward += cfg.tier_robot;
    return reward;
}

double coverage_reward(const PlanCoverage& coverage, const RewardConfig& cfg) {
    double human = 0.0;
    double robot = 0.0;
    auto h = coverage.agents.find(kHumanAgentName);
    if (h != coverage.agents.end()) human = h->second.fraction();
    auto r = coverage.agents.find(kRobotAgentName);
    if (r != coverage.agents.end()) robot = r->second.fraction();
    return coverage_reward(human, robot, cfg);
}

StrategyResult manual_subsets_from_text(const std::string& text) {
    StrategyResult result;
    result.provenance = "manual";
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::vector<int> indices;
        bool ok = true;
        for (const std::string& part : split_top_level(line, ',')) {
            std::string name = trim(part);
            int idx = vocabulary_index(name);
            if (idx < 0) {
                result.warnings.push_back("line " + std::to_string(line_no) +
                                          ": unknown belief '" + name +
                                          "', entry skipped");
                ok = false;
                break;
            }
            indices.push_back(idx);
        }
        if (!ok) continue;
        BeliefSubset subset = BeliefSubset::from_indices(std::move(indices));
        if (!subset.valid()) {
            result.warnings.push_back("line " + std::to_string(line_no) +
                                      ": not a well-formed scenario subset, "
                                      "entry skipped");
            continue;
        }
        result.subsets.push_back(std::move(subset));
    }
    return result;
}

StrategyResult manual_subsets(const std::string& path) {
    return manual_subsets_from_text(read_text_file(path));
}

StrategyResult random_subsets(int n, std::uint64_t seed) {
    StrategyResult result;
    result.provenance = "random";
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        int k = 1 + static_cast<int>(rng.index(4));
        std::vector<int> indices;
        indices.push_back(leg_count_index(k));
        indices.push_back(boredom_index(rng.index(2) == 0));
        for (int leg = 1; leg <= k; ++leg) {
            int g = static_cast<int>(rng.index(2));
            int p = static_cast<int>(rng.index(2));
            int l = static_cast<int>(rng.index(2));
            indices.push_back(gpl_index(leg, g, p, l));
        }
        result.subsets.push_back(BeliefSubset::from_indices(std::move(indices)));
    }
    return result;
}

StrategyResult learn(const LearningConfig& cfg) {
    StrategyResult result;
    result.provenance = "rl";
    result.q = QTable::zeros(vocabulary_size());

    ScenarioMaxima maxima = compute_maxima(cfg.step_budget);
    RewardConfig reward_cfg = cfg.reward;
    reward_cfg.human_max_fraction =
        static_cast<double>(maxima.human_covered_max) / maxima.human_total;
    reward_cfg.robot_max_fraction =
        static_cast<double>(maxima.robot_covered_max) / maxima.robot_total;

    Rng rng(cfg.seed);
    std::vector<int> leg_count_choices = legal_indices_at(0, 1);
    int prev = -1;  // last selected belief, carried across episodes

    // One iteration builds one complete subset: the learning rate is fixed
    // within it and the convergence check looks at the largest cell change
    // across the whole iteration.
    for (int j = 0; j < cfg.max_iterations; ++j) {
        double alpha = cfg.alpha0 * std::pow(cfg.alpha_decay, j);
        std::vector<int> selected;
        int leg_count = 0;
        double max_dq = 0.0;
        double final_reward = 0.0;

        for (int position = 0;; ++position) {
            int chosen;
            if (position == 0) {
                chosen = leg_count_choices[rng.index(leg_count_choices.size())];
                leg_count = chosen + 1;
            } else {
                std::vector<int> legal = legal_indices_at(position, leg_count);
                chosen = boltzmann_select(result.q, prev, legal, cfg.kT, rng);
            }
            selected.push_back(chosen);
            bool complete = position == subset_positions(leg_count) - 1;

            double reward = 0.0;
            if (complete || !cfg.per_episode_reward) {
                BeliefSubset subset = BeliefSubset::from_indices(selected);
                ScenarioRun run = run_subset(subset, cfg.step_budget,
                                             /*allow_partial=*/!complete);
                reward = coverage_reward(run.coverage, reward_cfg);
            }
            if (complete) final_reward = reward;

            int row = prev < 0 ? chosen : prev;
            max_dq = std::max(
                max_dq,
                q_update(result.q, row, chosen, reward, alpha, cfg.gamma));
            prev = chosen;
            if (complete) break;
        }

        result.diagnostics.push_back({j, max_dq, final_reward});
        result.iterations_run = j + 1;
        if (max_dq < cfg.epsilon) {
            result.converged = true;
            break;
        }
    }

    result.subsets = extract_policy(result.q);
    return result;
}

namespace {

// Indices sorted by row value, highest first, ties to the lower index.
std::vector<int> ranked(const QTable& q, int row, std::vector<int> candidates) {
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        if (q.at(row, a) != q.at(row, b)) return q.at(row, a) > q.at(row, b);
        return a < b;
    });
    return candidates;
}

void walk(const QTable& q, int position, int leg_count, std::vector<int>& path,
          std::set<std::vector<int>>& seen, std::vector<BeliefSubset>& out) {
    if (position == subset_positions(leg_count)) {
        BeliefSubset subset = BeliefSubset::from_indices(path);
        if (seen.insert(subset.indices).second) out.push_back(std::move(subset));
        return;
    }
    std::vector<int> order =
        ranked(q, path.back(), legal_indices_at(position, leg_count));
    std::size_t keep = std::min<std::size_t>(2, order.size());
    for (std::size_t i = 0; i < keep; ++i) {
        path.push_back(order[i]);
        walk(q, position + 1, leg_count, path, seen, out);
        path.pop_back();
    }
}

} // namespace

std::vector<BeliefSubset> extract_policy(const QTable& q) {
    // Selection never consults the table for the leg count, so extraction
    // walks every leg count rather than ranking them on aliased rows.
    std::vector<BeliefSubset> out;
    std::set<std::vector<int>> seen;
    for (int root : legal_indices_at(0, 1)) {
        std::vector<int> path{root};
        walk(q, 1, root + 1, path, seen, out);
    }
    return out;
}

std::string diagnostics_to_csv(const StrategyResult& result) {
    std::ostringstream out;
    out << "iteration,max_abs_dq,reward\n";
    for (const IterationDiagnostic& d : result.diagnostics) {
        char dq[32];
        std::snprintf(dq, sizeof dq, "%.9e", d.max_abs_dq);
        out << d.iteration << ',' << dq << ',' << format_fixed(d.reward, 1)
            << '\n';
    }
    return out.str();
}

} // namespace bdicover
