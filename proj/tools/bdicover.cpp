#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bdicover/campaign.hpp"

namespace {

void add_learning_options(CLI::App* cmd, bdicover::LearningConfig& cfg) {
    cmd->add_option("--gamma", cfg.gamma, "discount factor");
    cmd->add_option("--alpha0", cfg.alpha0, "initial learning rate");
    cmd->add_option("--alpha-decay", cfg.alpha_decay,
                    "learning rate decay per iteration");
    cmd->add_option("--temperature", cfg.kT, "softmax temperature");
    cmd->add_option("--epsilon", cfg.epsilon, "convergence threshold");
    cmd->add_option("--max-iterations", cfg.max_iterations, "iteration cap");
    cmd->add_flag("--per-episode", cfg.per_episode_reward,
                  "reward once per completed subset instead of per selection");
}

void print_learning_line(bool converged, int iterations) {
    std::printf("learning %s after %d iterations\n",
                converged ? "converged" : "hit the iteration cap", iterations);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"agent-model driven test generation for the assembly rig"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand(
        "generate", "derive abstract and concrete tests from the model");
    bdicover::GenerateConfig gen_cfg;
    std::string gen_dir;
    std::string gen_ranges;
    gen->add_option("--out", gen_dir, "campaign directory")->required();
    gen->add_option("--strategy", gen_cfg.strategy,
                    "manual | random | rl | baseline");
    gen->add_option("--size", gen_cfg.size, "number of tests");
    gen->add_option("--seed", gen_cfg.seed, "campaign seed");
    gen->add_option("--manual-file", gen_cfg.manual_path,
                    "belief subsets for the manual strategy");
    gen->add_option("--ranges", gen_ranges, "concretization ranges file");
    gen->add_option("--step-budget", gen_cfg.step_budget,
                    "model step budget per run");
    add_learning_options(gen, gen_cfg.learning);

    auto* sim = app.add_subcommand("simulate", "run the rig on every test");
    bdicover::SimulateConfig sim_cfg;
    std::string sim_dir;
    std::string sim_faults;
    sim->add_option("--dir", sim_dir, "campaign directory")->required();
    sim->add_option("--faults", sim_faults, "fault configuration file");
    sim->add_option("--time-cap", sim_cfg.time_cap, "simulated seconds cap");

    auto* rep = app.add_subcommand(
        "report", "check assertions and summarize coverage");
    bdicover::ReportConfig rep_cfg;
    std::string rep_dir;
    rep->add_option("--dir", rep_dir, "campaign directory")->required();
    rep->add_option("--release-deadline", rep_cfg.thresholds.release_deadline,
                    "seconds allowed from ready read to release");
    rep->add_option("--safe-distance", rep_cfg.thresholds.safe_hand_distance,
                    "minimum clearance at hand close, metres");
    rep->add_option("--speed-limit", rep_cfg.thresholds.speed_limit,
                    "maximum commanded speed, metres per second");

    auto* cmp = app.add_subcommand("compare", "campaign summaries side by side");
    std::vector<std::string> cmp_dirs;
    std::string cmp_out;
    cmp->add_option("dirs", cmp_dirs, "reported campaign directories")
        ->required();
    cmp->add_option("--out", cmp_out, "write the combined csv here");

    auto* lrn = app.add_subcommand(
        "learn", "explore the model and extract a policy, nothing else");
    bdicover::LearningConfig lrn_cfg;
    std::string lrn_dir;
    lrn->add_option("--out", lrn_dir, "output directory")->required();
    lrn->add_option("--seed", lrn_cfg.seed, "seed");
    lrn->add_option("--step-budget", lrn_cfg.step_budget,
                    "model step budget per run");
    add_learning_options(lrn, lrn_cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (!gen_ranges.empty())
                gen_cfg.ranges = bdicover::ParamRangeTable::load(gen_ranges);
            bdicover::GenerateOutcome out =
                bdicover::generate_campaign(gen_cfg, gen_dir);
            for (const std::string& w : out.warnings)
                std::fprintf(stderr, "warning: %s\n", w.c_str());
            if (out.learned) print_learning_line(out.converged, out.iterations);
            std::printf("generated %d tests in %s\n", out.tests,
                        gen_dir.c_str());
        } else if (sim->parsed()) {
            if (!sim_faults.empty())
                sim_cfg.faults = bdicover::FaultConfig::load(sim_faults);
            int n = bdicover::simulate_campaign(sim_cfg, sim_dir);
            std::printf("simulated %d tests in %s\n", n, sim_dir.c_str());
        } else if (rep->parsed()) {
            bdicover::SuiteSummary summary =
                bdicover::report_campaign(rep_cfg, rep_dir);
            std::fputs(summary.to_text().c_str(), stdout);
        } else if (cmp->parsed()) {
            std::fputs(bdicover::compare_campaigns(cmp_dirs).c_str(), stdout);
            if (!cmp_out.empty())
                bdicover::write_text_file(
                    cmp_out, bdicover::compare_campaigns_csv(cmp_dirs));
        } else if (lrn->parsed()) {
            bdicover::StrategyResult result = bdicover::learn(lrn_cfg);
            std::filesystem::create_directories(lrn_dir);
            bdicover::write_text_file(lrn_dir + "/qtable.txt",
                                      result.q.to_text());
            bdicover::write_text_file(lrn_dir + "/diagnostics.csv",
                                      bdicover::diagnostics_to_csv(result));
            std::string pool;
            for (const bdicover::BeliefSubset& subset : result.subsets)
                pool += subset.to_line() + "\n";
            bdicover::write_text_file(lrn_dir + "/subsets.txt", pool);
            print_learning_line(result.converged, result.iterations_run);
            std::printf("extracted %zu subsets into %s\n",
                        result.subsets.size(), lrn_dir.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
