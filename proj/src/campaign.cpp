#include "bdicover/campaign.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bdicover/scenario.hpp"

namespace fs = std::filesystem;

namespace bdicover {

namespace {

std::string test_dir_name(int ordinal) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "test_%04d", ordinal);
    return buf;
}

std::string csv_quote(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void write_manifest(const std::string& dir, const std::string& strategy,
                    std::uint64_t seed, int tests) {
    std::ostringstream out;
    out << "strategy " << strategy << '\n'
        << "seed " << seed << '\n'
        << "tests " << tests << '\n';
    write_text_file(dir + "/manifest.txt", out.str());
}

std::map<std::string, std::string> read_manifest(const std::string& dir) {
    std::map<std::string, std::string> manifest;
    std::istringstream in(read_text_file(dir + "/manifest.txt"));
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        auto space = line.find(' ');
        if (space == std::string::npos) continue;
        manifest[line.substr(0, space)] = trim(line.substr(space + 1));
    }
    return manifest;
}

const std::vector<std::string>& requirement_names() {
    static const std::vector<std::string> names = {"R1", "R2", "R3", "R4"};
    return names;
}

const std::vector<std::string>& verdict_names_ordered() {
    static const std::vector<std::string> names = {"passed", "failed",
                                                   "not_checked"};
    return names;
}

} // namespace

AbstractTest random_command_test(Rng& rng, std::string id) {
    AbstractTest test;
    test.id = std::move(id);
    std::vector<AbstractAction> alphabet = abstract_alphabet();
    int length = 4 + static_cast<int>(rng.index(21));
    for (int i = 0; i < length; ++i)
        test.actions.push_back(alphabet[rng.index(alphabet.size())]);
    return test;
}

GenerateOutcome generate_campaign(const GenerateConfig& cfg,
                                  const std::string& dir) {
    fs::create_directories(dir);
    GenerateOutcome outcome;

    StrategyResult source;
    std::vector<AbstractTest> abstracts;

    if (cfg.strategy == "manual") {
        source = manual_subsets(cfg.manual_path);
    } else if (cfg.strategy == "random") {
        source = random_subsets(cfg.size, cfg.seed);
    } else if (cfg.strategy == "rl") {
        LearningConfig learning = cfg.learning;
        learning.seed = cfg.seed;
        learning.step_budget = cfg.step_budget;
        source = learn(learning);
        outcome.learned = true;
        outcome.converged = source.converged;
        outcome.iterations = source.iterations_run;
        write_text_file(dir + "/diagnostics.csv", diagnostics_to_csv(source));
        write_text_file(dir + "/qtable.txt", source.q.to_text());
    } else if (cfg.strategy == "baseline") {
        Rng rng(derive_seed(cfg.seed, 7));
        for (int i = 0; i < cfg.size; ++i)
            abstracts.push_back(random_command_test(rng, test_dir_name(i + 1)));
    } else {
        throw std::invalid_argument("unknown strategy '" + cfg.strategy + "'");
    }
    outcome.warnings = source.warnings;

    if (cfg.strategy != "baseline") {
        std::ostringstream pool;
        for (const BeliefSubset& subset : source.subsets)
            pool << subset.to_line() << '\n';
        write_text_file(dir + "/subsets.txt", pool.str());

        int tests;
        if (cfg.strategy == "rl") {
            if (source.subsets.empty())
                throw std::runtime_error("policy extraction produced no subsets");
            tests = cfg.size;
        } else {
            tests = static_cast<int>(source.subsets.size());
        }
        std::map<int, std::vector<AbstractAction>> cache;
        for (int i = 0; i < tests; ++i) {
            int pick = static_cast<int>(i % source.subsets.size());
            auto it = cache.find(pick);
            if (it == cache.end()) {
                ScenarioRun run = run_subset(source.subsets[pick],
                                             cfg.step_budget, false);
                it = cache.emplace(pick,
                                   trace_to_abstract(run.trace, "x").actions)
                         .first;
            }
            AbstractTest abstract;
            abstract.id = test_dir_name(i + 1);
            abstract.actions = it->second;
            abstracts.push_back(std::move(abstract));
        }
    }

    if (!outcome.warnings.empty()) {
        std::ostringstream warn;
        for (const std::string& w : outcome.warnings) warn << w << '\n';
        write_text_file(dir + "/warnings.txt", warn.str());
    }

    for (std::size_t i = 0; i < abstracts.size(); ++i) {
        ConcreteTest concrete = concretize(
            abstracts[i], cfg.ranges,
            derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(i)));
        std::string test_dir = dir + "/" + abstracts[i].id;
        fs::create_directories(test_dir);
        write_text_file(test_dir + "/abstract.txt", abstracts[i].to_text());
        write_text_file(test_dir + "/concrete.txt", concrete.to_text());
    }
    write_text_file(dir + "/ranges.txt", cfg.ranges.to_text());
    write_manifest(dir, cfg.strategy, cfg.seed,
                   static_cast<int>(abstracts.size()));
    outcome.tests = static_cast<int>(abstracts.size());
    return outcome;
}

std::vector<std::string> campaign_test_dirs(const std::string& dir) {
    std::vector<std::string> dirs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_directory()) continue;
        std::string name = entry.path().filename().string();
        if (name.rfind("test_", 0) == 0) dirs.push_back(entry.path().string());
    }
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

int simulate_campaign(const SimulateConfig& cfg, const std::string& dir) {
    int simulated = 0;
    for (const std::string& test_dir : campaign_test_dirs(dir)) {
        ConcreteTest concrete =
            ConcreteTest::from_text(read_text_file(test_dir + "/concrete.txt"));
        SimResult sim = run_simulation(concrete, cfg.faults,
                                       derive_seed(concrete.seed, 1),
                                       cfg.time_cap);
        write_text_file(test_dir + "/events.log", sim.log.to_text());
        write_text_file(test_dir + "/coverage.txt", sim.coverage.to_text());
        std::ostringstream result;
        result << "final_state " << sim.final_state << '\n'
               << "hit_time_cap " << (sim.hit_time_cap ? 1 : 0) << '\n';
        write_text_file(test_dir + "/result.txt", result.str());
        ++simulated;
    }
    write_text_file(dir + "/faults.txt", cfg.faults.to_text());
    return simulated;
}

std::string SuiteSummary::to_text() const {
    std::ostringstream out;
    out << "strategy " << strategy << '\n'
        << "tests " << tests << '\n'
        << "coverage mean " << format_fixed(coverage_mean, 2) << '\n'
        << "coverage min " << coverage_min << '\n'
        << "coverage max " << coverage_max << '\n'
        << "distinct values " << distinct_values << '\n';
    for (const std::string& req : requirement_names()) {
        out << req;
        auto it = tallies.find(req);
        for (const std::string& verdict : verdict_names_ordered()) {
            int count = 0;
            if (it != tallies.end()) {
                auto vit = it->second.find(verdict);
                if (vit != it->second.end()) count = vit->second;
            }
            out << ' ' << verdict << ' ' << count;
        }
        out << '\n';
    }
    return out.str();
}

std::string SuiteSummary::to_csv() const {
    std::ostringstream header;
    std::ostringstream row;
    header << "strategy,tests,coverage_mean,coverage_min,coverage_max,"
              "distinct_values";
    row << csv_quote(strategy) << ',' << tests << ','
        << format_fixed(coverage_mean, 4) << ',' << coverage_min << ','
        << coverage_max << ',' << distinct_values;
    for (const std::string& req : requirement_names()) {
        auto it = tallies.find(req);
        for (const std::string& verdict : verdict_names_ordered()) {
            header << ',' << req << '_' << verdict;
            int count = 0;
            if (it != tallies.end()) {
                auto vit = it->second.find(verdict);
                if (vit != it->second.end()) count = vit->second;
            }
            row << ',' << count;
        }
    }
    return header.str() + "\n" + row.str() + "\n";
}

SuiteSummary SuiteSummary::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string header_line, row_line;
    if (!std::getline(in, header_line) || !std::getline(in, row_line))
        throw std::invalid_argument("summary csv needs a header and a row");
    std::vector<std::string> headers = split_top_level(header_line, ',');
    std::vector<std::string> values = split_top_level(row_line, ',');
    if (headers.size() != values.size())
        throw std::invalid_argument("summary csv header/value mismatch");
    SuiteSummary s;
    for (std::size_t i = 0; i < headers.size(); ++i) {
        const std::string& key = trim(headers[i]);
        const std::string& value = trim(values[i]);
        if (key == "strategy") {
            s.strategy = value;
        } else if (key == "tests") {
            s.tests = std::stoi(value);
        } else if (key == "coverage_mean") {
            s.coverage_mean = std::stod(value);
        } else if (key == "coverage_min") {
            s.coverage_min = std::stoi(value);
        } else if (key == "coverage_max") {
            s.coverage_max = std::stoi(value);
        } else if (key == "distinct_values") {
            s.distinct_values = std::stoi(value);
        } else {
            auto underscore = key.find('_');
            if (underscore == std::string::npos)
                throw std::invalid_argument("unknown summary column " + key);
            s.tallies[key.substr(0, underscore)][key.substr(underscore + 1)] =
                std::stoi(value);
        }
    }
    return s;
}

SuiteSummary report_campaign(const ReportConfig& cfg, const std::string& dir) {
    std::map<std::string, std::string> manifest = read_manifest(dir);
    SuiteSummary summary;
    summary.strategy = manifest.count("strategy") ? manifest["strategy"] : "?";

    std::ostringstream report;
    report << "id,covered,final_state,R1,R2,R3,R4,notes\n";
    std::vector<int> covered_counts;
    std::set<int> shapes;

    for (const std::string& req : requirement_names())
        for (const std::string& verdict : verdict_names_ordered())
            summary.tallies[req][verdict] = 0;

    for (const std::string& test_dir : campaign_test_dirs(dir)) {
        std::string id = fs::path(test_dir).filename().string();
        SimEventLog log =
            SimEventLog::from_text(read_text_file(test_dir + "/events.log"));
        SutCoverage coverage =
            SutCoverage::from_text(read_text_file(test_dir + "/coverage.txt"));
        std::string final_state = "?";
        std::istringstream result(read_text_file(test_dir + "/result.txt"));
        std::string line;
        while (std::getline(result, line)) {
            if (line.rfind("final_state ", 0) == 0)
                final_state = trim(line.substr(12));
        }
        std::vector<AssertionOutcome> outcomes =
            run_monitors(log, cfg.thresholds);

        covered_counts.push_back(coverage.covered());
        shapes.insert(coverage.covered());
        std::string notes;
        report << id << ',' << coverage.covered() << ',' << final_state;
        for (const AssertionOutcome& o : outcomes) {
            report << ',' << verdict_name(o.verdict);
            summary.tallies[o.requirement][verdict_name(o.verdict)] += 1;
            if (!o.diagnostic.empty()) {
                if (!notes.empty()) notes += "; ";
                notes += o.requirement + ": " + o.diagnostic;
            }
        }
        report << ',' << csv_quote(notes) << '\n';
    }

    summary.tests = static_cast<int>(covered_counts.size());
    if (!covered_counts.empty()) {
        long total = 0;
        summary.coverage_min = covered_counts[0];
        summary.coverage_max = covered_counts[0];
        for (int c : covered_counts) {
            total += c;
            summary.coverage_min = std::min(summary.coverage_min, c);
            summary.coverage_max = std::max(summary.coverage_max, c);
        }
        summary.coverage_mean =
            static_cast<double>(total) / covered_counts.size();
    }
    summary.distinct_values = static_cast<int>(shapes.size());

    std::vector<int> sorted = covered_counts;
    std::sort(sorted.rbegin(), sorted.rend());
    std::ostringstream sorted_csv;
    sorted_csv << "rank,covered\n";
    for (std::size_t i = 0; i < sorted.size(); ++i)
        sorted_csv << (i + 1) << ',' << sorted[i] << '\n';

    write_text_file(dir + "/report.csv", report.str());
    write_text_file(dir + "/sorted_coverage.csv", sorted_csv.str());
    write_text_file(dir + "/summary.txt", summary.to_text());
    write_text_file(dir + "/summary.csv", summary.to_csv());
    return summary;
}

namespace {

std::vector<SuiteSummary> load_summaries(const std::vector<std::string>& dirs) {
    std::vector<SuiteSummary> summaries;
    for (const std::string& dir : dirs)
        summaries.push_back(
            SuiteSummary::from_csv(read_text_file(dir + "/summary.csv")));
    return summaries;
}

} // namespace

std::string compare_campaigns(const std::vector<std::string>& dirs) {
    std::vector<SuiteSummary> summaries = load_summaries(dirs);
    std::ostringstream out;
    auto row = [&](const std::string& label, auto value_of) {
        out << std::left << std::setw(18) << label << std::right;
        for (const SuiteSummary& s : summaries) out << std::setw(12) << value_of(s);
        out << '\n';
    };
    row("metric", [](const SuiteSummary& s) { return s.strategy; });
    row("tests", [](const SuiteSummary& s) { return std::to_string(s.tests); });
    row("coverage mean", [](const SuiteSummary& s) {
        return format_fixed(s.coverage_mean, 2);
    });
    row("coverage min", [](const SuiteSummary& s) {
        return std::to_string(s.coverage_min);
    });
    row("coverage max", [](const SuiteSummary& s) {
        return std::to_string(s.coverage_max);
    });
    row("distinct values", [](const SuiteSummary& s) {
        return std::to_string(s.distinct_values);
    });
    for (const std::string& req : requirement_names()) {
        for (const std::string& verdict : verdict_names_ordered()) {
            row(req + " " + verdict, [&](const SuiteSummary& s) {
                auto it = s.tallies.find(req);
                if (it == s.tallies.end()) return std::string("0");
                auto vit = it->second.find(verdict);
                return std::to_string(vit == it->second.end() ? 0
                                                              : vit->second);
            });
        }
    }
    return out.str();
}

std::string compare_campaigns_csv(const std::vector<std::string>& dirs) {
    std::vector<SuiteSummary> summaries = load_summaries(dirs);
    std::ostringstream out;
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        std::string csv = summaries[i].to_csv();
        auto newline = csv.find('\n');
        if (i == 0)
            out << "dir," << csv.substr(0, newline) << '\n';
        out << csv_quote(fs::path(dirs[i]).filename().string()) << ','
            << csv.substr(newline + 1);
    }
    return out.str();
}

std::vector<StoredTest> load_campaign_tests(const std::string& dir) {
    std::vector<StoredTest> tests;
    for (const std::string& test_dir : campaign_test_dirs(dir)) {
        StoredTest t;
        t.id = fs::path(test_dir).filename().string();
        t.abstract = AbstractTest::from_text(
            t.id, read_text_file(test_dir + "/abstract.txt"));
        t.concrete =
            ConcreteTest::from_text(read_text_file(test_dir + "/concrete.txt"));
        t.log = SimEventLog::from_text(read_text_file(test_dir + "/events.log"));
        t.coverage =
            SutCoverage::from_text(read_text_file(test_dir + "/coverage.txt"));
        std::istringstream result(read_text_file(test_dir + "/result.txt"));
        std::string line;
        while (std::getline(result, line)) {
            if (line.rfind("final_state ", 0) == 0)
                t.final_state = trim(line.substr(12));
            else if (line.rfind("hit_time_cap ", 0) == 0)
                t.hit_time_cap = trim(line.substr(13)) == "1";
        }
        tests.push_back(std::move(t));
    }
    return tests;
}

} // namespace bdicover
