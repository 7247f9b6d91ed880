// normopt command line: simulate the tax society, optimize norm sets with
// the evolutionary algorithms, score fronts, and elect a final solution.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "normopt/normopt.hpp"

namespace fs = std::filesystem;
using namespace normopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

ExperimentConfig load_config(const CommonOptions& opts) {
    ExperimentConfig config;
    if (!opts.config_path.empty()) {
        config = read_experiment_config(opts.config_path);
    }
    if (opts.seed_set) {
        config.master_seed = opts.seed;
    }
    return config;
}

int cmd_simulate(const CommonOptions& opts, const std::string& norms_path) {
    ExperimentConfig config = load_config(opts);
    const NormVector norms = read_norms_json(norms_path);
    const std::uint64_t seed = opts.seed_set ? opts.seed : config.master_seed;

    auto [society, pool] = run_path(config.simulation, norms, seed);
    const ObjectiveVector objectives =
        evaluate_path(society, pool, norms, objective_set_for(config.problem));

    const fs::path out(opts.out_dir);
    json dump = society_to_json(society);
    dump["seed"] = seed;
    dump["norms"] = norms_to_json(norms);
    atomic_write(out / "society.json", dump.dump(2) + "\n");
    atomic_write(out / "objectives.csv", objectives_to_csv(objectives));
    std::cout << "wrote " << (out / "society.json").string() << " and "
              << (out / "objectives.csv").string() << "\n";
    return kExitOk;
}

int cmd_optimize(const CommonOptions& opts, const std::string& algorithms_arg,
                 std::size_t runs_arg, const std::string& problem_arg, std::size_t jobs_arg,
                 std::size_t generations_arg, std::size_t population_arg) {
    ExperimentConfig config = load_config(opts);
    if (!problem_arg.empty()) {
        config.problem = problem_kind_from_name(problem_arg);
    }
    if (!algorithms_arg.empty()) {
        config.algorithms.clear();
        std::istringstream ss(algorithms_arg);
        std::string token;
        while (std::getline(ss, token, ',')) {
            config.algorithms.push_back(algorithm_from_name(token));
        }
    }
    if (runs_arg != 0) {
        config.runs = runs_arg;
    }
    if (jobs_arg != 0) {
        config.jobs = jobs_arg;
    }
    if (generations_arg != static_cast<std::size_t>(-1)) {
        config.moea.generations = generations_arg;
    }
    if (population_arg != 0) {
        config.moea.population = population_arg;
    }
    config.validate();

    const fs::path out(opts.out_dir);
    atomic_write(out / "config.json", experiment_config_to_json(config).dump(2) + "\n");
    const BatchResult result = run_batch(config, out);
    std::cout << result.completed.size() << " run(s) completed under " << out.string() << "\n";
    if (!result.failures.empty()) {
        std::cerr << result.failures.size() << " run(s) failed:\n";
        for (const auto& f : result.failures) {
            std::cerr << "  " << algorithm_name(f.algorithm) << " run " << f.run << ": "
                      << f.message << "\n";
        }
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_indicators(const std::string& dir) {
    const IndicatorReport report = write_indicator_report(dir);
    std::cout << "PF_known size: " << report.pf_known.size() << "\n";
    for (const auto& row : report.comparison.hypervolume) {
        std::cout << "HV   " << row.algorithm << " mean " << format_double(row.mean)
                  << (row.best ? "  <- best" : row.tied_with_best ? "  (tied with best)" : "")
                  << "\n";
    }
    for (const auto& row : report.comparison.igd_plus) {
        std::cout << "IGD+ " << row.algorithm << " mean " << format_double(row.mean)
                  << (row.best ? "  <- best" : row.tied_with_best ? "  (tied with best)" : "")
                  << "\n";
    }
    std::cout << "wrote indicators.csv, comparison.{json,md}, pf_known.csv under " << dir << "\n";
    return kExitOk;
}

int cmd_reason(const std::string& front_path, std::size_t voters, std::uint64_t seed,
               const std::string& mode_name, bool invert_collect, const std::string& out_path) {
    const Front front = read_front_csv(front_path);
    const VoteMode mode = vote_mode_from_name(mode_name);
    const auto electorate = make_voters(voters, seed);
    const ElectionResult result =
        main_reasoner(electorate, front.solutions, mode, invert_collect);

    const json report = election_to_json(result, seed, voters, mode, invert_collect);
    if (!out_path.empty()) {
        atomic_write(out_path, report.dump(2) + "\n");
    }
    std::cout << report.dump(2) << "\n";
    return kExitOk;
}

int cmd_report(const std::string& dir) {
    const ReportBundle bundle = write_report_bundle(dir);
    if (bundle.empty) {
        std::cout << "nothing to report under " << dir << " (no completed batch found)\n";
        return kExitOk;
    }
    for (const auto& f : bundle.files) {
        std::cout << "wrote " << f.string() << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"norm synthesis for the simulated tax society"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string norms_path;
    std::string algorithms_arg;
    std::string problem_arg;
    std::string mode_name = "weighted";
    std::string front_path;
    std::string dir_arg;
    std::string reason_out;
    std::size_t runs_arg = 0;
    std::size_t jobs_arg = 0;
    std::size_t generations_arg = static_cast<std::size_t>(-1);
    std::size_t population_arg = 0;
    std::size_t voters = 200;
    bool invert_collect = false;

    auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("--config", common.config_path, "experiment config JSON");
        cmd->add_option("--seed", common.seed, "master seed")
            ->each([&](const std::string&) { common.seed_set = true; });
        if (with_out) {
            cmd->add_option("--out", common.out_dir, "output directory");
        }
    };

    auto* simulate = app.add_subcommand("simulate", "run one simulation path and dump the state");
    add_common(simulate, true);
    simulate->add_option("--norms", norms_path, "norm vector JSON file")->required();

    auto* optimize = app.add_subcommand("optimize", "run the evolutionary batch");
    add_common(optimize, true);
    optimize->add_option("--algorithms", algorithms_arg,
                         "comma list of nsga2,spea2,moeadd,mombi2");
    optimize->add_option("--runs", runs_arg, "runs per algorithm");
    optimize->add_option("--problem", problem_arg, "two|five");
    optimize->add_option("--jobs", jobs_arg, "worker threads");
    optimize->add_option("--generations", generations_arg, "generations per run");
    optimize->add_option("--population", population_arg, "population size override");

    auto* indicators = app.add_subcommand("indicators", "score fronts and compare algorithms");
    indicators->add_option("dir", dir_arg, "batch output directory")->required();

    auto* reason = app.add_subcommand("reason", "elect a single solution from a front");
    reason->add_option("--front", front_path, "front CSV file")->required();
    reason->add_option("--voters", voters, "number of voting agents");
    reason->add_option("--seed", common.seed, "voter seed")
        ->each([&](const std::string&) { common.seed_set = true; });
    reason->add_option("--mode", mode_name, "weighted|literal");
    reason->add_flag("--invert-collect", invert_collect,
                     "score collect slots as 1-x (citizens prefer low taxes)");
    reason->add_option("--out", reason_out, "election report JSON path");

    auto* report = app.add_subcommand("report", "emit plot data and a summary");
    report->add_option("dir", dir_arg, "batch output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            return cmd_simulate(common, norms_path);
        }
        if (optimize->parsed()) {
            return cmd_optimize(common, algorithms_arg, runs_arg, problem_arg, jobs_arg,
                                generations_arg, population_arg);
        }
        if (indicators->parsed()) {
            return cmd_indicators(dir_arg);
        }
        if (reason->parsed()) {
            return cmd_reason(front_path, voters, common.seed_set ? common.seed : 0, mode_name,
                              invert_collect, reason_out);
        }
        if (report->parsed()) {
            return cmd_report(dir_arg);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConstraintError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
