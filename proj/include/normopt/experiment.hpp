#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "normopt/indicators.hpp"
#include "normopt/io.hpp"
#include "normopt/moea/evolve.hpp"
#include "normopt/moea/problem.hpp"

namespace normopt {

enum class ProblemKind { two_objectives, five_objectives };

inline std::string_view problem_kind_name(ProblemKind p) noexcept {
    return p == ProblemKind::two_objectives ? "two" : "five";
}

inline ProblemKind problem_kind_from_name(std::string_view name) {
    if (name == "two") {
        return ProblemKind::two_objectives;
    }
    if (name == "five") {
        return ProblemKind::five_objectives;
    }
    throw ConfigError("unknown problem kind: " + std::string(name) + " (expected two|five)");
}

inline ObjectiveSet objective_set_for(ProblemKind p) {
    return p == ProblemKind::two_objectives ? two_objective_set() : five_objective_set();
}

/// Default population sizes per problem dimension.
inline std::size_t default_population(ProblemKind p) noexcept {
    return p == ProblemKind::two_objectives ? 100 : 210;
}

/// Full experiment description. Defaults reproduce the stock setup: four
/// algorithms, 30 runs, 500 generations, populations of 100 (two-objective)
/// or 210 (five-objective), a 10-path Monte Carlo average per fitness
/// evaluation during evolution and a 5000-sample re-evaluation of the final
/// front. A single-sample evolution budget lets sampling-lucky genomes crowd
/// the honest front extremes out of the population, so the default is the
/// smallest budget at which the extremes reliably survive to reporting.
struct ExperimentConfig {
    ProblemKind problem = ProblemKind::two_objectives;
    std::vector<Algorithm> algorithms = {Algorithm::nsga2, Algorithm::spea2, Algorithm::moeadd,
                                         Algorithm::mombi2};
    std::size_t runs = 30;
    std::uint64_t master_seed = 1;
    MoeaConfig moea = [] {
        MoeaConfig m;
        m.population = 0; // 0: resolved per problem kind
        return m;
    }();
    SimulationConfig simulation;
    std::size_t eval_samples = 10;
    std::size_t report_samples = 5000;
    std::size_t jobs = 0; // 0: hardware concurrency

    [[nodiscard]] std::size_t resolved_population() const {
        return moea.population == 0 ? default_population(problem) : moea.population;
    }

    void validate() const {
        if (runs == 0) {
            throw ConfigError("runs must be positive");
        }
        if (algorithms.empty()) {
            throw ConfigError("at least one algorithm required");
        }
        simulation.validate();
        MoeaConfig probe = moea;
        probe.population = resolved_population();
        probe.validate();
        if (eval_samples == 0 || report_samples == 0) {
            throw ConfigError("sample counts must be positive");
        }
    }
};

inline json experiment_config_to_json(const ExperimentConfig& c) {
    json algorithms = json::array();
    for (Algorithm a : c.algorithms) {
        algorithms.push_back(std::string(algorithm_name(a)));
    }
    return json{
        {"problem", std::string(problem_kind_name(c.problem))},
        {"algorithms", std::move(algorithms)},
        {"runs", c.runs},
        {"master_seed", c.master_seed},
        {"moea",
         json{{"population", c.moea.population},
              {"generations", c.moea.generations},
              {"eta_c", c.moea.eta_c},
              {"p_c", c.moea.p_c},
              {"eta_m", c.moea.eta_m},
              {"p_m", c.moea.p_m},
              {"moeadd",
               json{{"neighborhood", c.moea.neighborhood},
                    {"max_replacements", c.moea.max_replacements},
                    {"neighborhood_prob", c.moea.neighborhood_prob},
                    {"pbi_theta", c.moea.pbi_theta}}},
              {"mombi2",
               json{{"record_size", c.moea.record_size},
                    {"variance_threshold", c.moea.variance_threshold}}}}},
        {"simulation",
         json{{"num_agents", c.simulation.num_agents},
              {"num_groups", c.simulation.num_groups},
              {"interest_rate", c.simulation.interest_rate},
              {"evader_probability", c.simulation.evader_probability},
              {"path_length", c.simulation.path_length},
              {"wealth_min", c.simulation.wealth_min},
              {"wealth_max", c.simulation.wealth_max}}},
        {"evaluation", json{{"eval_samples", c.eval_samples}, {"report_samples", c.report_samples}}},
        {"jobs", c.jobs}};
}

inline ExperimentConfig experiment_config_from_json(const json& j, const std::string& context) {
    static const std::vector<std::string> known = {"problem", "algorithms", "runs", "master_seed",
                                                   "moea",    "simulation", "evaluation", "jobs"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(context + ": unknown config key '" + key + "'");
        }
    }
    ExperimentConfig c;
    try {
        if (j.contains("problem")) {
            c.problem = problem_kind_from_name(j.at("problem").get<std::string>());
        }
        if (j.contains("algorithms")) {
            c.algorithms.clear();
            for (const auto& name : j.at("algorithms")) {
                c.algorithms.push_back(algorithm_from_name(name.get<std::string>()));
            }
        }
        c.runs = j.value("runs", c.runs);
        c.master_seed = j.value("master_seed", c.master_seed);
        if (j.contains("moea")) {
            const auto& m = j.at("moea");
            c.moea.population = m.value("population", c.moea.population);
            c.moea.generations = m.value("generations", c.moea.generations);
            c.moea.eta_c = m.value("eta_c", c.moea.eta_c);
            c.moea.p_c = m.value("p_c", c.moea.p_c);
            c.moea.eta_m = m.value("eta_m", c.moea.eta_m);
            c.moea.p_m = m.value("p_m", c.moea.p_m);
            if (m.contains("moeadd")) {
                const auto& d = m.at("moeadd");
                c.moea.neighborhood = d.value("neighborhood", c.moea.neighborhood);
                c.moea.max_replacements = d.value("max_replacements", c.moea.max_replacements);
                c.moea.neighborhood_prob = d.value("neighborhood_prob", c.moea.neighborhood_prob);
                c.moea.pbi_theta = d.value("pbi_theta", c.moea.pbi_theta);
            }
            if (m.contains("mombi2")) {
                const auto& b = m.at("mombi2");
                c.moea.record_size = b.value("record_size", c.moea.record_size);
                c.moea.variance_threshold =
                    b.value("variance_threshold", c.moea.variance_threshold);
            }
        }
        if (j.contains("simulation")) {
            const auto& s = j.at("simulation");
            c.simulation.num_agents = s.value("num_agents", c.simulation.num_agents);
            c.simulation.num_groups = s.value("num_groups", c.simulation.num_groups);
            c.simulation.interest_rate = s.value("interest_rate", c.simulation.interest_rate);
            c.simulation.evader_probability =
                s.value("evader_probability", c.simulation.evader_probability);
            c.simulation.path_length = s.value("path_length", c.simulation.path_length);
            c.simulation.wealth_min = s.value("wealth_min", c.simulation.wealth_min);
            c.simulation.wealth_max = s.value("wealth_max", c.simulation.wealth_max);
        }
        if (j.contains("evaluation")) {
            const auto& e = j.at("evaluation");
            c.eval_samples = e.value("eval_samples", c.eval_samples);
            c.report_samples = e.value("report_samples", c.report_samples);
        }
        c.jobs = j.value("jobs", c.jobs);
    } catch (const json::exception& e) {
        throw ConfigError(context + ": " + e.what());
    }
    c.validate();
    return c;
}

inline ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return experiment_config_from_json(j, path.string());
}

struct RunArtifact {
    Algorithm algorithm = Algorithm::nsga2;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    std::filesystem::path front_path;
};

struct RunFailure {
    Algorithm algorithm = Algorithm::nsga2;
    std::size_t run = 0;
    std::string message;
};

struct BatchResult {
    std::vector<RunArtifact> completed;
    std::vector<RunFailure> failures;
};

namespace detail {

inline std::string run_stem(Algorithm a, std::size_t run) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03zu", run);
    return std::string(algorithm_name(a)) + "_run" + buf;
}

} // namespace detail

/// Execute runs x algorithms, each on its own derived seed, writing one
/// front CSV and one manifest per run. Tasks spread over a small worker
/// pool; completed runs survive failures elsewhere in the batch.
inline BatchResult run_batch(const ExperimentConfig& config,
                             const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir / "fronts");
    std::filesystem::create_directories(out_dir / "manifests");

    struct Task {
        Algorithm algorithm;
        std::size_t run;
    };
    std::vector<Task> tasks;
    for (Algorithm a : config.algorithms) {
        for (std::size_t r = 0; r < config.runs; ++r) {
            tasks.push_back({a, r});
        }
    }

    BatchResult result;
    std::mutex result_mutex;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        while (true) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) {
                return;
            }
            const Task task = tasks[t];
            const std::uint64_t seed =
                derive_run_seed(config.master_seed, algorithm_name(task.algorithm), task.run);
            const auto start = std::chrono::steady_clock::now();
            try {
                TaxProblem problem(config.simulation, objective_set_for(config.problem),
                                   config.eval_samples, config.report_samples, seed);
                MoeaConfig moea = config.moea;
                moea.algorithm = task.algorithm;
                moea.population = config.resolved_population();
                moea.seed = seed;
                const Front front = evolve(problem, moea);

                const std::string stem = detail::run_stem(task.algorithm, task.run);
                const auto front_path = out_dir / "fronts" / (stem + ".csv");
                write_front_csv(front_path, front);

                const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                         std::chrono::steady_clock::now() - start)
                                         .count();
                json manifest{{"algorithm", std::string(algorithm_name(task.algorithm))},
                              {"run", task.run},
                              {"seed", seed},
                              {"problem", std::string(problem_kind_name(config.problem))},
                              {"generations", moea.generations},
                              {"population", moea.population},
                              {"front", "fronts/" + stem + ".csv"},
                              {"front_size", front.size()},
                              {"wall_time_ms", wall_ms},
                              {"config", experiment_config_to_json(config)}};
                atomic_write(out_dir / "manifests" / (stem + ".json"), manifest.dump(2) + "\n");

                std::lock_guard lock(result_mutex);
                result.completed.push_back(
                    RunArtifact{task.algorithm, task.run, seed, front_path});
            } catch (const std::exception& e) {
                std::lock_guard lock(result_mutex);
                result.failures.push_back(RunFailure{task.algorithm, task.run, e.what()});
            }
        }
    };

    std::size_t jobs = config.jobs != 0 ? config.jobs : std::thread::hardware_concurrency();
    jobs = std::max<std::size_t>(1, std::min(jobs, tasks.size()));
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t i = 0; i < jobs; ++i) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }

    auto order = [](const auto& x, const auto& y) {
        return std::pair(algorithm_name(x.algorithm), x.run) <
               std::pair(algorithm_name(y.algorithm), y.run);
    };
    std::sort(result.completed.begin(), result.completed.end(), order);
    std::sort(result.failures.begin(), result.failures.end(), order);
    return result;
}

struct LoadedRun {
    Algorithm algorithm = Algorithm::nsga2;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    Front front;
};

/// Load every run recorded under a batch directory's manifests. Missing or
/// unreadable fronts are reported together, listing each offending run.
inline std::vector<LoadedRun> load_runs(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    const fs::path manifest_dir = dir / "manifests";
    if (!fs::exists(manifest_dir)) {
        throw IoError("no manifests directory under " + dir.string());
    }
    std::vector<fs::path> manifest_paths;
    for (const auto& entry : fs::directory_iterator(manifest_dir)) {
        if (entry.path().extension() == ".json") {
            manifest_paths.push_back(entry.path());
        }
    }
    std::sort(manifest_paths.begin(), manifest_paths.end());
    if (manifest_paths.empty()) {
        throw IoError("no run manifests under " + manifest_dir.string());
    }

    std::vector<LoadedRun> runs;
    std::vector<std::string> missing;
    for (const auto& path : manifest_paths) {
        json manifest;
        try {
            manifest = json::parse(read_file(path));
        } catch (const json::exception& e) {
            missing.push_back(path.string() + ": " + e.what());
            continue;
        }
        LoadedRun run;
        try {
            run.algorithm = algorithm_from_name(manifest.at("algorithm").get<std::string>());
            run.run = manifest.at("run").get<std::size_t>();
            run.seed = manifest.at("seed").get<std::uint64_t>();
            const fs::path front_path = dir / manifest.at("front").get<std::string>();
            run.front = read_front_csv(front_path);
        } catch (const std::exception& e) {
            missing.push_back(path.string() + ": " + e.what());
            continue;
        }
        runs.push_back(std::move(run));
    }
    if (!missing.empty()) {
        std::string message = "incomplete batch:";
        for (const auto& m : missing) {
            message += "\n  " + m;
        }
        throw IoError(message);
    }
    return runs;
}

struct IndicatorReport {
    std::vector<IndicatorBatch> batches;
    ObjectiveVector nadir;
    Front pf_known;
    ComparisonTable comparison;
    bool compared = false;         // false when only one algorithm is present
    bool hv_monte_carlo = false;   // true if any hypervolume used the MC fallback
};

/// The front-quality pipeline: join all solutions, fix the nadir point,
/// build PF_known by nondominated filtering, then score every run's front
/// (hypervolume against the shared nadir, IGD+ against PF_known) and compare
/// algorithms on the per-run values.
inline IndicatorReport compute_indicators(const std::vector<LoadedRun>& runs) {
    if (runs.empty()) {
        throw ContractError("indicator pipeline needs at least one run");
    }
    std::vector<Solution> all;
    for (const auto& run : runs) {
        all.insert(all.end(), run.front.solutions.begin(), run.front.solutions.end());
    }
    IndicatorReport report;
    report.nadir = nadir_point(all);
    report.pf_known = nondominated_filter(std::span<const Solution>(all));

    std::vector<Algorithm> seen;
    for (const auto& run : runs) {
        if (std::find(seen.begin(), seen.end(), run.algorithm) == seen.end()) {
            seen.push_back(run.algorithm);
        }
    }
    std::sort(seen.begin(), seen.end(), [](Algorithm a, Algorithm b) {
        return algorithm_name(a) < algorithm_name(b);
    });
    for (Algorithm a : seen) {
        IndicatorBatch batch;
        batch.algorithm = std::string(algorithm_name(a));
        for (const auto& run : runs) {
            if (run.algorithm != a) {
                continue;
            }
            const auto hv = hypervolume_auto(run.front, report.nadir);
            report.hv_monte_carlo = report.hv_monte_carlo || !hv.exact;
            batch.hypervolume.push_back(hv.value);
            batch.igd_plus.push_back(igd_plus(run.front, report.pf_known));
            batch.run_seeds.push_back(run.seed);
        }
        report.batches.push_back(std::move(batch));
    }

    if (report.batches.size() >= 2) {
        report.comparison = compare_algorithms(report.batches);
        report.compared = true;
    } else {
        report.comparison.hypervolume.push_back(
            detail::summarize(report.batches.front().algorithm, report.batches.front().hypervolume));
        report.comparison.igd_plus.push_back(
            detail::summarize(report.batches.front().algorithm, report.batches.front().igd_plus));
        report.comparison.hypervolume.front().best = true;
        report.comparison.igd_plus.front().best = true;
    }
    return report;
}

/// `indicators` command body: compute and persist the report files.
inline IndicatorReport write_indicator_report(const std::filesystem::path& dir) {
    const auto runs = load_runs(dir);
    IndicatorReport report = compute_indicators(runs);
    atomic_write(dir / "indicators.csv", indicator_csv(report.batches));
    json comparison = comparison_to_json(report.comparison);
    comparison["nadir"] = objective_vector_to_json(report.nadir);
    comparison["pf_known_size"] = report.pf_known.size();
    comparison["hypervolume_monte_carlo"] = report.hv_monte_carlo;
    atomic_write(dir / "comparison.json", comparison.dump(2) + "\n");
    atomic_write(dir / "comparison.md", comparison_to_markdown(report.comparison));
    write_front_csv(dir / "pf_known.csv", report.pf_known);
    return report;
}

/// Objective triples plotted for the five-objective problem.
inline std::vector<std::array<std::size_t, 3>> report_triples(std::size_t m) {
    if (m < 3) {
        return {};
    }
    if (m == 3) {
        return {{0, 1, 2}};
    }
    return {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}, {2, 3, 4}};
}

struct ReportBundle {
    std::vector<std::filesystem::path> files;
    bool empty = false;
};

/// `report` command body: tidy plot data (box plot rows and front scatter
/// files) plus a markdown summary. An empty directory produces an empty
/// bundle and no error.
inline ReportBundle write_report_bundle(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    ReportBundle bundle;
    if (!fs::exists(dir / "manifests") || !fs::exists(dir / "indicators.csv")) {
        bundle.empty = true;
        return bundle;
    }
    const auto runs = load_runs(dir);
    const fs::path report_dir = dir / "report";
    fs::create_directories(report_dir);

    // Box-plot rows: copy the per-run indicator values as tidy CSV.
    const auto batches = indicator_batches_from_csv(read_file(dir / "indicators.csv"),
                                                    (dir / "indicators.csv").string());
    std::ostringstream box;
    box << "algorithm,run,hypervolume,igd_plus\n";
    for (const auto& b : batches) {
        for (std::size_t r = 0; r < b.hypervolume.size(); ++r) {
            box << b.algorithm << ',' << r << ',' << format_double(b.hypervolume[r]) << ','
                << format_double(b.igd_plus[r]) << '\n';
        }
    }
    atomic_write(report_dir / "boxplot.csv", box.str());
    bundle.files.push_back(report_dir / "boxplot.csv");

    const std::size_t m = runs.front().front.solutions.front().objectives.scores.size();
    const auto& set = runs.front().front.solutions.front().objectives.set;
    auto name_of = [&](std::size_t k) {
        return set.empty() ? "obj" + std::to_string(k + 1) : std::string(objective_name(set[k]));
    };

    auto write_scatter = [&](const std::vector<std::size_t>& cols, const fs::path& path) {
        std::ostringstream out;
        out << "algorithm";
        for (std::size_t k : cols) {
            out << ',' << name_of(k);
        }
        out << '\n';
        for (const auto& run : runs) {
            for (const auto& s : run.front.solutions) {
                out << algorithm_name(run.algorithm);
                for (std::size_t k : cols) {
                    out << ',' << format_double(s.objectives.scores[k]);
                }
                out << '\n';
            }
        }
        atomic_write(path, out.str());
        bundle.files.push_back(path);
    };

    if (m == 2) {
        write_scatter({0, 1}, report_dir / "scatter.csv");
    } else {
        for (const auto& triple : report_triples(m)) {
            const fs::path path =
                report_dir / ("scatter_obj" + std::to_string(triple[0] + 1) + "_obj" +
                              std::to_string(triple[1] + 1) + "_obj" +
                              std::to_string(triple[2] + 1) + ".csv");
            write_scatter({triple[0], triple[1], triple[2]}, path);
        }
    }

    std::ostringstream summary;
    summary << "# Batch summary\n\n";
    summary << "Runs: " << runs.size() << "\n\n";
    summary << read_file(dir / "comparison.md");
    atomic_write(report_dir / "summary.md", summary.str());
    bundle.files.push_back(report_dir / "summary.md");
    return bundle;
}

} // namespace normopt
