// Acceptance suite: one self-contained check per shipping criterion, each
// printed as a single pass/fail line. Exit status is the number of failures.
//
// The two batch criteria run at desk scale and dominate the wall time; on a
// two-core container the whole binary takes roughly 15-25 minutes.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "normopt/normopt.hpp"

using namespace normopt;
namespace fs = std::filesystem;

namespace {

int failures = 0;
fs::path work_root;

void report(int number, const std::string& name, bool pass, double seconds,
            const std::string& detail = "") {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << name << " ["
              << seconds << " s]";
    if (!detail.empty()) {
        std::cout << "  -- " << detail;
    }
    std::cout << "\n" << std::flush;
    if (!pass) {
        ++failures;
    }
}

template <typename F>
void run_criterion(int number, const std::string& name, double budget_seconds, F body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                              t0)
            .count() /
        1000.0;
    if (pass && budget_seconds > 0.0 && seconds > budget_seconds) {
        pass = false;
        detail += (detail.empty() ? "" : "; ") + std::string("exceeded the ") +
                  std::to_string(budget_seconds) + " s budget";
    }
    report(number, name, pass, seconds, detail);
}

// --- criterion 1 -----------------------------------------------------------
// Independent oracle: repeated scans removing the nondominated layer.
std::vector<std::size_t> oracle_ranks(const std::vector<std::vector<double>>& objs) {
    const std::size_t n = objs.size();
    std::vector<std::size_t> rank(n, n);
    std::size_t level = 0;
    std::size_t assigned = 0;
    auto dominated_by = [&](std::size_t i, std::size_t j) {
        bool better = false;
        for (std::size_t k = 0; k < objs[i].size(); ++k) {
            if (objs[j][k] > objs[i][k]) {
                return false;
            }
            if (objs[j][k] < objs[i][k]) {
                better = true;
            }
        }
        return better;
    };
    while (assigned < n) {
        std::vector<std::size_t> layer;
        for (std::size_t i = 0; i < n; ++i) {
            if (rank[i] != n) {
                continue;
            }
            bool dominated = false;
            for (std::size_t j = 0; j < n && !dominated; ++j) {
                dominated = j != i && rank[j] == n && dominated_by(i, j);
            }
            if (!dominated) {
                layer.push_back(i);
            }
        }
        for (std::size_t i : layer) {
            rank[i] = level;
        }
        assigned += layer.size();
        ++level;
    }
    return rank;
}

bool criterion_sort_oracle(std::string& detail) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> size_dist(1, 50);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = size_dist(rng);
        const std::size_t m = trial % 2 == 0 ? 2 : 5;
        std::vector<std::vector<double>> objs(n, std::vector<double>(m));
        for (auto& row : objs) {
            for (auto& v : row) {
                v = std::floor(unit(rng) * 6.0) / 6.0; // ties on purpose
            }
        }
        const auto fronts = fast_nondominated_sort(objs, Sense::minimize);
        const auto oracle = oracle_ranks(objs);
        for (std::size_t f = 0; f < fronts.size(); ++f) {
            for (std::size_t i : fronts[f]) {
                if (oracle[i] != f) {
                    detail = "mismatch at trial " + std::to_string(trial);
                    return false;
                }
            }
        }
    }
    detail = "1000 populations, exact agreement";
    return true;
}

// --- criterion 2 -----------------------------------------------------------
bool criterion_hv_oracle(std::string& detail) {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = trial % 3 == 0 ? 2 : (trial % 3 == 1 ? 3 : 5);
        const std::size_t n = 5 + static_cast<std::size_t>(unit(rng) * 25.0);
        Front front;
        for (std::size_t i = 0; i < n; ++i) {
            Solution s;
            s.objectives.scores.resize(m);
            double norm = 0.0;
            for (auto& v : s.objectives.scores) {
                v = 0.05 + unit(rng);
                norm += v * v;
            }
            // spread points toward a curved surface so no single point wins
            for (auto& v : s.objectives.scores) {
                v /= std::sqrt(norm);
            }
            front.solutions.push_back(std::move(s));
        }
        const ObjectiveVector reference{std::vector<double>(m, 0.0), {}};
        const double exact = hypervolume(front, reference);

        // Monte Carlo oracle, written independently of the library path.
        std::vector<double> hi(m, 0.0);
        for (const auto& s : front.solutions) {
            for (std::size_t k = 0; k < m; ++k) {
                hi[k] = std::max(hi[k], s.objectives.scores[k]);
            }
        }
        double box = 1.0;
        for (double h : hi) {
            box *= h;
        }
        const std::size_t samples = 1'000'000;
        std::size_t hits = 0;
        std::vector<double> x(m);
        for (std::size_t s = 0; s < samples; ++s) {
            for (std::size_t k = 0; k < m; ++k) {
                x[k] = unit(rng) * hi[k];
            }
            for (const auto& sol : front.solutions) {
                bool inside = true;
                for (std::size_t k = 0; k < m; ++k) {
                    if (x[k] > sol.objectives.scores[k]) {
                        inside = false;
                        break;
                    }
                }
                if (inside) {
                    ++hits;
                    break;
                }
            }
        }
        const double p = static_cast<double>(hits) / static_cast<double>(samples);
        const double estimate = p * box;
        const double se = box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
        if (std::abs(exact - estimate) > 3.0 * se + 1e-12) {
            detail = "trial " + std::to_string(trial) + ": exact " + std::to_string(exact) +
                     " vs MC " + std::to_string(estimate) + " (se " + std::to_string(se) + ")";
            return false;
        }
    }
    detail = "100 fronts within 3 standard errors";
    return true;
}

// --- criterion 3 -----------------------------------------------------------
bool criterion_frozen_values(std::string& detail) {
    Front single;
    single.solutions.push_back(Solution{ObjectiveVector{{0.5, 0.5}, {}}, {}});
    const ObjectiveVector origin{{0.0, 0.0}, {}};
    if (std::abs(hypervolume(single, origin) - 0.25) > 1e-12) {
        detail = "HV single box != 0.25";
        return false;
    }
    Front pair;
    pair.solutions.push_back(Solution{ObjectiveVector{{1.0, 0.5}, {}}, {}});
    pair.solutions.push_back(Solution{ObjectiveVector{{0.5, 1.0}, {}}, {}});
    if (std::abs(hypervolume(pair, origin) - 0.75) > 1e-12) {
        detail = "HV union != 0.75";
        return false;
    }
    Front ref;
    ref.solutions.push_back(Solution{ObjectiveVector{{1.0, 1.0}, {}}, {}});
    if (std::abs(igd_plus(single, ref) - 0.70711) > 1e-5) {
        detail = "IGD+ != 0.70711";
        return false;
    }
    const auto kw = kruskal_wallis({{1, 2, 3}, {4, 5, 6}});
    if (std::abs(kw.h - 3.857) > 1e-3 || std::abs(kw.p_value - 0.0495) > 1e-3) {
        detail = "KW H=" + std::to_string(kw.h) + " p=" + std::to_string(kw.p_value);
        return false;
    }
    detail = "HV 0.25/0.75, IGD+ 0.70711, KW (3.857, 0.0495)";
    return true;
}

// --- criterion 4 -----------------------------------------------------------
bool criterion_conservation(std::string& detail) {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
        SimulationConfig cfg;
        cfg.num_agents = 50 + 50 * (trial % 4);
        cfg.evader_probability = unit(rng);
        cfg.interest_rate = trial % 2 == 0 ? 0.0 : 0.05;

        NormVector norms;
        double sum = 0.0;
        for (std::size_t k = 0; k < kNumGroups; ++k) {
            norms.collect[k] = unit(rng);
            norms.redistribute[k] = unit(rng) + 1e-9;
            sum += norms.redistribute[k];
        }
        for (auto& r : norms.redistribute) {
            r /= sum;
        }
        norms.catch_rate = 0.5 * unit(rng);
        norms.fine_rate = unit(rng);

        Society society(cfg, static_cast<std::uint64_t>(trial));
        const double before = society.total_wealth();
        society.step(norms);
        const double after = society.total_wealth();
        const double collected = society.last_pool() / (1.0 + cfg.interest_rate);
        const double expected = before + cfg.interest_rate * collected;
        if (std::abs(after - expected) > 1e-6 * std::max(1.0, std::abs(expected))) {
            detail = "trial " + std::to_string(trial) + ": " + std::to_string(after) + " vs " +
                     std::to_string(expected);
            return false;
        }
        for (const auto& c : society.citizens()) {
            if (c.wealth < 0.0) {
                detail = "negative wealth at trial " + std::to_string(trial);
                return false;
            }
        }
    }
    detail = "10000 randomized steps, ledger identity within 1e-6 relative";
    return true;
}

// --- criterion 5 -----------------------------------------------------------
bool criterion_operators(std::string& detail) {
    Rng rng(505);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> p1(kGenomeSize);
        std::vector<double> p2(kGenomeSize);
        for (std::size_t i = 0; i < kGenomeSize; ++i) {
            const auto [lo, hi] = gene_bounds(i);
            p1[i] = lo + (hi - lo) * unit(rng);
            p2[i] = lo + (hi - lo) * unit(rng);
        }
        const auto [c1, c2] = sbx_crossover(p1, p2, 20.0, 0.9, rng);
        for (std::size_t i = 0; i < kGenomeSize; ++i) {
            if (std::abs((c1[i] + c2[i]) - (p1[i] + p2[i])) > 2e-9) {
                detail = "SBX mean drift at trial " + std::to_string(trial);
                return false;
            }
        }

        std::vector<double> g = c1;
        repair_genes(g);
        polynomial_mutation(std::span<double>(g), 20.0, 1.0,
                            [](std::size_t i) { return gene_bounds(i); }, rng);
        for (std::size_t i = 0; i < kGenomeSize; ++i) {
            const auto [lo, hi] = gene_bounds(i);
            if (g[i] < lo || g[i] > hi) {
                detail = "mutation out of bounds at trial " + std::to_string(trial);
                return false;
            }
        }

        repair_genes(g);
        double sum = 0.0;
        for (std::size_t k = 0; k < kNumGroups; ++k) {
            sum += g[kRedistributeOffset + k];
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            detail = "repair off the simplex at trial " + std::to_string(trial);
            return false;
        }
    }
    detail = "10000 operator applications";
    return true;
}

// --- criteria 6 and 7: desk-scale batches ----------------------------------
struct BatchSummary {
    IndicatorReport report;
    std::vector<LoadedRun> runs;
};

BatchSummary run_desk_batch(ProblemKind problem, const std::vector<Algorithm>& algorithms,
                            std::size_t runs, std::size_t generations, std::size_t report_samples,
                            std::uint64_t master_seed, const fs::path& dir) {
    ExperimentConfig config;
    config.problem = problem;
    config.algorithms = algorithms;
    config.runs = runs;
    config.master_seed = master_seed;
    config.moea.generations = generations;
    config.report_samples = report_samples;
    config.jobs = 0; // all cores
    const auto result = run_batch(config, dir);
    if (!result.failures.empty()) {
        throw std::runtime_error("batch failures: " + result.failures.front().message);
    }
    BatchSummary summary;
    summary.runs = load_runs(dir);
    summary.report = compute_indicators(summary.runs);
    return summary;
}

const AlgorithmSummary& row_of(const std::vector<AlgorithmSummary>& rows,
                               const std::string& name) {
    for (const auto& r : rows) {
        if (r.algorithm == name) {
            return r;
        }
    }
    throw std::runtime_error("missing table row " + name);
}

bool criterion_table1_ordering(std::string& detail) {
    const std::vector<Algorithm> algorithms = {Algorithm::nsga2, Algorithm::spea2,
                                               Algorithm::moeadd, Algorithm::mombi2};
    // Desk scale: 10 runs, 200 generations, paper population sizes. Report
    // re-evaluation runs at 500 samples here to fit the wall-clock budget;
    // the assertions compare per-algorithm means, which this preserves.
    const auto two = run_desk_batch(ProblemKind::two_objectives, algorithms, 10, 200, 500, 6001,
                                    work_root / "criterion6_two");
    const auto five = run_desk_batch(ProblemKind::five_objectives, algorithms, 10, 200, 500, 6002,
                                     work_root / "criterion6_five");

    const auto& hv_nsga2 = row_of(two.report.comparison.hypervolume, "nsga2");
    const auto& hv_mombi2 = row_of(two.report.comparison.hypervolume, "mombi2");
    const bool two_ok = hv_nsga2.mean > hv_mombi2.mean;

    const auto& igd_rows = five.report.comparison.igd_plus;
    const auto& moeadd_row = row_of(igd_rows, "moeadd");
    const bool five_ok = moeadd_row.best || moeadd_row.tied_with_best;

    std::ostringstream d;
    d << "2-obj HV mean nsga2 " << hv_nsga2.mean << " vs mombi2 " << hv_mombi2.mean
      << "; 5-obj IGD+ mean moeadd " << moeadd_row.mean
      << (moeadd_row.best ? " (best)"
          : moeadd_row.tied_with_best ? " (tied with best)"
                                      : " (beaten)");
    for (const auto& r : igd_rows) {
        if (r.algorithm != "moeadd") {
            d << ", " << r.algorithm << " " << r.mean;
        }
    }
    detail = d.str();
    return two_ok && five_ok;
}

bool criterion_table2_levels(std::string& detail) {
    // A 10-run NSGA-II batch at otherwise default settings (500 generations,
    // population 100, 5000-sample re-evaluation).
    const auto batch = run_desk_batch(ProblemKind::two_objectives, {Algorithm::nsga2}, 10, 500,
                                      5000, 7001, work_root / "criterion7");
    double best_eq = -2.0;
    double best_fair = -2.0;
    bool eq8 = false;
    bool eq9 = false;
    bool fair7 = false;
    for (const auto& run : batch.runs) {
        for (const auto& s : run.front.solutions) {
            const double eq = s.objectives.scores[0];
            const double fair = s.objectives.scores[1];
            best_eq = std::max(best_eq, eq);
            best_fair = std::max(best_fair, fair);
            eq8 = eq8 || eq >= 0.8;
            eq9 = eq9 || eq >= 0.9;
            fair7 = fair7 || fair >= 0.7;
        }
    }
    std::ostringstream d;
    d << "best Equality " << best_eq << ", best Fairness " << best_fair;
    detail = d.str();
    return eq8 && eq9 && fair7;
}

// --- criterion 8 -----------------------------------------------------------
bool criterion_election(std::string& detail) {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t count = 1 + static_cast<std::size_t>(unit(rng) * 14.0);
        std::vector<Solution> solutions;
        for (std::size_t i = 0; i < count; ++i) {
            Solution s;
            s.genes.resize(kGenomeSize);
            for (auto& g : s.genes) {
                g = unit(rng);
            }
            repair_genes(s.genes);
            s.objectives.scores = {unit(rng), unit(rng)};
            solutions.push_back(std::move(s));
        }
        const std::uint64_t seed = rng();
        const auto voters = make_voters(200, seed);
        const VoteMode mode = trial % 2 == 0 ? VoteMode::weighted : VoteMode::literal;
        const auto r1 = main_reasoner(voters, solutions, mode);
        const auto r2 = main_reasoner(make_voters(200, seed), solutions, mode);
        if (r1.winner_index >= solutions.size() ||
            solutions[r1.winner_index].genes != r1.winner.genes) {
            detail = "winner is not a front member";
            return false;
        }
        if (r1.winner_index != r2.winner_index || r1.tally != r2.tally) {
            detail = "same seed produced different elections";
            return false;
        }
        std::size_t total = 0;
        for (std::size_t v : r1.tally) {
            total += v;
        }
        if (total != 200) {
            detail = "tally does not sum to the voter count";
            return false;
        }
    }
    detail = "100 randomized elections, closed and deterministic";
    return true;
}

// --- criterion 9 -----------------------------------------------------------
bool criterion_reproducibility(std::string& detail) {
    ExperimentConfig config;
    config.problem = ProblemKind::two_objectives;
    config.algorithms = {Algorithm::nsga2, Algorithm::spea2, Algorithm::moeadd,
                         Algorithm::mombi2};
    config.runs = 2;
    config.master_seed = 909;
    config.moea.population = 20;
    config.moea.generations = 10;
    config.eval_samples = 2;
    config.report_samples = 200;
    config.jobs = 0;

    const fs::path dir_a = work_root / "criterion9_a";
    const fs::path dir_b = work_root / "criterion9_b";
    const auto a = run_batch(config, dir_a);
    const auto b = run_batch(config, dir_b);
    if (!a.failures.empty() || !b.failures.empty()) {
        detail = "smoke batch failed";
        return false;
    }
    if (a.completed.size() != 8 || b.completed.size() != 8) {
        detail = "expected 8 runs per batch";
        return false;
    }
    for (const auto& run : a.completed) {
        const fs::path rel = fs::relative(run.front_path, dir_a);
        const std::string left = read_file(run.front_path);
        const std::string right = read_file(dir_b / rel);
        if (left != right || left.empty()) {
            detail = "front CSV differs: " + rel.string();
            return false;
        }
    }
    detail = "8 front CSVs byte-identical across reruns";
    return true;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) {
        only = std::stoi(argv[1]);
    }
    work_root = fs::temp_directory_path() / "normopt_acceptance";
    fs::remove_all(work_root);
    fs::create_directories(work_root);

    struct Criterion {
        std::string name;
        double budget_seconds;
        std::function<bool(std::string&)> body;
    };
    const std::vector<Criterion> criteria = {
        {"nondominated sort matches the brute-force oracle", 10.0, criterion_sort_oracle},
        {"exact hypervolume matches the Monte Carlo oracle", 60.0, criterion_hv_oracle},
        {"hand-derived indicator values reproduce", 1.0, criterion_frozen_values},
        {"simulation conserves money and the interest ledger", 0.0, criterion_conservation},
        {"variation operators hold their contracts", 0.0, criterion_operators},
        {"desk-scale batch reproduces the indicator ordering", 1800.0, criterion_table1_ordering},
        {"desk-scale front reaches the reported solution levels", 600.0, criterion_table2_levels},
        {"elections are closed and deterministic", 5.0, criterion_election},
        {"optimize is byte-reproducible", 30.0, criterion_reproducibility},
    };

    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (only != 0 && only != number) {
            continue;
        }
        run_criterion(number, criteria[i].name, criteria[i].budget_seconds, criteria[i].body);
    }

    if (failures == 0) {
        std::cout << "all criteria passed\n";
    } else {
        std::cout << failures << " criterion(s) failed\n";
    }
    return failures == 0 ? 0 : 1;
}
