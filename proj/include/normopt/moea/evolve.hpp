#pragma once

#include <utility>
#include <vector>

#include "normopt/moea/config.hpp"
#include "normopt/moea/dominance.hpp"
#include "normopt/moea/moeadd.hpp"
#include "normopt/moea/mombi2.hpp"
#include "normopt/moea/nsga2.hpp"
#include "normopt/moea/spea2.hpp"
#include "normopt/values.hpp"

namespace normopt {

/// One evaluated point of a front: objective scores (maximization sense)
/// paired with the genome that produced them.
struct Solution {
    ObjectiveVector objectives;
    std::vector<double> genes;
};

struct Front {
    std::vector<Solution> solutions;

    [[nodiscard]] bool empty() const noexcept { return solutions.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return solutions.size(); }
};

namespace detail {

template <typename T>
concept HasReportEvaluate = requires(const T& t, std::span<const double> genes) {
    { t.report_evaluate(genes) } -> std::convertible_to<std::vector<double>>;
};

template <typename T>
concept HasObjectiveSet = requires(const T& t) {
    { t.objective_set() } -> std::convertible_to<ObjectiveSet>;
};

} // namespace detail

/// Run the configured algorithm and return the nondominated set of its final
/// population, maximization sense. When the problem distinguishes a
/// report-quality evaluation (the tax problem's full Monte Carlo budget),
/// surviving genomes are re-scored with it and filtered again so the
/// returned front stays mutually nondominated under the reported scores.
template <OptimizationProblem P>
Front evolve(const P& problem, const MoeaConfig& cfg) {
    Population final_pop;
    switch (cfg.algorithm) {
        case Algorithm::nsga2: final_pop = nsga2_run(problem, cfg); break;
        case Algorithm::spea2: final_pop = spea2_run(problem, cfg); break;
        case Algorithm::moeadd: final_pop = moeadd_run(problem, cfg); break;
        case Algorithm::mombi2: final_pop = mombi2_run(problem, cfg); break;
        default: throw ConfigError("unknown algorithm id");
    }

    auto objs = detail::objective_matrix(final_pop);
    const auto fronts = fast_nondominated_sort(objs, Sense::minimize);
    if (fronts.empty()) {
        return {};
    }

    // Keep the first front, dropping exact genome duplicates (elitist copies).
    std::vector<std::size_t> keep;
    for (std::size_t i : fronts.front()) {
        bool duplicate = false;
        for (std::size_t j : keep) {
            if (final_pop[i].genes == final_pop[j].genes) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) {
            keep.push_back(i);
        }
    }

    ObjectiveSet set;
    if constexpr (detail::HasObjectiveSet<P>) {
        set = problem.objective_set();
    }

    std::vector<Solution> candidates;
    candidates.reserve(keep.size());
    for (std::size_t i : keep) {
        Solution s;
        s.genes = final_pop[i].genes;
        std::vector<double> scores;
        if constexpr (detail::HasReportEvaluate<P>) {
            scores = problem.report_evaluate(std::span<const double>(s.genes));
        } else {
            scores = final_pop[i].objectives;
        }
        for (double& v : scores) {
            v = -v; // internal minimization back to maximization
        }
        s.objectives = ObjectiveVector{std::move(scores), set};
        candidates.push_back(std::move(s));
    }

    std::vector<std::vector<double>> reported;
    reported.reserve(candidates.size());
    for (const auto& s : candidates) {
        reported.push_back(s.objectives.scores);
    }
    const auto refiltered = fast_nondominated_sort(reported, Sense::maximize);

    Front front;
    front.solutions.reserve(refiltered.front().size());
    std::vector<std::size_t> order(refiltered.front());
    std::sort(order.begin(), order.end());
    for (std::size_t i : order) {
        front.solutions.push_back(std::move(candidates[i]));
    }
    return front;
}

} // namespace normopt
