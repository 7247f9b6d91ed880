#pragma once

#include <span>
#include <vector>

#include "normopt/moea/config.hpp"
#include "normopt/moea/individual.hpp"
#include "normopt/moea/operators.hpp"
#include "normopt/moea/problem.hpp"
#include "normopt/rng.hpp"

namespace normopt::detail {

template <OptimizationProblem P>
Individual random_individual(const P& problem, Rng& rng) {
    Individual ind;
    ind.genes.resize(problem.dimension());
    for (std::size_t i = 0; i < ind.genes.size(); ++i) {
        const GeneBounds b = problem.bounds(i);
        ind.genes[i] = std::uniform_real_distribution<double>(b.lo, b.hi)(rng);
    }
    problem.repair(std::span<double>(ind.genes));
    ind.objectives = problem.evaluate(std::span<const double>(ind.genes));
    return ind;
}

template <OptimizationProblem P>
Population random_population(const P& problem, std::size_t size, Rng& rng) {
    Population pop;
    pop.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        pop.push_back(random_individual(problem, rng));
    }
    return pop;
}

/// SBX + polynomial mutation + repair, evaluated. Produces two children.
template <OptimizationProblem P>
std::pair<Individual, Individual> make_offspring(const P& problem, const Individual& a,
                                                 const Individual& b, const MoeaConfig& cfg,
                                                 Rng& rng) {
    auto [g1, g2] = sbx_crossover(std::span<const double>(a.genes),
                                  std::span<const double>(b.genes), cfg.eta_c, cfg.p_c, rng);
    const double p_m = cfg.mutation_probability(problem.dimension());
    auto bounds = [&problem](std::size_t i) { return problem.bounds(i); };
    for (auto* genes : {&g1, &g2}) {
        problem.repair(std::span<double>(*genes));
        polynomial_mutation(std::span<double>(*genes), cfg.eta_m, p_m, bounds, rng);
        problem.repair(std::span<double>(*genes));
    }
    Individual c1;
    c1.genes = std::move(g1);
    c1.objectives = problem.evaluate(std::span<const double>(c1.genes));
    Individual c2;
    c2.genes = std::move(g2);
    c2.objectives = problem.evaluate(std::span<const double>(c2.genes));
    return {std::move(c1), std::move(c2)};
}

/// Binary tournament with a strict `better` predicate; exact ties are broken
/// by a coin flip from the run's generator.
template <typename BetterFn>
std::size_t binary_tournament(std::size_t size, BetterFn better, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, size - 1);
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (better(a, b)) {
        return a;
    }
    if (better(b, a)) {
        return b;
    }
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5 ? a : b;
}

inline std::vector<std::vector<double>> objective_matrix(const Population& pop) {
    std::vector<std::vector<double>> objs;
    objs.reserve(pop.size());
    for (const auto& ind : pop) {
        objs.push_back(ind.objectives);
    }
    return objs;
}

} // namespace normopt::detail
