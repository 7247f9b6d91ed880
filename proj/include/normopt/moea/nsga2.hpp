#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "normopt/moea/common.hpp"
#include "normopt/moea/dominance.hpp"

namespace normopt {

namespace detail {

/// Assign (rank, crowding) to every individual in place.
inline void assign_nsga2_metadata(Population& pop) {
    const auto objs = objective_matrix(pop);
    const auto fronts = fast_nondominated_sort(objs, Sense::minimize);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        std::vector<std::vector<double>> front_objs;
        front_objs.reserve(fronts[f].size());
        for (std::size_t i : fronts[f]) {
            front_objs.push_back(objs[i]);
        }
        const auto crowd = crowding_distance(front_objs);
        for (std::size_t k = 0; k < fronts[f].size(); ++k) {
            pop[fronts[f][k]].rank = f;
            pop[fronts[f][k]].crowding = crowd[k];
        }
    }
}

} // namespace detail

/// NSGA-II: binary tournament on (rank, crowding), SBX + polynomial
/// mutation, and mu+lambda environmental selection by fronts then crowding.
template <OptimizationProblem P>
Population nsga2_run(const P& problem, const MoeaConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const std::size_t n = cfg.population;

    Population pop = detail::random_population(problem, n, rng);
    detail::assign_nsga2_metadata(pop);
    if (cfg.observer) {
        cfg.observer(0, pop);
    }

    auto better = [&pop](std::size_t a, std::size_t b) {
        if (pop[a].rank != pop[b].rank) {
            return pop[a].rank < pop[b].rank;
        }
        return pop[a].crowding > pop[b].crowding;
    };

    for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
        Population offspring;
        offspring.reserve(n);
        while (offspring.size() < n) {
            const std::size_t a = detail::binary_tournament(n, better, rng);
            const std::size_t b = detail::binary_tournament(n, better, rng);
            auto [c1, c2] = detail::make_offspring(problem, pop[a], pop[b], cfg, rng);
            offspring.push_back(std::move(c1));
            if (offspring.size() < n) {
                offspring.push_back(std::move(c2));
            }
        }

        Population combined = std::move(pop);
        combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                        std::make_move_iterator(offspring.end()));

        const auto objs = detail::objective_matrix(combined);
        const auto fronts = fast_nondominated_sort(objs, Sense::minimize);

        Population next;
        next.reserve(n);
        for (const auto& front : fronts) {
            if (next.size() == n) {
                break;
            }
            std::vector<std::vector<double>> front_objs;
            front_objs.reserve(front.size());
            for (std::size_t i : front) {
                front_objs.push_back(objs[i]);
            }
            const auto crowd = crowding_distance(front_objs);
            if (next.size() + front.size() <= n) {
                for (std::size_t k = 0; k < front.size(); ++k) {
                    combined[front[k]].crowding = crowd[k];
                    next.push_back(std::move(combined[front[k]]));
                }
            } else {
                std::vector<std::size_t> order(front.size());
                for (std::size_t k = 0; k < order.size(); ++k) {
                    order[k] = k;
                }
                std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                    return crowd[x] > crowd[y] || (crowd[x] == crowd[y] && x < y);
                });
                for (std::size_t k = 0; next.size() < n; ++k) {
                    combined[front[order[k]]].crowding = crowd[order[k]];
                    next.push_back(std::move(combined[front[order[k]]]));
                }
            }
        }
        pop = std::move(next);
        detail::assign_nsga2_metadata(pop);
        if (cfg.observer) {
            cfg.observer(gen, pop);
        }
    }
    return pop;
}

} // namespace normopt
