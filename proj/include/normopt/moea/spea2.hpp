#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "normopt/moea/common.hpp"
#include "normopt/moea/dominance.hpp"

namespace normopt {

namespace detail {

/// SPEA2 fitness over a merged population: F = R + D with
/// S(i) = |{j : i dominates j}|, R(i) = sum of S over i's dominators, and
/// density D(i) = 1/(sigma_k + 2) from the k-th nearest objective distance.
inline std::vector<double> spea2_fitness(const std::vector<std::vector<double>>& objs,
                                         std::size_t k_neighbor) {
    const std::size_t n = objs.size();
    std::vector<double> strength(n, 0.0);
    std::vector<std::vector<std::size_t>> dominators(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(objs[i], objs[j], Sense::minimize)) {
                strength[i] += 1.0;
                dominators[j].push_back(i);
            } else if (dominates(objs[j], objs[i], Sense::minimize)) {
                strength[j] += 1.0;
                dominators[i].push_back(j);
            }
        }
    }
    std::vector<double> fitness(n, 0.0);
    std::vector<double> dist;
    for (std::size_t i = 0; i < n; ++i) {
        double raw = 0.0;
        for (std::size_t d : dominators[i]) {
            raw += strength[d];
        }
        dist.clear();
        dist.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            double d2 = 0.0;
            for (std::size_t m = 0; m < objs[i].size(); ++m) {
                const double d = objs[i][m] - objs[j][m];
                d2 += d * d;
            }
            dist.push_back(d2);
        }
        double sigma = 0.0;
        if (!dist.empty()) {
            // k-th nearest neighbor; dist excludes self, so index k-1.
            const std::size_t k = std::min(k_neighbor > 0 ? k_neighbor - 1 : 0, dist.size() - 1);
            std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                             dist.end());
            sigma = std::sqrt(dist[k]);
        }
        fitness[i] = raw + 1.0 / (sigma + 2.0);
    }
    return fitness;
}

/// Iteratively drop the archive member with the lexicographically smallest
/// nearest-neighbor distance profile until `capacity` members remain.
/// Removed members are skipped lazily when profiles are compared.
inline std::vector<std::size_t> spea2_truncate(const std::vector<std::vector<double>>& objs,
                                               std::vector<std::size_t> members,
                                               std::size_t capacity) {
    const std::size_t total = members.size();
    std::vector<std::vector<std::pair<double, std::size_t>>> neighbors(total);
    for (std::size_t a = 0; a < total; ++a) {
        neighbors[a].reserve(total - 1);
        for (std::size_t b = 0; b < total; ++b) {
            if (a == b) {
                continue;
            }
            double d2 = 0.0;
            const auto& oa = objs[members[a]];
            const auto& ob = objs[members[b]];
            for (std::size_t m = 0; m < oa.size(); ++m) {
                const double d = oa[m] - ob[m];
                d2 += d * d;
            }
            neighbors[a].push_back({d2, b});
        }
        std::sort(neighbors[a].begin(), neighbors[a].end());
    }

    std::vector<bool> alive(total, true);
    std::size_t alive_count = total;

    auto less_crowded = [&](std::size_t a, std::size_t b) {
        // true when a's distance profile is lexicographically smaller.
        std::size_t ia = 0;
        std::size_t ib = 0;
        while (true) {
            while (ia < neighbors[a].size() && !alive[neighbors[a][ia].second]) {
                ++ia;
            }
            while (ib < neighbors[b].size() && !alive[neighbors[b][ib].second]) {
                ++ib;
            }
            if (ia >= neighbors[a].size() || ib >= neighbors[b].size()) {
                return false;
            }
            if (neighbors[a][ia].first != neighbors[b][ib].first) {
                return neighbors[a][ia].first < neighbors[b][ib].first;
            }
            ++ia;
            ++ib;
        }
    };

    while (alive_count > capacity) {
        std::size_t victim = total;
        for (std::size_t i = 0; i < total; ++i) {
            if (!alive[i]) {
                continue;
            }
            if (victim == total || less_crowded(i, victim)) {
                victim = i;
            }
        }
        alive[victim] = false;
        --alive_count;
    }

    std::vector<std::size_t> kept;
    kept.reserve(capacity);
    for (std::size_t i = 0; i < total; ++i) {
        if (alive[i]) {
            kept.push_back(members[i]);
        }
    }
    return kept;
}

} // namespace detail

/// SPEA2 with archive size equal to the population size. The returned
/// population is the final archive.
template <OptimizationProblem P>
Population spea2_run(const P& problem, const MoeaConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const std::size_t n = cfg.population;
    const auto k_neighbor = static_cast<std::size_t>(std::sqrt(static_cast<double>(2 * n)));

    Population pop = detail::random_population(problem, n, rng);
    Population archive;

    for (std::size_t gen = 0;; ++gen) {
        Population merged = std::move(archive);
        merged.insert(merged.end(), std::make_move_iterator(pop.begin()),
                      std::make_move_iterator(pop.end()));
        pop.clear();

        const auto objs = detail::objective_matrix(merged);
        const auto fitness = detail::spea2_fitness(objs, k_neighbor);
        for (std::size_t i = 0; i < merged.size(); ++i) {
            merged[i].strength_fitness = fitness[i];
        }

        std::vector<std::size_t> nondominated;
        for (std::size_t i = 0; i < merged.size(); ++i) {
            if (fitness[i] < 1.0) {
                nondominated.push_back(i);
            }
        }

        std::vector<std::size_t> selected;
        if (nondominated.size() > n) {
            selected = detail::spea2_truncate(objs, std::move(nondominated), n);
        } else {
            selected = std::move(nondominated);
            if (selected.size() < n) {
                std::vector<std::size_t> rest;
                for (std::size_t i = 0; i < merged.size(); ++i) {
                    if (fitness[i] >= 1.0) {
                        rest.push_back(i);
                    }
                }
                std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
                    return fitness[a] < fitness[b] || (fitness[a] == fitness[b] && a < b);
                });
                for (std::size_t i : rest) {
                    if (selected.size() == n) {
                        break;
                    }
                    selected.push_back(i);
                }
            }
        }

        archive.clear();
        archive.reserve(selected.size());
        for (std::size_t i : selected) {
            archive.push_back(std::move(merged[i]));
        }

        if (cfg.observer) {
            cfg.observer(gen, archive);
        }
        if (gen == cfg.generations) {
            break;
        }

        auto better = [&archive](std::size_t a, std::size_t b) {
            return archive[a].strength_fitness < archive[b].strength_fitness;
        };
        pop.reserve(n);
        while (pop.size() < n) {
            const std::size_t a = detail::binary_tournament(archive.size(), better, rng);
            const std::size_t b = detail::binary_tournament(archive.size(), better, rng);
            auto [c1, c2] = detail::make_offspring(problem, archive[a], archive[b], cfg, rng);
            pop.push_back(std::move(c1));
            if (pop.size() < n) {
                pop.push_back(std::move(c2));
            }
        }
    }
    return archive;
}

} // namespace normopt
