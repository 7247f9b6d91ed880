#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "normopt/moea/common.hpp"
#include "normopt/moea/dominance.hpp"
#include "normopt/moea/weights.hpp"

namespace normopt {

namespace detail {

/// Penalty-based boundary intersection of a translated objective vector
/// against a weight ray: d1 along the ray, d2 perpendicular to it.
struct PbiValue {
    double d1 = 0.0;
    double d2 = 0.0;
    [[nodiscard]] double value(double theta) const noexcept { return d1 + theta * d2; }
};

inline PbiValue pbi_decompose(std::span<const double> objectives,
                              std::span<const double> ideal,
                              std::span<const double> weight) {
    double norm = 0.0;
    for (double w : weight) {
        norm += w * w;
    }
    norm = std::sqrt(norm);
    double dot = 0.0;
    for (std::size_t k = 0; k < weight.size(); ++k) {
        dot += (objectives[k] - ideal[k]) * weight[k];
    }
    PbiValue out;
    out.d1 = dot / norm;
    double perp = 0.0;
    for (std::size_t k = 0; k < weight.size(); ++k) {
        const double diff = objectives[k] - ideal[k] - out.d1 * weight[k] / norm;
        perp += diff * diff;
    }
    out.d2 = std::sqrt(perp);
    return out;
}

/// Index of the subregion (weight ray) with minimal perpendicular distance.
inline std::size_t associate_subregion(std::span<const double> objectives,
                                       std::span<const double> ideal,
                                       const std::vector<std::vector<double>>& weights) {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::max();
    for (std::size_t j = 0; j < weights.size(); ++j) {
        const double d2 = pbi_decompose(objectives, ideal, weights[j]).d2;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = j;
        }
    }
    return best;
}

/// One SBX child (the first), mutated, repaired and evaluated.
template <OptimizationProblem P>
Individual make_single_offspring(const P& problem, const Individual& a, const Individual& b,
                                 const MoeaConfig& cfg, Rng& rng) {
    auto [g1, g2] = sbx_crossover(std::span<const double>(a.genes),
                                  std::span<const double>(b.genes), cfg.eta_c, cfg.p_c, rng);
    (void)g2;
    problem.repair(std::span<double>(g1));
    auto bounds = [&problem](std::size_t i) { return problem.bounds(i); };
    polynomial_mutation(std::span<double>(g1), cfg.eta_m,
                        cfg.mutation_probability(problem.dimension()), bounds, rng);
    problem.repair(std::span<double>(g1));
    Individual child;
    child.genes = std::move(g1);
    child.objectives = problem.evaluate(std::span<const double>(child.genes));
    return child;
}

} // namespace detail

/// MOEA/DD: a steady-state hybrid of Pareto dominance and PBI decomposition.
/// Each subproblem mates inside its weight neighborhood with probability
/// `neighborhood_prob` (whole population otherwise), and each offspring
/// displaces at most one resident, chosen as follows:
///   - everything nondominated: evict the largest-PBI member of the most
///     crowded subregion;
///   - last nondomination level holds a single solution that is also the sole
///     representative of its subregion: keep it for diversity and evict from
///     the most crowded subregion instead;
///   - otherwise: evict the largest-PBI last-level member of the most
///     crowded subregion represented in the last level.
/// Association and PBI run on objectives normalized between the running
/// ideal point and a fixed span learned from the initial population's
/// extent, so the niche structure stays stable across generations.
template <OptimizationProblem P>
Population moeadd_run(const P& problem, const MoeaConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const std::size_t n = cfg.population;
    const std::size_t m = problem.objective_count();

    const auto weights = weights_for_population(m, n);
    const std::size_t hood_size = std::min(cfg.neighborhood, n);
    const auto hoods = weight_neighborhoods(weights, hood_size);

    Population pop = detail::random_population(problem, n, rng);

    std::vector<double> ideal(m, std::numeric_limits<double>::max());
    auto update_ideal = [&ideal, m](const Individual& ind) {
        bool changed = false;
        for (std::size_t k = 0; k < m; ++k) {
            if (ind.objectives[k] < ideal[k]) {
                ideal[k] = ind.objectives[k];
                changed = true;
            }
        }
        return changed;
    };
    for (const auto& ind : pop) {
        update_ideal(ind);
    }

    std::vector<double> span(m, 1.0);
    for (std::size_t k = 0; k < m; ++k) {
        double hi = std::numeric_limits<double>::lowest();
        for (const auto& ind : pop) {
            hi = std::max(hi, ind.objectives[k]);
        }
        span[k] = std::max(hi - ideal[k], 1e-12);
    }

    const std::vector<double> zero(m, 0.0);
    auto normalized = [&](const Individual& ind) {
        std::vector<double> f(m);
        for (std::size_t k = 0; k < m; ++k) {
            f[k] = (ind.objectives[k] - ideal[k]) / span[k];
        }
        return f;
    };

    // region[i]: subregion of pop[i]; niche[r]: number of residents of r.
    std::vector<std::size_t> region;
    std::vector<std::size_t> niche(n, 0);
    auto reassociate_all = [&] {
        region.resize(pop.size());
        std::fill(niche.begin(), niche.end(), 0);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            region[i] = detail::associate_subregion(normalized(pop[i]), zero, weights);
            ++niche[region[i]];
        }
    };
    reassociate_all();

    auto pbi_of = [&](const Individual& ind, std::size_t r) {
        return detail::pbi_decompose(normalized(ind), zero, weights[r]).value(cfg.pbi_theta);
    };

    auto region_pbi_sum = [&](std::size_t r) {
        double sum = 0.0;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (region[i] == r) {
                sum += pbi_of(pop[i], r);
            }
        }
        return sum;
    };

    // Most crowded subregion; ties by larger PBI sum, then lower index.
    auto most_crowded_region = [&]() {
        std::size_t best = 0;
        std::size_t best_count = 0;
        double best_sum = 0.0;
        bool have_sum = false;
        for (std::size_t r = 0; r < n; ++r) {
            if (niche[r] > best_count) {
                best = r;
                best_count = niche[r];
                have_sum = false;
            } else if (niche[r] == best_count && niche[r] > 0) {
                if (!have_sum) {
                    best_sum = region_pbi_sum(best);
                    have_sum = true;
                }
                const double sum = region_pbi_sum(r);
                if (sum > best_sum) {
                    best = r;
                    best_sum = sum;
                }
            }
        }
        return best;
    };

    auto worst_in_region = [&](std::size_t r) {
        std::size_t worst = pop.size();
        double worst_pbi = -1.0;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (region[i] != r) {
                continue;
            }
            const double v = pbi_of(pop[i], r);
            if (worst == pop.size() || v > worst_pbi) {
                worst = i;
                worst_pbi = v;
            }
        }
        return worst;
    };

    if (cfg.observer) {
        cfg.observer(0, pop);
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::size_t> pool;
    for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
        for (std::size_t sub = 0; sub < n; ++sub) {
            pool.clear();
            if (unit(rng) < cfg.neighborhood_prob) {
                for (std::size_t i = 0; i < pop.size(); ++i) {
                    for (std::size_t h : hoods[sub]) {
                        if (region[i] == h) {
                            pool.push_back(i);
                            break;
                        }
                    }
                }
            }
            if (pool.size() < 2) {
                pool.resize(pop.size());
                for (std::size_t i = 0; i < pop.size(); ++i) {
                    pool[i] = i;
                }
            }
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            const std::size_t a = pool[pick(rng)];
            std::size_t b = a;
            while (b == a) {
                b = pool[pick(rng)];
            }

            Individual child = detail::make_single_offspring(problem, pop[a], pop[b], cfg, rng);
            const bool ideal_moved = update_ideal(child);

            pop.push_back(std::move(child));
            if (ideal_moved) {
                reassociate_all();
            } else {
                region.push_back(
                    detail::associate_subregion(normalized(pop.back()), zero, weights));
                ++niche[region.back()];
            }

            const auto objs = detail::objective_matrix(pop);
            const auto levels = fast_nondominated_sort(objs, Sense::minimize);
            for (std::size_t f = 0; f < levels.size(); ++f) {
                for (std::size_t i : levels[f]) {
                    pop[i].rank = f;
                }
            }

            std::size_t victim;
            if (levels.size() == 1) {
                victim = worst_in_region(most_crowded_region());
            } else {
                const auto& last = levels.back();
                if (last.size() == 1 && niche[region[last.front()]] == 1) {
                    victim = worst_in_region(most_crowded_region());
                } else {
                    // Most crowded subregion counted within the last level.
                    std::vector<std::size_t> local(n, 0);
                    for (std::size_t i : last) {
                        ++local[region[i]];
                    }
                    std::size_t busiest = region[last.front()];
                    for (std::size_t i : last) {
                        if (local[region[i]] > local[busiest]) {
                            busiest = region[i];
                        }
                    }
                    victim = last.front();
                    double worst_pbi = -1.0;
                    for (std::size_t i : last) {
                        if (region[i] != busiest) {
                            continue;
                        }
                        const double v = pbi_of(pop[i], region[i]);
                        if (worst_pbi < 0.0 || v > worst_pbi) {
                            worst_pbi = v;
                            victim = i;
                        }
                    }
                }
            }

            --niche[region[victim]];
            pop.erase(pop.begin() + static_cast<std::ptrdiff_t>(victim));
            region.erase(region.begin() + static_cast<std::ptrdiff_t>(victim));
        }
        if (cfg.observer) {
            cfg.observer(gen, pop);
        }
    }

    for (std::size_t i = 0; i < pop.size(); ++i) {
        pop[i].scalarized_utility = pbi_of(pop[i], region[i]);
    }
    return pop;
}

} // namespace normopt
