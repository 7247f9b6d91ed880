#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include "normopt/moea/common.hpp"
#include "normopt/moea/dominance.hpp"
#include "normopt/moea/weights.hpp"

namespace normopt {

namespace detail {

/// R2 ranking: normalize objectives between the ideal and reference points,
/// score each individual per weight vector with the weighted Chebyshev
/// utility max_k w_k * f'_k, and give every individual the best (lowest)
/// position it reaches across the per-weight orderings. Within one ordering
/// equal utilities break by the normalized objective sum, so a dominated
/// point can never precede one of its dominators.
struct R2Ranking {
    std::vector<std::size_t> rank;      // 1-based best position
    std::vector<double> worst_utility;  // max utility across weights (tie-break key)
};

inline R2Ranking r2_ranking(const std::vector<std::vector<double>>& objectives,
                            const std::vector<std::vector<double>>& weights,
                            std::span<const double> ideal, std::span<const double> reference) {
    const std::size_t n = objectives.size();
    const std::size_t m = ideal.size();

    std::vector<double> span(m);
    for (std::size_t k = 0; k < m; ++k) {
        span[k] = std::max(reference[k] - ideal[k], 1e-12);
    }
    std::vector<std::vector<double>> normalized(n, std::vector<double>(m));
    std::vector<double> norm_sum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            normalized[i][k] = (objectives[i][k] - ideal[k]) / span[k];
            norm_sum[i] += normalized[i][k];
        }
    }

    R2Ranking out;
    out.rank.assign(n, n + 1);
    out.worst_utility.assign(n, 0.0);

    std::vector<double> utility(n);
    std::vector<std::size_t> order(n);
    for (const auto& w : weights) {
        for (std::size_t i = 0; i < n; ++i) {
            double u = -std::numeric_limits<double>::max();
            for (std::size_t k = 0; k < m; ++k) {
                u = std::max(u, w[k] * normalized[i][k]);
            }
            utility[i] = u;
            out.worst_utility[i] = std::max(out.worst_utility[i], u);
        }
        for (std::size_t i = 0; i < n; ++i) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (utility[a] != utility[b]) {
                return utility[a] < utility[b];
            }
            if (norm_sum[a] != norm_sum[b]) {
                return norm_sum[a] < norm_sum[b];
            }
            return a < b;
        });
        for (std::size_t pos = 0; pos < n; ++pos) {
            out.rank[order[pos]] = std::min(out.rank[order[pos]], pos + 1);
        }
    }
    return out;
}

/// Reference-point bookkeeping for MOMBI2. The ideal point is the running
/// componentwise minimum over everything evaluated. The reference (nadir
/// estimate) follows a variance rule over a sliding window of per-generation
/// population maxima: an objective whose window variance exceeds the
/// threshold is considered unsettled and keeps the window maximum as its
/// reference; a settled objective tracks the current population maximum.
class ReferencePointTracker {
public:
    ReferencePointTracker(std::size_t objectives, std::size_t window, double variance_threshold)
        : window_(std::max<std::size_t>(window, 1)),
          threshold_(variance_threshold),
          ideal_(objectives, std::numeric_limits<double>::max()),
          reference_(objectives, std::numeric_limits<double>::lowest()) {}

    void observe_individual(std::span<const double> objectives) {
        for (std::size_t k = 0; k < ideal_.size(); ++k) {
            ideal_[k] = std::min(ideal_[k], objectives[k]);
        }
    }

    void end_generation(const std::vector<std::vector<double>>& population_objectives) {
        const std::size_t m = ideal_.size();
        std::vector<double> gen_max(m, std::numeric_limits<double>::lowest());
        for (const auto& obj : population_objectives) {
            for (std::size_t k = 0; k < m; ++k) {
                gen_max[k] = std::max(gen_max[k], obj[k]);
            }
        }
        record_.push_back(gen_max);
        if (record_.size() > window_) {
            record_.pop_front();
        }
        for (std::size_t k = 0; k < m; ++k) {
            double mean = 0.0;
            double window_max = std::numeric_limits<double>::lowest();
            for (const auto& r : record_) {
                mean += r[k];
                window_max = std::max(window_max, r[k]);
            }
            mean /= static_cast<double>(record_.size());
            double var = 0.0;
            for (const auto& r : record_) {
                var += (r[k] - mean) * (r[k] - mean);
            }
            var /= static_cast<double>(record_.size());
            reference_[k] = var > threshold_ ? window_max : gen_max[k];
        }
    }

    [[nodiscard]] std::span<const double> ideal() const noexcept { return ideal_; }
    [[nodiscard]] std::span<const double> reference() const noexcept { return reference_; }

private:
    std::size_t window_;
    double threshold_;
    std::vector<double> ideal_;
    std::vector<double> reference_;
    std::deque<std::vector<double>> record_;
};

} // namespace detail

/// MOMBI2: generational R2-indicator ranking with weighted Chebyshev
/// utilities against a statistics-maintained reference point. Selection is by
/// rank, then by smaller worst-case utility.
template <OptimizationProblem P>
Population mombi2_run(const P& problem, const MoeaConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const std::size_t n = cfg.population;
    const std::size_t m = problem.objective_count();

    const auto weights = weights_for_population(m, n);

    Population pop = detail::random_population(problem, n, rng);
    detail::ReferencePointTracker tracker(m, cfg.record_size, cfg.variance_threshold);
    for (const auto& ind : pop) {
        tracker.observe_individual(ind.objectives);
    }
    tracker.end_generation(detail::objective_matrix(pop));

    auto apply_ranking = [&](Population& group) {
        const auto ranking = detail::r2_ranking(detail::objective_matrix(group), weights,
                                                tracker.ideal(), tracker.reference());
        for (std::size_t i = 0; i < group.size(); ++i) {
            group[i].rank = ranking.rank[i];
            group[i].scalarized_utility = ranking.worst_utility[i];
        }
    };
    apply_ranking(pop);
    if (cfg.observer) {
        cfg.observer(0, pop);
    }

    auto better = [&pop](std::size_t a, std::size_t b) {
        if (pop[a].rank != pop[b].rank) {
            return pop[a].rank < pop[b].rank;
        }
        return pop[a].scalarized_utility < pop[b].scalarized_utility;
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
        for (const auto& ind : offspring) {
            tracker.observe_individual(ind.objectives);
        }

        Population combined = std::move(pop);
        combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                        std::make_move_iterator(offspring.end()));
        tracker.end_generation(detail::objective_matrix(combined));
        apply_ranking(combined);

        std::vector<std::size_t> order(combined.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (combined[a].rank != combined[b].rank) {
                return combined[a].rank < combined[b].rank;
            }
            if (combined[a].scalarized_utility != combined[b].scalarized_utility) {
                return combined[a].scalarized_utility < combined[b].scalarized_utility;
            }
            return a < b;
        });

        Population next;
        next.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            next.push_back(std::move(combined[order[i]]));
        }
        pop = std::move(next);
        if (cfg.observer) {
            cfg.observer(gen, pop);
        }
    }
    return pop;
}

} // namespace normopt
