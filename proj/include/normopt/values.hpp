#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "normopt/error.hpp"
#include "normopt/rng.hpp"
#include "normopt/society.hpp"

namespace normopt {

/// The five value objectives, all maximized.
enum class ObjectiveId {
    equality,       // 1 - 2 * Gini of the wealth distribution
    fairness,       // 2 * P(evader is in the poorest group) - 1
    wealth,         // richest group's share of total wealth
    gained_amount,  // group-4 wealth delta over the final redistribution pool
    collect_portion // 1 - poorest group's tax rate
};

inline constexpr std::size_t kObjectiveCount = 5;

constexpr std::string_view objective_name(ObjectiveId id) noexcept {
    switch (id) {
        case ObjectiveId::equality: return "Equality";
        case ObjectiveId::fairness: return "Fairness";
        case ObjectiveId::wealth: return "Wealth";
        case ObjectiveId::gained_amount: return "GainedAmount";
        case ObjectiveId::collect_portion: return "CollectPortion";
    }
    return "?";
}

inline ObjectiveId objective_from_name(std::string_view name) {
    for (ObjectiveId id : {ObjectiveId::equality, ObjectiveId::fairness, ObjectiveId::wealth,
                           ObjectiveId::gained_amount, ObjectiveId::collect_portion}) {
        if (objective_name(id) == name) {
            return id;
        }
    }
    throw ContractError("unknown objective name: " + std::string(name));
}

using ObjectiveSet = std::vector<ObjectiveId>;

inline ObjectiveSet two_objective_set() {
    return {ObjectiveId::equality, ObjectiveId::fairness};
}

inline ObjectiveSet five_objective_set() {
    return {ObjectiveId::equality, ObjectiveId::fairness, ObjectiveId::wealth,
            ObjectiveId::gained_amount, ObjectiveId::collect_portion};
}

/// Evaluated value scores for one norm vector, maximization sense.
/// `set` may be empty for anonymous objective spaces (test problems, etc.).
struct ObjectiveVector {
    std::vector<double> scores;
    ObjectiveSet set;
};

/// Gini index over nonnegative wealths: sum of |w_i - w_j| over all ordered
/// pairs, divided by 2 n^2 mean. Computed in O(n log n) from the sorted order.
inline double gini(std::span<const double> wealths) {
    if (wealths.empty()) {
        throw ContractError("gini of an empty wealth list");
    }
    const std::size_t n = wealths.size();
    double total = 0.0;
    for (double w : wealths) {
        total += w;
    }
    if (total <= 0.0) {
        throw DegenerateStateError("gini undefined: mean wealth is zero");
    }
    std::vector<double> sorted(wealths.begin(), wealths.end());
    std::sort(sorted.begin(), sorted.end());
    double weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        weighted += (2.0 * static_cast<double>(i) - static_cast<double>(n) + 1.0) * sorted[i];
    }
    return weighted / (static_cast<double>(n) * total);
}

namespace detail {

inline std::vector<double> wealth_snapshot(const Society& s) {
    std::vector<double> w;
    w.reserve(s.citizens().size());
    for (const auto& c : s.citizens()) {
        w.push_back(c.wealth);
    }
    return w;
}

} // namespace detail

/// Equality = 1 - 2 * Gini, in (-1, 1].
inline double equality(const Society& state) {
    auto w = detail::wealth_snapshot(state);
    return 1.0 - 2.0 * gini(w);
}

/// Fairness = 2 * P(evader currently in group 1) - 1. With no evaders the
/// probability has empty support; the value is defined as 0 (neutral).
inline double fairness(const Society& state) {
    std::size_t evaders = 0;
    std::size_t in_poorest = 0;
    for (const auto& c : state.citizens()) {
        if (c.evader) {
            ++evaders;
            if (c.group == 1) {
                ++in_poorest;
            }
        }
    }
    if (evaders == 0) {
        return 0.0;
    }
    return 2.0 * static_cast<double>(in_poorest) / static_cast<double>(evaders) - 1.0;
}

/// Richest group's share of total wealth, in [0, 1].
inline double wealth_share(const Society& state) {
    const int top = static_cast<int>(state.num_groups());
    double top_sum = 0.0;
    double total = 0.0;
    for (const auto& c : state.citizens()) {
        total += c.wealth;
        if (c.group == top) {
            top_sum += c.wealth;
        }
    }
    if (total <= 0.0) {
        throw DegenerateStateError("wealth share undefined: total wealth is zero");
    }
    return top_sum / total;
}

/// Net wealth change of the second-richest group over the final step's
/// redistribution pool. Zero pool yields 0; the ratio is not clamped and can
/// exceed 1.
inline double gained_amount(const Society& state, double pool) {
    if (pool <= 0.0) {
        return 0.0;
    }
    const int g4 = std::max(static_cast<int>(state.num_groups()) - 1, 1);
    double delta = 0.0;
    for (const auto& c : state.citizens()) {
        if (c.group == g4) {
            delta += c.wealth - c.primary_wealth;
        }
    }
    return delta / pool;
}

/// 1 minus the poorest group's tax rate; a pure function of the norms.
inline double collect_portion(const NormVector& norms) {
    norms.validate();
    return 1.0 - norms.collect[0];
}

namespace detail {

inline void check_objective_range(ObjectiveId id, double v) {
    const bool ok = [&] {
        switch (id) {
            case ObjectiveId::equality:
            case ObjectiveId::fairness: return v >= -1.0 - 1e-12 && v <= 1.0 + 1e-12;
            case ObjectiveId::wealth:
            case ObjectiveId::collect_portion: return v >= -1e-12 && v <= 1.0 + 1e-12;
            case ObjectiveId::gained_amount: return std::isfinite(v);
        }
        return false;
    }();
    if (!ok) {
        throw DegenerateStateError(std::string(objective_name(id)) + " = " + std::to_string(v) +
                                   " outside its admissible range");
    }
}

} // namespace detail

/// Score every objective in `set` on one final path state.
inline ObjectiveVector evaluate_path(const Society& state, double final_pool,
                                     const NormVector& norms, const ObjectiveSet& set) {
    ObjectiveVector out;
    out.set = set;
    out.scores.reserve(set.size());
    for (ObjectiveId id : set) {
        double v = 0.0;
        switch (id) {
            case ObjectiveId::equality: v = equality(state); break;
            case ObjectiveId::fairness: v = fairness(state); break;
            case ObjectiveId::wealth: v = wealth_share(state); break;
            case ObjectiveId::gained_amount: v = gained_amount(state, final_pool); break;
            case ObjectiveId::collect_portion: v = collect_portion(norms); break;
        }
        detail::check_objective_range(id, v);
        out.scores.push_back(v);
    }
    return out;
}

/// Objectives of a single simulated path under a derived seed. Exposed so
/// that Monte Carlo means can be cross-checked sample by sample.
inline ObjectiveVector evaluate_single(const NormVector& norms, const SimulationConfig& config,
                                       const ObjectiveSet& set, std::uint64_t path_seed) {
    auto [society, pool] = run_path(config, norms, path_seed);
    return evaluate_path(society, pool, norms, set);
}

/// Monte Carlo estimate: mean objective scores over `samples` independent
/// paths. Path seeds derive from (seed, sample index); accumulation runs in
/// sample order, so results are reproducible bit for bit.
inline ObjectiveVector evaluate(const NormVector& norms, const SimulationConfig& config,
                                const ObjectiveSet& set, std::size_t samples,
                                std::uint64_t seed) {
    if (samples == 0) {
        throw ContractError("evaluate requires at least one sample");
    }
    std::vector<double> sums(set.size(), 0.0);
    for (std::size_t s = 0; s < samples; ++s) {
        const ObjectiveVector one = evaluate_single(norms, config, set, derive_sample_seed(seed, s));
        for (std::size_t k = 0; k < set.size(); ++k) {
            sums[k] += one.scores[k];
        }
    }
    ObjectiveVector out;
    out.set = set;
    out.scores.resize(set.size());
    for (std::size_t k = 0; k < set.size(); ++k) {
        out.scores[k] = sums[k] / static_cast<double>(samples);
    }
    return out;
}

} // namespace normopt
