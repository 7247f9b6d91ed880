#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "normopt/error.hpp"
#include "normopt/values.hpp"

namespace normopt {

enum class Sense { minimize, maximize };

/// Pareto dominance: at least as good everywhere, strictly better somewhere.
inline bool dominates(std::span<const double> a, std::span<const double> b, Sense sense) {
    if (a.size() != b.size()) {
        throw ContractError("dominance over vectors of different dimension");
    }
    bool strictly_better = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double da = sense == Sense::maximize ? a[k] : -a[k];
        const double db = sense == Sense::maximize ? b[k] : -b[k];
        if (da < db) {
            return false;
        }
        if (da > db) {
            strictly_better = true;
        }
    }
    return strictly_better;
}

/// Dominance between evaluated objective vectors (maximization sense).
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (!a.set.empty() && !b.set.empty() && a.set != b.set) {
        throw ContractError("dominance between mismatched objective sets");
    }
    return dominates(std::span<const double>(a.scores), std::span<const double>(b.scores),
                     Sense::maximize);
}

/// Deb's fast nondominated sort. Returns index sets F1, F2, ... where F1 is
/// the nondominated set, F2 the nondominated set after removing F1, etc.
inline std::vector<std::vector<std::size_t>>
fast_nondominated_sort(const std::vector<std::vector<double>>& objectives, Sense sense) {
    const std::size_t n = objectives.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(objectives[i], objectives[j], sense)) {
                dominated_by[i].push_back(j);
                ++domination_count[j];
            } else if (dominates(objectives[j], objectives[i], sense)) {
                dominated_by[j].push_back(i);
                ++domination_count[i];
            }
        }
    }

    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (domination_count[i] == 0) {
            current.push_back(i);
        }
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            for (std::size_t j : dominated_by[i]) {
                if (--domination_count[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

/// NSGA-II crowding distance over one front's objective vectors. Boundary
/// points get +inf; an objective with zero range contributes nothing.
inline std::vector<double>
crowding_distance(const std::vector<std::vector<double>>& front) {
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> distance(n, 0.0);
    if (n == 0) {
        return distance;
    }
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    const std::size_t m = front.front().size();
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return front[a][k] < front[b][k];
        });
        const double range = front[order.back()][k] - front[order.front()][k];
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        if (range <= 0.0) {
            continue;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            distance[order[i]] += (front[order[i + 1]][k] - front[order[i - 1]][k]) / range;
        }
    }
    return distance;
}

} // namespace normopt
