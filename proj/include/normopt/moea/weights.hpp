#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "normopt/error.hpp"

namespace normopt {

/// Number of simplex-lattice points: C(resolution + dim - 1, dim - 1).
inline std::size_t lattice_point_count(std::size_t dim, std::size_t resolution) {
    // Overflow-safe for the sizes this library meets.
    std::size_t count = 1;
    for (std::size_t i = 1; i < dim; ++i) {
        count = count * (resolution + i) / i;
    }
    return count;
}

/// Smallest lattice resolution whose point count equals `population`, or a
/// configuration error when no resolution matches.
inline std::size_t lattice_resolution_for(std::size_t dim, std::size_t population) {
    for (std::size_t h = 1;; ++h) {
        const std::size_t count = lattice_point_count(dim, h);
        if (count == population) {
            return h;
        }
        if (count > population) {
            throw ConfigError("no simplex lattice of dimension " + std::to_string(dim) +
                              " has exactly " + std::to_string(population) +
                              " points; nearest counts are " +
                              std::to_string(lattice_point_count(dim, h - 1)) + " and " +
                              std::to_string(count));
        }
    }
}

namespace detail {

inline void das_dennis_recurse(std::size_t dim, std::size_t resolution, std::size_t slot,
                               std::size_t remaining, std::vector<double>& partial,
                               std::vector<std::vector<double>>& out) {
    if (slot + 1 == dim) {
        partial[slot] = static_cast<double>(remaining) / static_cast<double>(resolution);
        out.push_back(partial);
        return;
    }
    for (std::size_t used = 0; used <= remaining; ++used) {
        partial[slot] = static_cast<double>(used) / static_cast<double>(resolution);
        das_dennis_recurse(dim, resolution, slot + 1, remaining - used, partial, out);
    }
}

} // namespace detail

/// Das–Dennis simplex-lattice weight vectors: all nonnegative vectors with
/// components h/resolution summing to 1, in lexicographic order.
inline std::vector<std::vector<double>> das_dennis_weights(std::size_t dim,
                                                           std::size_t resolution) {
    if (dim == 0 || resolution == 0) {
        throw ConfigError("weight lattice needs positive dimension and resolution");
    }
    std::vector<std::vector<double>> out;
    out.reserve(lattice_point_count(dim, resolution));
    std::vector<double> partial(dim, 0.0);
    detail::das_dennis_recurse(dim, resolution, 0, resolution, partial, out);
    return out;
}

/// Weight vectors for a decomposition algorithm with the given population
/// size; the lattice resolution is inferred and must match exactly.
inline std::vector<std::vector<double>> weights_for_population(std::size_t dim,
                                                               std::size_t population) {
    return das_dennis_weights(dim, lattice_resolution_for(dim, population));
}

/// For each weight vector, the indices of its `size` nearest vectors by
/// Euclidean distance, self included, ties broken by index.
inline std::vector<std::vector<std::size_t>>
weight_neighborhoods(const std::vector<std::vector<double>>& weights, std::size_t size) {
    const std::size_t n = weights.size();
    if (size == 0 || size > n) {
        throw ConfigError("neighborhood size must be in [1, population]");
    }
    std::vector<std::vector<std::size_t>> hoods(n);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < weights[i].size(); ++k) {
                const double d = weights[i][k] - weights[j][k];
                d2 += d * d;
            }
            dist[j] = {d2, j};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(size),
                          dist.end());
        hoods[i].reserve(size);
        for (std::size_t j = 0; j < size; ++j) {
            hoods[i].push_back(dist[j].second);
        }
    }
    return hoods;
}

} // namespace normopt
