#pragma once

#include <limits>
#include <vector>

namespace normopt {

/// One genome with its evaluated objectives (internal minimization sense)
/// and per-algorithm bookkeeping.
struct Individual {
    std::vector<double> genes;
    std::vector<double> objectives; // minimization; empty until evaluated

    std::size_t rank = 0;                                         // nondomination front index
    double crowding = 0.0;                                        // NSGA-II crowding distance
    double strength_fitness = 0.0;                                // SPEA2 fitness
    double scalarized_utility = std::numeric_limits<double>::max(); // MOEA/DD, MOMBI2

    [[nodiscard]] bool evaluated() const noexcept { return !objectives.empty(); }
};

using Population = std::vector<Individual>;

} // namespace normopt
