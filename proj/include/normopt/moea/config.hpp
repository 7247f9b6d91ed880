#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "normopt/error.hpp"
#include "normopt/moea/individual.hpp"

namespace normopt {

enum class Algorithm { nsga2, spea2, moeadd, mombi2 };

constexpr std::string_view algorithm_name(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::nsga2: return "nsga2";
        case Algorithm::spea2: return "spea2";
        case Algorithm::moeadd: return "moeadd";
        case Algorithm::mombi2: return "mombi2";
    }
    return "?";
}

constexpr std::string_view algorithm_display_name(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::nsga2: return "NSGA-II";
        case Algorithm::spea2: return "SPEA2";
        case Algorithm::moeadd: return "MOEA/DD";
        case Algorithm::mombi2: return "MOMBI2";
    }
    return "?";
}

inline Algorithm algorithm_from_name(std::string_view name) {
    for (Algorithm a : {Algorithm::nsga2, Algorithm::spea2, Algorithm::moeadd, Algorithm::mombi2}) {
        if (algorithm_name(a) == name || algorithm_display_name(a) == name) {
            return a;
        }
    }
    throw ConfigError("unknown algorithm: " + std::string(name));
}

/// Invoked after initialization and after every environmental selection.
using GenerationObserver = std::function<void(std::size_t generation, const Population&)>;

struct MoeaConfig {
    Algorithm algorithm = Algorithm::nsga2;
    std::size_t population = 100;
    std::size_t generations = 500;

    // SBX crossover and polynomial mutation.
    double eta_c = 20.0;
    double p_c = 0.9;
    double eta_m = 20.0;
    double p_m = 0.0; // 0 means 1/dimension

    // MOEA/DD.
    std::size_t neighborhood = 10;     // delta: mating neighborhood size
    std::size_t max_replacements = 1;  // Nr: solutions one offspring may displace
    double neighborhood_prob = 0.9;    // probability of mating inside the neighborhood
    double pbi_theta = 5.0;

    // MOMBI2 reference-point statistics.
    std::size_t record_size = 5;
    double variance_threshold = 1e-3;

    std::uint64_t seed = 0;
    GenerationObserver observer;

    [[nodiscard]] double mutation_probability(std::size_t dimension) const {
        return p_m > 0.0 ? p_m : 1.0 / static_cast<double>(dimension);
    }

    void validate() const {
        if (population < 2) {
            throw ConfigError("population size must be at least 2");
        }
        if (p_c < 0.0 || p_c > 1.0 || p_m < 0.0 || p_m > 1.0) {
            throw ConfigError("operator probabilities must lie in [0, 1]");
        }
        if (neighborhood_prob < 0.0 || neighborhood_prob > 1.0) {
            throw ConfigError("neighborhood_prob must lie in [0, 1]");
        }
    }
};

} // namespace normopt
