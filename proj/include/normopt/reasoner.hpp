#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "normopt/error.hpp"
#include "normopt/moea/evolve.hpp"
#include "normopt/norms.hpp"
#include "normopt/rng.hpp"

namespace normopt {

/// Weight placed on a voter's preferred decision variable; the remaining
/// mass splits uniformly over the other slots.
inline constexpr double kPreferredWeight = 0.8;

enum class VoteMode {
    weighted, // argmax of the full weighted gene sum
    literal   // argmax of the preferred gene alone
};

inline VoteMode vote_mode_from_name(std::string_view name) {
    if (name == "weighted") {
        return VoteMode::weighted;
    }
    if (name == "literal") {
        return VoteMode::literal;
    }
    throw ConfigError("unknown vote mode: " + std::string(name));
}

/// A citizen participating in the election. `preferred_variable` is already
/// resolved against the agent's wealth group: a preference inside the
/// collect or redistribute block points at the agent's own group's slot.
struct VoterAgent {
    int group = 1;                               // wealth group, 1..5
    std::size_t preferred_variable = 0;          // resolved gene slot
    std::array<double, kGenomeSize> weights{};   // sums to 1

    static VoterAgent make(int group, std::size_t raw_slot,
                           double preferred_weight = kPreferredWeight) {
        VoterAgent agent;
        agent.group = group;
        agent.preferred_variable = resolve_slot(raw_slot, group);
        const double rest =
            (1.0 - preferred_weight) / static_cast<double>(kGenomeSize - 1);
        agent.weights.fill(rest);
        agent.weights[agent.preferred_variable] = preferred_weight;
        return agent;
    }

    /// Group-sensitive norms read the agent's own group component.
    static std::size_t resolve_slot(std::size_t raw_slot, int group) {
        const auto g = static_cast<std::size_t>(group - 1);
        if (raw_slot < kRedistributeOffset) {
            return kCollectOffset + g;
        }
        if (raw_slot < kCatchSlot) {
            return kRedistributeOffset + g;
        }
        return raw_slot;
    }
};

/// Random electorate: uniformly random preferred slot and wealth group per
/// agent, deterministic per seed.
inline std::vector<VoterAgent> make_voters(std::size_t count, std::uint64_t seed,
                                           double preferred_weight = kPreferredWeight) {
    if (count == 0) {
        throw ContractError("an election needs at least one voter");
    }
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> slot(0, kGenomeSize - 1);
    std::uniform_int_distribution<int> group(1, static_cast<int>(kNumGroups));
    std::vector<VoterAgent> voters;
    voters.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t raw = slot(rng);
        const int g = group(rng);
        voters.push_back(VoterAgent::make(g, raw, preferred_weight));
    }
    return voters;
}

namespace detail {

/// Gene value as scored by a voter. In direction-aware mode a collect slot
/// is scored inverted (citizens prefer lower tax rates).
inline double scored_gene(const Solution& s, std::size_t slot, bool invert_collect) {
    const double v = s.genes.at(slot);
    if (invert_collect && slot < kRedistributeOffset) {
        return 1.0 - v;
    }
    return v;
}

} // namespace detail

/// Index of the solution maximizing the weighted sum of decision variables;
/// ties break to the lowest index.
inline std::size_t fitness(std::span<const Solution> solutions,
                           std::span<const double> weights, bool invert_collect = false) {
    if (solutions.empty()) {
        throw ContractError("fitness over an empty solution set");
    }
    std::size_t best = 0;
    double best_fit = -std::numeric_limits<double>::max();
    for (std::size_t s = 0; s < solutions.size(); ++s) {
        double fit = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            fit += weights[i] * detail::scored_gene(solutions[s], i, invert_collect);
        }
        if (fit > best_fit) {
            best_fit = fit;
            best = s;
        }
    }
    return best;
}

/// One agent's vote. Weighted mode runs the full weighted fitness; literal
/// mode is the bare argmax of the preferred variable.
inline std::size_t get_vote(const VoterAgent& agent, std::span<const Solution> solutions,
                            VoteMode mode = VoteMode::weighted, bool invert_collect = false) {
    if (solutions.empty()) {
        throw ContractError("vote over an empty solution set");
    }
    if (mode == VoteMode::weighted) {
        return fitness(solutions, agent.weights, invert_collect);
    }
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::max();
    for (std::size_t s = 0; s < solutions.size(); ++s) {
        const double v = detail::scored_gene(solutions[s], agent.preferred_variable, invert_collect);
        if (v > best_value) {
            best_value = v;
            best = s;
        }
    }
    return best;
}

struct ElectionResult {
    std::size_t winner_index = 0;
    Solution winner;
    std::vector<std::size_t> tally; // one entry per solution, sums to voter count
};

/// Plurality election over the front; ties break to the lowest solution index.
inline ElectionResult main_reasoner(std::span<const VoterAgent> voters,
                                    std::span<const Solution> solutions,
                                    VoteMode mode = VoteMode::weighted,
                                    bool invert_collect = false) {
    if (voters.empty()) {
        throw ContractError("election with no voters");
    }
    if (solutions.empty()) {
        throw ContractError("election over an empty solution set");
    }
    ElectionResult result;
    result.tally.assign(solutions.size(), 0);
    for (const auto& agent : voters) {
        ++result.tally[get_vote(agent, solutions, mode, invert_collect)];
    }
    std::size_t best = 0;
    for (std::size_t s = 1; s < solutions.size(); ++s) {
        if (result.tally[s] > result.tally[best]) {
            best = s;
        }
    }
    result.winner_index = best;
    result.winner = solutions[best];
    return result;
}

} // namespace normopt
