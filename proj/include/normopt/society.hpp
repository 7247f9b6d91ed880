#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "normopt/error.hpp"
#include "normopt/norms.hpp"
#include "normopt/rng.hpp"

namespace normopt {

/// Parameters of one simulated tax society.
struct SimulationConfig {
    std::size_t num_agents = 200;
    std::size_t num_groups = kNumGroups;
    double interest_rate = 0.05;
    double evader_probability = 0.05;
    std::size_t path_length = 10;
    double wealth_min = 0.0;
    double wealth_max = 100.0;

    void validate() const {
        if (num_agents == 0) {
            throw ConfigError("num_agents must be positive");
        }
        if (num_groups == 0 || num_groups > kNumGroups) {
            throw ConfigError("num_groups must be in [1, " + std::to_string(kNumGroups) + "]");
        }
        if (num_agents % num_groups != 0) {
            throw ConfigError("num_agents (" + std::to_string(num_agents) +
                              ") not divisible by num_groups (" + std::to_string(num_groups) + ")");
        }
        if (!(evader_probability >= 0.0 && evader_probability <= 1.0)) {
            throw ConfigError("evader_probability outside [0, 1]");
        }
        if (!(interest_rate >= 0.0)) {
            throw ConfigError("interest_rate must be nonnegative");
        }
        if (!(wealth_min >= 0.0 && wealth_max > wealth_min)) {
            throw ConfigError("wealth range must satisfy 0 <= min < max");
        }
    }
};

struct Citizen {
    double wealth = 0.0;         // current money, never negative
    double primary_wealth = 0.0; // wealth at the start of the current step
    int group = 1;               // wealth group, 1 = poorest
    bool evader = false;
};

/// The mutable world state of the tax scenario. Value semantics: copies are
/// deep and independent, so distinct societies simulate in parallel freely.
class Society {
public:
    Society(const SimulationConfig& config, std::uint64_t seed)
        : num_groups_(config.num_groups),
          interest_rate_(config.interest_rate),
          rng_(seed) {
        config.validate();
        citizens_.resize(config.num_agents);
        std::uniform_real_distribution<double> wealth_dist(config.wealth_min, config.wealth_max);
        for (auto& c : citizens_) {
            c.wealth = wealth_dist(rng_);
            c.primary_wealth = c.wealth;
        }
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t i = 0; i < citizens_.size(); ++i) {
            citizens_[i].evader = unit(rng_) < config.evader_probability;
            if (citizens_[i].evader) {
                evader_index_.push_back(static_cast<std::uint32_t>(i));
            }
        }
        order_.resize(citizens_.size());
        assign_groups();
    }

    /// Build a society from an explicit citizen state (snapshots, tests).
    /// Groups are recomputed from the given wealths.
    Society(std::vector<Citizen> citizens, std::size_t num_groups, double interest_rate,
            std::uint64_t seed)
        : citizens_(std::move(citizens)),
          num_groups_(num_groups),
          interest_rate_(interest_rate),
          rng_(seed) {
        if (num_groups_ == 0 || citizens_.empty() || citizens_.size() % num_groups_ != 0) {
            throw ConfigError("citizen count must be a positive multiple of num_groups");
        }
        if (num_groups_ > kNumGroups) {
            throw ConfigError("at most " + std::to_string(kNumGroups) + " groups");
        }
        for (std::size_t i = 0; i < citizens_.size(); ++i) {
            if (citizens_[i].evader) {
                evader_index_.push_back(static_cast<std::uint32_t>(i));
            }
        }
        order_.resize(citizens_.size());
        assign_groups();
    }

    [[nodiscard]] const std::vector<Citizen>& citizens() const noexcept { return citizens_; }
    [[nodiscard]] std::size_t num_groups() const noexcept { return num_groups_; }
    [[nodiscard]] std::size_t group_size() const noexcept { return citizens_.size() / num_groups_; }
    [[nodiscard]] double interest_rate() const noexcept { return interest_rate_; }

    /// Redistribution pool of the most recent step (after interest).
    [[nodiscard]] double last_pool() const noexcept { return last_pool_; }

    [[nodiscard]] double total_wealth() const noexcept {
        double sum = 0.0;
        for (const auto& c : citizens_) {
            sum += c.wealth;
        }
        return sum;
    }

    /// Re-sort citizens into equal-size wealth groups. Ordering is by
    /// (wealth, original index), so ties break deterministically. Group
    /// membership only needs the quintile boundaries, so a selection pass
    /// per boundary replaces a full sort.
    void assign_groups() {
        for (std::size_t i = 0; i < citizens_.size(); ++i) {
            order_[i] = {citizens_[i].wealth, static_cast<std::uint32_t>(i)};
        }
        const auto less = [](const WealthEntry& a, const WealthEntry& b) {
            return a.wealth < b.wealth || (a.wealth == b.wealth && a.index < b.index);
        };
        const std::size_t per_group = group_size();
        for (std::size_t g = 1; g < num_groups_; ++g) {
            std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>((g - 1) * per_group),
                             order_.begin() + static_cast<std::ptrdiff_t>(g * per_group),
                             order_.end(), less);
        }
        for (std::size_t pos = 0; pos < order_.size(); ++pos) {
            citizens_[order_[pos].index].group = static_cast<int>(pos / per_group) + 1;
        }
    }

    /// One tax cycle: snapshot primary wealth, collect taxes, catch and fine
    /// evaders, add interest, redistribute by group share, regroup.
    void step(const NormVector& norms) {
        norms.validate();
        for (auto& c : citizens_) {
            c.primary_wealth = c.wealth;
        }

        double pool = 0.0;
        for (auto& c : citizens_) {
            if (!c.evader) {
                const double tax = norms.collect[static_cast<std::size_t>(c.group - 1)] * c.wealth;
                c.wealth -= tax;
                pool += tax;
            }
        }

        // One uniform draw per evader, in citizen order. A caught evader owes
        // the evaded tax plus the fine on it, capped at their whole wealth.
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::uint32_t i : evader_index_) {
            Citizen& c = citizens_[i];
            const bool caught = unit(rng_) < norms.catch_rate;
            if (caught) {
                const double tax = norms.collect[static_cast<std::size_t>(c.group - 1)] * c.wealth;
                const double due = std::min(tax + norms.fine_rate * tax, c.wealth);
                c.wealth -= due;
                pool += due;
            }
        }

        pool *= 1.0 + interest_rate_;
        last_pool_ = pool;

        const double per_member = 1.0 / static_cast<double>(group_size());
        for (auto& c : citizens_) {
            const double share = pool * norms.redistribute[static_cast<std::size_t>(c.group - 1)];
            c.wealth += share * per_member;
        }

        assign_groups();
    }

private:
    struct WealthEntry {
        double wealth;
        std::uint32_t index;
    };

    std::vector<Citizen> citizens_;
    std::size_t num_groups_;
    double interest_rate_;
    double last_pool_ = 0.0;
    Rng rng_;
    std::vector<WealthEntry> order_;          // selection scratch, reused across steps
    std::vector<std::uint32_t> evader_index_; // evader positions in citizen order
};

inline Society init_society(const SimulationConfig& config, std::uint64_t seed) {
    return Society(config, seed);
}

struct PathResult {
    Society society;
    double final_pool = 0.0; // cr of the last executed step (0 for empty paths)
};

/// Simulate a full path: fresh society, then `path_length` steps.
inline PathResult run_path(const SimulationConfig& config, const NormVector& norms,
                           std::uint64_t seed) {
    Society society(config, seed);
    for (std::size_t t = 0; t < config.path_length; ++t) {
        society.step(norms);
    }
    const double pool = society.last_pool();
    return PathResult{std::move(society), pool};
}

} // namespace normopt
