#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "normopt/error.hpp"
#include "normopt/norms.hpp"
#include "normopt/rng.hpp"
#include "normopt/society.hpp"
#include "normopt/values.hpp"

namespace normopt {

/// Objective value assigned to genomes whose evaluation hits a degenerate
/// simulation state. Dominated by every real evaluation.
inline constexpr double kWorstObjective = 1e12;

/// The optimization surface the evolutionary algorithms run against.
/// `evaluate` returns minimization-sense objectives; `repair` projects a
/// genome back onto the feasible set.
template <typename P>
concept OptimizationProblem = requires(const P& p, std::span<double> genes,
                                       std::span<const double> const_genes) {
    { p.dimension() } -> std::convertible_to<std::size_t>;
    { p.objective_count() } -> std::convertible_to<std::size_t>;
    { p.bounds(std::size_t{}) } -> std::convertible_to<GeneBounds>;
    { p.repair(genes) };
    { p.evaluate(const_genes) } -> std::convertible_to<std::vector<double>>;
};

/// The tax scenario as an optimization problem. Fitness is deterministic
/// within a run: each genome's simulation seed hashes its own bit pattern
/// with the run seed, and the configured number of Monte Carlo samples is
/// averaged. Value scores are negated into minimization sense.
class TaxProblem {
public:
    TaxProblem(SimulationConfig simulation, ObjectiveSet objectives, std::size_t eval_samples,
               std::size_t report_samples, std::uint64_t run_seed)
        : simulation_(simulation),
          objectives_(std::move(objectives)),
          eval_samples_(eval_samples),
          report_samples_(report_samples),
          run_seed_(run_seed) {
        simulation_.validate();
        if (objectives_.empty()) {
            throw ConfigError("tax problem needs at least one objective");
        }
        if (eval_samples_ == 0 || report_samples_ == 0) {
            throw ConfigError("sample counts must be positive");
        }
    }

    [[nodiscard]] std::size_t dimension() const noexcept { return kGenomeSize; }
    [[nodiscard]] std::size_t objective_count() const noexcept { return objectives_.size(); }
    [[nodiscard]] GeneBounds bounds(std::size_t slot) const noexcept { return gene_bounds(slot); }
    [[nodiscard]] const ObjectiveSet& objective_set() const noexcept { return objectives_; }
    [[nodiscard]] const SimulationConfig& simulation() const noexcept { return simulation_; }
    [[nodiscard]] std::uint64_t run_seed() const noexcept { return run_seed_; }

    void repair(std::span<double> genes) const { repair_genes(genes); }

    [[nodiscard]] std::vector<double> evaluate(std::span<const double> genes) const {
        return evaluate_with(genes, eval_samples_);
    }

    /// Report-quality re-evaluation (the full Monte Carlo budget).
    [[nodiscard]] std::vector<double> report_evaluate(std::span<const double> genes) const {
        return evaluate_with(genes, report_samples_);
    }

private:
    [[nodiscard]] std::vector<double> evaluate_with(std::span<const double> genes,
                                                    std::size_t samples) const {
        const NormVector norms = NormVector::from_genes(genes);
        const std::uint64_t seed = hash_genes(run_seed_, genes);
        try {
            ObjectiveVector v = normopt::evaluate(norms, simulation_, objectives_, samples, seed);
            for (double& s : v.scores) {
                s = -s;
            }
            return std::move(v.scores);
        } catch (const DegenerateStateError&) {
            return std::vector<double>(objectives_.size(), kWorstObjective);
        }
    }

    SimulationConfig simulation_;
    ObjectiveSet objectives_;
    std::size_t eval_samples_;
    std::size_t report_samples_;
    std::uint64_t run_seed_;
};

static_assert(OptimizationProblem<TaxProblem>);

/// Bi-objective benchmark: minimize (x0^2, (x0-2)^2) over [-5, 5]^dim.
/// The Pareto set is x0 in [0, 2]; extra variables are distance penalties
/// added to both objectives so the optimum requires them at zero.
class SchafferProblem {
public:
    explicit SchafferProblem(std::size_t dim = 1) : dim_(dim) {}

    [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }
    [[nodiscard]] std::size_t objective_count() const noexcept { return 2; }
    [[nodiscard]] GeneBounds bounds(std::size_t) const noexcept { return {-5.0, 5.0}; }

    void repair(std::span<double> genes) const {
        for (double& g : genes) {
            g = std::clamp(g, -5.0, 5.0);
        }
    }

    [[nodiscard]] std::vector<double> evaluate(std::span<const double> genes) const {
        double penalty = 0.0;
        for (std::size_t i = 1; i < genes.size(); ++i) {
            penalty += genes[i] * genes[i];
        }
        const double x = genes[0];
        return {x * x + penalty, (x - 2.0) * (x - 2.0) + penalty};
    }

private:
    std::size_t dim_;
};

static_assert(OptimizationProblem<SchafferProblem>);

} // namespace normopt
