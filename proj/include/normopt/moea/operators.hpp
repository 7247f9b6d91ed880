#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "normopt/error.hpp"
#include "normopt/norms.hpp"
#include "normopt/rng.hpp"

namespace normopt {

/// SBX spread factor for a uniform draw u and distribution index eta_c.
/// beta(0.5) = 1, i.e. the children coincide with the parents.
inline double sbx_spread(double u, double eta_c) noexcept {
    if (u <= 0.5) {
        return std::pow(2.0 * u, 1.0 / (eta_c + 1.0));
    }
    return std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta_c + 1.0));
}

/// Simulated binary crossover. The pair recombines with probability p_c; a
/// firing pair crosses each gene independently with probability 1/2. Children
/// are returned unclamped — per-gene means equal the parent means exactly —
/// and the caller repairs them afterwards.
inline std::pair<std::vector<double>, std::vector<double>>
sbx_crossover(std::span<const double> p1, std::span<const double> p2, double eta_c, double p_c,
              Rng& rng) {
    if (p1.size() != p2.size()) {
        throw ContractError("sbx parents differ in length");
    }
    std::vector<double> c1(p1.begin(), p1.end());
    std::vector<double> c2(p2.begin(), p2.end());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) <= p_c) {
        for (std::size_t i = 0; i < c1.size(); ++i) {
            if (unit(rng) <= 0.5) {
                const double beta = sbx_spread(unit(rng), eta_c);
                const double x1 = p1[i];
                const double x2 = p2[i];
                c1[i] = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2);
                c2[i] = 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2);
            }
        }
    }
    return {std::move(c1), std::move(c2)};
}

/// Bounded polynomial-mutation perturbation for a gene at normalized
/// distances d1 = (y-lo)/span, d2 = (hi-y)/span from its bounds.
/// delta(0.5) = 0, i.e. the gene is left unchanged.
inline double pm_delta(double u, double eta_m, double d1, double d2) noexcept {
    const double mut_pow = 1.0 / (eta_m + 1.0);
    if (u <= 0.5) {
        const double xy = 1.0 - d1;
        const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta_m + 1.0);
        return std::pow(val, mut_pow) - 1.0;
    }
    const double xy = 1.0 - d2;
    const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta_m + 1.0);
    return 1.0 - std::pow(val, mut_pow);
}

/// Polynomial mutation with per-gene probability p_m. Genes stay inside the
/// bounds supplied per slot.
template <typename BoundsFn>
void polynomial_mutation(std::span<double> genes, double eta_m, double p_m, BoundsFn bounds,
                         Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < genes.size(); ++i) {
        if (unit(rng) <= p_m) {
            const GeneBounds b = bounds(i);
            const double span = b.hi - b.lo;
            if (span <= 0.0) {
                continue;
            }
            const double y = genes[i];
            const double d1 = (y - b.lo) / span;
            const double d2 = (b.hi - y) / span;
            const double delta = pm_delta(unit(rng), eta_m, d1, d2);
            genes[i] = std::clamp(y + delta * span, b.lo, b.hi);
        }
    }
}

} // namespace normopt
