#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>

#include "normopt/error.hpp"

namespace normopt {

inline constexpr std::size_t kNumGroups = 5;
inline constexpr std::size_t kGenomeSize = 2 * kNumGroups + 2;
inline constexpr double kSimplexTolerance = 1e-9;

/// Gene layout: collect[0..4], redistribute[5..9], catch[10], fine[11].
inline constexpr std::size_t kCollectOffset = 0;
inline constexpr std::size_t kRedistributeOffset = kNumGroups;
inline constexpr std::size_t kCatchSlot = 2 * kNumGroups;
inline constexpr std::size_t kFineSlot = 2 * kNumGroups + 1;

struct GeneBounds {
    double lo = 0.0;
    double hi = 1.0;
};

/// Per-slot bounds: tax and redistribution fractions live in [0,1], the
/// catch probability in [0,1/2], the fine rate in [0,1].
constexpr GeneBounds gene_bounds(std::size_t slot) noexcept {
    return slot == kCatchSlot ? GeneBounds{0.0, 0.5} : GeneBounds{0.0, 1.0};
}

/// Human-readable slot names, used in diagnostics and CSV headers.
inline std::string gene_name(std::size_t slot) {
    if (slot < kRedistributeOffset) {
        return "collect_" + std::to_string(slot + 1);
    }
    if (slot < kCatchSlot) {
        return "redistribute_" + std::to_string(slot - kRedistributeOffset + 1);
    }
    return slot == kCatchSlot ? "catch" : "fine";
}

/// The twelve decision variables of the tax scenario: one tax rate and one
/// redistribution share per wealth group, plus the evader catch probability
/// and the fine rate.
struct NormVector {
    std::array<double, kNumGroups> collect{};
    std::array<double, kNumGroups> redistribute{};
    double catch_rate = 0.0;
    double fine_rate = 0.0;

    static NormVector from_genes(std::span<const double> genes) {
        if (genes.size() != kGenomeSize) {
            throw ContractError("norm genome must have " + std::to_string(kGenomeSize) +
                                " genes, got " + std::to_string(genes.size()));
        }
        NormVector n;
        for (std::size_t k = 0; k < kNumGroups; ++k) {
            n.collect[k] = genes[kCollectOffset + k];
            n.redistribute[k] = genes[kRedistributeOffset + k];
        }
        n.catch_rate = genes[kCatchSlot];
        n.fine_rate = genes[kFineSlot];
        return n;
    }

    [[nodiscard]] std::array<double, kGenomeSize> to_genes() const noexcept {
        std::array<double, kGenomeSize> g{};
        for (std::size_t k = 0; k < kNumGroups; ++k) {
            g[kCollectOffset + k] = collect[k];
            g[kRedistributeOffset + k] = redistribute[k];
        }
        g[kCatchSlot] = catch_rate;
        g[kFineSlot] = fine_rate;
        return g;
    }

    /// Throws ConstraintError naming the first violated bound.
    void validate() const {
        auto genes = to_genes();
        for (std::size_t i = 0; i < kGenomeSize; ++i) {
            const auto [lo, hi] = gene_bounds(i);
            if (!(genes[i] >= lo && genes[i] <= hi)) {
                throw ConstraintError(gene_name(i) + " = " + std::to_string(genes[i]) +
                                      " outside [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]");
            }
        }
        const double sum = std::accumulate(redistribute.begin(), redistribute.end(), 0.0);
        if (std::abs(sum - 1.0) > kSimplexTolerance) {
            throw ConstraintError("redistribute fractions sum to " + std::to_string(sum) +
                                  ", expected 1");
        }
    }

    [[nodiscard]] bool valid() const noexcept {
        try {
            validate();
            return true;
        } catch (const ConstraintError&) {
            return false;
        }
    }
};

/// Clamp every gene into bounds, then rescale the redistribute block onto the
/// unit simplex. A block that clamps to all zeros becomes the uniform share.
inline void repair_genes(std::span<double> genes) {
    if (genes.size() != kGenomeSize) {
        throw ContractError("repair expects " + std::to_string(kGenomeSize) + " genes");
    }
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        const auto [lo, hi] = gene_bounds(i);
        genes[i] = std::clamp(genes[i], lo, hi);
    }
    auto block = genes.subspan(kRedistributeOffset, kNumGroups);
    const double sum = std::accumulate(block.begin(), block.end(), 0.0);
    if (sum <= 0.0) {
        std::fill(block.begin(), block.end(), 1.0 / static_cast<double>(kNumGroups));
    } else {
        for (double& r : block) {
            r /= sum;
        }
    }
}

} // namespace normopt
