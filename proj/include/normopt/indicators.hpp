#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "normopt/error.hpp"
#include "normopt/moea/dominance.hpp"
#include "normopt/moea/evolve.hpp"
#include "normopt/rng.hpp"
#include "normopt/values.hpp"

namespace normopt {

/// Maximal nondominated subset (maximization sense), input order preserved.
/// Duplicate objective vectors are kept once.
inline Front nondominated_filter(std::span<const Solution> points) {
    if (points.empty()) {
        throw ContractError("nondominated filter over an empty set");
    }
    Front out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < points.size() && keep; ++j) {
            if (j == i) {
                continue;
            }
            if (dominates(points[j].objectives, points[i].objectives)) {
                keep = false;
            }
        }
        if (keep) {
            for (const auto& chosen : out.solutions) {
                if (chosen.objectives.scores == points[i].objectives.scores) {
                    keep = false;
                    break;
                }
            }
        }
        if (keep) {
            out.solutions.push_back(points[i]);
        }
    }
    return out;
}

inline Front nondominated_filter(std::span<const ObjectiveVector> points) {
    std::vector<Solution> wrapped(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        wrapped[i].objectives = points[i];
    }
    return nondominated_filter(std::span<const Solution>(wrapped));
}

/// Componentwise worst objective vector over a set (minimum per objective in
/// maximization sense).
inline ObjectiveVector nadir_point(std::span<const Solution> points) {
    if (points.empty()) {
        throw ContractError("nadir of an empty set");
    }
    ObjectiveVector nadir = points.front().objectives;
    for (const auto& p : points) {
        if (p.objectives.scores.size() != nadir.scores.size()) {
            throw ContractError("nadir over mismatched objective dimensions");
        }
        for (std::size_t k = 0; k < nadir.scores.size(); ++k) {
            nadir.scores[k] = std::min(nadir.scores[k], p.objectives.scores[k]);
        }
    }
    return nadir;
}

namespace detail {

/// Exact hypervolume of a union of boxes [0, p] for nonnegative points, by
/// the WFG exclusive-volume recursion with a direct two-dimensional sweep as
/// the base case.
class WfgHypervolume {
public:
    double operator()(std::vector<std::vector<double>> points) {
        if (points.empty()) {
            return 0.0;
        }
        return compute(filter_maximal(std::move(points)));
    }

private:
    static double inclusive(const std::vector<double>& p) {
        double v = 1.0;
        for (double x : p) {
            v *= x;
        }
        return v;
    }

    /// Keep only maximal points (maximization dominance over gains).
    static std::vector<std::vector<double>> filter_maximal(std::vector<std::vector<double>> pts) {
        const std::size_t n = pts.size();
        std::vector<bool> keep(n, true);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n && keep[i]; ++j) {
                if (j == i) {
                    continue;
                }
                bool geq_all = true;
                bool gt_any = false;
                for (std::size_t k = 0; k < pts[i].size(); ++k) {
                    if (pts[j][k] < pts[i][k]) {
                        geq_all = false;
                        break;
                    }
                    if (pts[j][k] > pts[i][k]) {
                        gt_any = true;
                    }
                }
                if (geq_all && (gt_any || j < i)) {
                    keep[i] = false; // dominated, or an earlier duplicate exists
                }
            }
        }
        std::vector<std::vector<double>> kept;
        kept.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (keep[i]) {
                kept.push_back(std::move(pts[i]));
            }
        }
        return kept;
    }

    double compute(std::vector<std::vector<double>> pts) {
        if (pts.empty()) {
            return 0.0;
        }
        const std::size_t m = pts.front().size();
        if (m == 1) {
            double best = 0.0;
            for (const auto& p : pts) {
                best = std::max(best, p[0]);
            }
            return best;
        }
        if (m == 2) {
            std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
                return a[0] > b[0] || (a[0] == b[0] && a[1] > b[1]);
            });
            double volume = 0.0;
            double covered = 0.0;
            for (const auto& p : pts) {
                if (p[1] > covered) {
                    volume += p[0] * (p[1] - covered);
                    covered = p[1];
                }
            }
            return volume;
        }
        // Sort worst-first in the last objective so limit sets shrink fast.
        std::sort(pts.begin(), pts.end(), [m](const auto& a, const auto& b) {
            return a[m - 1] < b[m - 1];
        });
        double volume = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::vector<std::vector<double>> limited;
            limited.reserve(pts.size() - i - 1);
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                std::vector<double> q(m);
                for (std::size_t k = 0; k < m; ++k) {
                    q[k] = std::min(pts[i][k], pts[j][k]);
                }
                limited.push_back(std::move(q));
            }
            const double exclusive =
                inclusive(pts[i]) - compute(filter_maximal(std::move(limited)));
            volume += exclusive;
        }
        return volume;
    }
};

/// Translate a front into gain space (score - reference), dropping points
/// that are not weakly better than the reference in every objective.
inline std::vector<std::vector<double>> gains_against_reference(const Front& front,
                                                                const ObjectiveVector& reference) {
    std::vector<std::vector<double>> gains;
    gains.reserve(front.size());
    for (const auto& s : front.solutions) {
        if (s.objectives.scores.size() != reference.scores.size()) {
            throw ContractError("hypervolume front/reference dimension mismatch");
        }
        std::vector<double> g(reference.scores.size());
        bool in_box = true;
        for (std::size_t k = 0; k < g.size(); ++k) {
            g[k] = s.objectives.scores[k] - reference.scores[k];
            if (g[k] < 0.0) {
                in_box = false;
                break;
            }
        }
        if (in_box) {
            gains.push_back(std::move(g));
        }
    }
    return gains;
}

} // namespace detail

/// Exact hypervolume dominated by `front` over `reference` (maximization).
/// Points outside the reference box are clipped from the input.
inline double hypervolume(const Front& front, const ObjectiveVector& reference) {
    if (front.empty()) {
        throw ContractError("hypervolume of an empty front");
    }
    return detail::WfgHypervolume{}(detail::gains_against_reference(front, reference));
}

struct HypervolumeEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 for the exact method
    bool exact = true;
    std::uint64_t samples = 0;
};

/// Monte Carlo hypervolume: uniform samples over the bounding box of the
/// clipped front, counted against box membership.
inline HypervolumeEstimate hypervolume_monte_carlo(const Front& front,
                                                   const ObjectiveVector& reference,
                                                   std::uint64_t samples, std::uint64_t seed) {
    if (front.empty()) {
        throw ContractError("hypervolume of an empty front");
    }
    const auto gains = detail::gains_against_reference(front, reference);
    if (gains.empty()) {
        return {0.0, 0.0, false, samples};
    }
    const std::size_t m = gains.front().size();
    std::vector<double> upper(m, 0.0);
    for (const auto& g : gains) {
        for (std::size_t k = 0; k < m; ++k) {
            upper[k] = std::max(upper[k], g[k]);
        }
    }
    double box = 1.0;
    for (double u : upper) {
        box *= u;
    }
    if (box <= 0.0) {
        return {0.0, 0.0, false, samples};
    }

    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x(m);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (std::size_t k = 0; k < m; ++k) {
            x[k] = unit(rng) * upper[k];
        }
        for (const auto& g : gains) {
            bool inside = true;
            for (std::size_t k = 0; k < m; ++k) {
                if (x[k] > g[k]) {
                    inside = false;
                    break;
                }
            }
            if (inside) {
                ++hits;
                break;
            }
        }
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    HypervolumeEstimate est;
    est.value = p * box;
    est.std_error = box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    est.exact = false;
    est.samples = samples;
    return est;
}

inline constexpr std::size_t kHypervolumeExactLimit = 500;
inline constexpr std::uint64_t kHypervolumeFallbackSamples = 1'000'000;

/// Exact hypervolume, except for five-objective fronts beyond
/// `kHypervolumeExactLimit` points where a labeled Monte Carlo estimate
/// stands in.
inline HypervolumeEstimate hypervolume_auto(const Front& front, const ObjectiveVector& reference,
                                            std::uint64_t mc_seed = 0x9e3779b97f4a7c15ULL) {
    const std::size_t m = front.empty() ? 0 : front.solutions.front().objectives.scores.size();
    if (m == 5 && front.size() > kHypervolumeExactLimit) {
        return hypervolume_monte_carlo(front, reference, kHypervolumeFallbackSamples, mc_seed);
    }
    return {hypervolume(front, reference), 0.0, true, 0};
}

/// IGD+: mean over reference-front points of the modified distance
/// d+(a, z) = sqrt(sum_k max(z_k - a_k, 0)^2) to the nearest front point
/// (written here in maximization coordinates).
inline double igd_plus(const Front& front, const Front& reference_front) {
    if (front.empty() || reference_front.empty()) {
        throw ContractError("IGD+ needs nonempty fronts");
    }
    const std::size_t m = front.solutions.front().objectives.scores.size();
    const auto& fset = front.solutions.front().objectives.set;
    const auto& rset = reference_front.solutions.front().objectives.set;
    if (!fset.empty() && !rset.empty() && fset != rset) {
        throw ContractError("IGD+ between mismatched objective sets");
    }
    if (reference_front.solutions.front().objectives.scores.size() != m) {
        throw ContractError("IGD+ between mismatched objective dimensions");
    }
    double total = 0.0;
    for (const auto& z : reference_front.solutions) {
        double best = std::numeric_limits<double>::max();
        for (const auto& a : front.solutions) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double gap = std::max(z.objectives.scores[k] - a.objectives.scores[k], 0.0);
                d2 += gap * gap;
            }
            best = std::min(best, d2);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference_front.size());
}

struct KruskalWallisResult {
    double h = 0.0;
    double p_value = 1.0;
};

/// Kruskal-Wallis rank test with average ranks and tie correction; the
/// p-value comes from the chi-squared survival function with k-1 degrees of
/// freedom. All-identical data yields H = 0, p = 1.
inline KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) {
        throw ContractError("Kruskal-Wallis needs at least two groups");
    }
    std::size_t n = 0;
    for (const auto& g : groups) {
        if (g.empty()) {
            throw ContractError("Kruskal-Wallis group is empty");
        }
        n += g.size();
    }
    if (n < 3) {
        throw ContractError("Kruskal-Wallis needs at least three observations");
    }

    std::vector<std::pair<double, std::size_t>> pooled; // (value, group)
    pooled.reserve(n);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (double v : groups[g]) {
            pooled.push_back({v, g});
        }
    }
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<double> rank_sum(groups.size(), 0.0);
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) {
            ++j;
        }
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j); // mean of ranks i+1..j
        const auto t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        for (std::size_t k = i; k < j; ++k) {
            rank_sum[pooled[k].second] += avg_rank;
        }
        i = j;
    }

    const auto dn = static_cast<double>(n);
    double h = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        h += rank_sum[g] * rank_sum[g] / static_cast<double>(groups[g].size());
    }
    h = 12.0 / (dn * (dn + 1.0)) * h - 3.0 * (dn + 1.0);

    const double correction = 1.0 - tie_term / (dn * dn * dn - dn);
    if (correction <= 0.0) {
        return {0.0, 1.0}; // every observation equal
    }
    h /= correction;
    if (h <= 0.0) {
        return {0.0, 1.0};
    }

    const auto df = static_cast<double>(groups.size() - 1);
    const double p = boost::math::gamma_q(df / 2.0, h / 2.0);
    return {h, p};
}

/// Per-run indicator values for one algorithm's batch of runs.
struct IndicatorBatch {
    std::string algorithm;
    std::vector<double> hypervolume;
    std::vector<double> igd_plus;
    std::vector<std::uint64_t> run_seeds;
};

struct AlgorithmSummary {
    std::string algorithm;
    double mean = 0.0;
    double std_dev = 0.0;
    double max = 0.0;
    bool best = false;         // best mean for this indicator
    bool tied_with_best = false; // Kruskal-Wallis p > alpha against the best
    double p_value = 1.0;      // 1 for the best algorithm itself
};

struct ComparisonTable {
    std::vector<AlgorithmSummary> hypervolume; // higher mean is better
    std::vector<AlgorithmSummary> igd_plus;    // lower mean is better
    double alpha = 0.01;
};

namespace detail {

inline AlgorithmSummary summarize(const std::string& name, const std::vector<double>& values) {
    AlgorithmSummary s;
    s.algorithm = name;
    const auto n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - s.mean) * (v - s.mean);
    }
    s.std_dev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.max = *std::max_element(values.begin(), values.end());
    return s;
}

inline void mark_best_and_ties(std::vector<AlgorithmSummary>& table,
                               const std::vector<const std::vector<double>*>& samples,
                               bool higher_is_better, double alpha) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < table.size(); ++i) {
        const bool improves =
            higher_is_better ? table[i].mean > table[best].mean : table[i].mean < table[best].mean;
        if (improves) {
            best = i;
        }
    }
    table[best].best = true;
    table[best].tied_with_best = true;
    table[best].p_value = 1.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (i == best) {
            continue;
        }
        if (samples[best]->size() + samples[i]->size() < 3) {
            // too few observations for a rank test: tie only on exact equality
            const bool equal = *samples[best] == *samples[i];
            table[i].p_value = equal ? 1.0 : 0.0;
            table[i].tied_with_best = equal;
            continue;
        }
        const auto result = kruskal_wallis({*samples[best], *samples[i]});
        table[i].p_value = result.p_value;
        table[i].tied_with_best = result.p_value > alpha;
    }
}

} // namespace detail

/// Mean/std/max per algorithm and indicator, with the best-mean algorithm
/// marked and every other algorithm tested for a statistical tie against it
/// (pairwise Kruskal-Wallis at significance `alpha`).
inline ComparisonTable compare_algorithms(const std::vector<IndicatorBatch>& batches,
                                          double alpha = 0.01) {
    if (batches.size() < 2) {
        throw ContractError("algorithm comparison needs at least two batches");
    }
    const std::size_t runs = batches.front().hypervolume.size();
    for (const auto& b : batches) {
        if (b.hypervolume.size() != runs || b.igd_plus.size() != runs || runs == 0) {
            throw ContractError("algorithm batches must have equal, nonzero run counts");
        }
    }
    ComparisonTable table;
    table.alpha = alpha;
    std::vector<const std::vector<double>*> hv_samples;
    std::vector<const std::vector<double>*> igd_samples;
    for (const auto& b : batches) {
        table.hypervolume.push_back(detail::summarize(b.algorithm, b.hypervolume));
        table.igd_plus.push_back(detail::summarize(b.algorithm, b.igd_plus));
        hv_samples.push_back(&b.hypervolume);
        igd_samples.push_back(&b.igd_plus);
    }
    detail::mark_best_and_ties(table.hypervolume, hv_samples, true, alpha);
    detail::mark_best_and_ties(table.igd_plus, igd_samples, false, alpha);
    return table;
}

} // namespace normopt
