#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace normopt {

using Rng = std::mt19937_64;

/// splitmix64 finalizer. All seed derivation in the library funnels through
/// this so that independent streams never share low-entropy seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
    return mix64(h ^ mix64(v));
}

/// FNV-1a over the bytes of a string (used to fold algorithm names into seeds).
constexpr std::uint64_t hash_string(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed for run `run` of `algorithm` under a batch master seed.
constexpr std::uint64_t derive_run_seed(std::uint64_t master_seed,
                                        std::string_view algorithm,
                                        std::uint64_t run) noexcept {
    return hash_combine(hash_combine(master_seed, hash_string(algorithm)), run);
}

/// Seed for Monte Carlo sample `index` of an evaluation seeded with `seed`.
constexpr std::uint64_t derive_sample_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return hash_combine(seed, index);
}

/// Seed derived from a genome's exact bit pattern. Fixing the simulation
/// stream per genome makes fitness a deterministic function of the genes
/// within one run, so elitism behaves as on a noise-free problem.
inline std::uint64_t hash_genes(std::uint64_t run_seed, std::span<const double> genes) noexcept {
    std::uint64_t h = run_seed;
    for (double g : genes) {
        h = hash_combine(h, std::bit_cast<std::uint64_t>(g));
    }
    return h;
}

} // namespace normopt
