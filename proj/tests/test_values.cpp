#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "normopt/values.hpp"

using namespace normopt;

namespace {

// Independent oracle: Gini by direct double loop over ordered pairs.
double gini_bruteforce(const std::vector<double>& w) {
    double acc = 0.0;
    double mean = 0.0;
    for (double x : w) {
        mean += x;
    }
    mean /= static_cast<double>(w.size());
    for (double a : w) {
        for (double b : w) {
            acc += std::abs(a - b);
        }
    }
    return acc / (2.0 * static_cast<double>(w.size()) * static_cast<double>(w.size()) * mean);
}

Society society_with(std::vector<double> wealths, std::vector<bool> evaders,
                     std::size_t groups = 5) {
    std::vector<Citizen> citizens(wealths.size());
    for (std::size_t i = 0; i < wealths.size(); ++i) {
        citizens[i].wealth = wealths[i];
        citizens[i].primary_wealth = wealths[i];
        citizens[i].evader = i < evaders.size() && evaders[i];
    }
    return Society(std::move(citizens), groups, 0.05, 0);
}

} // namespace

TEST_CASE("gini frozen values") {
    CHECK(gini(std::vector<double>{5, 5, 5, 5}) == 0.0);
    CHECK(gini(std::vector<double>{0, 10}) == Catch::Approx(0.5).margin(1e-12));
    CHECK(gini(std::vector<double>{1, 2, 3}) == Catch::Approx(8.0 / 36.0).margin(1e-12));
}

TEST_CASE("gini agrees with the pairwise oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> w(1 + trial % 40);
        for (auto& x : w) {
            x = u(rng);
        }
        CHECK(gini(w) == Catch::Approx(gini_bruteforce(w)).margin(1e-10));
    }
}

TEST_CASE("gini rejects degenerate input") {
    CHECK_THROWS_AS(gini(std::vector<double>{}), ContractError);
    CHECK_THROWS_AS(gini(std::vector<double>{0, 0, 0}), DegenerateStateError);
}

TEST_CASE("equality frozen values") {
    CHECK(equality(society_with({7, 7, 7, 7, 7}, {})) == Catch::Approx(1.0));
    CHECK(equality(society_with({0, 10}, {}, 2)) == Catch::Approx(0.0).margin(1e-12));
    CHECK(equality(society_with({1, 2, 3}, {}, 3)) ==
          Catch::Approx(1.0 - 16.0 / 36.0).margin(1e-12));
}

TEST_CASE("equality is scale invariant") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 50.0);
    std::vector<double> w(20);
    for (auto& x : w) {
        x = u(rng);
    }
    const double base = equality(society_with(w, {}, 5));
    for (double c : {0.5, 2.0, 17.0}) {
        std::vector<double> scaled = w;
        for (auto& x : scaled) {
            x *= c;
        }
        CHECK(equality(society_with(scaled, {}, 5)) == Catch::Approx(base).margin(1e-9));
    }
}

TEST_CASE("fairness cases") {
    // 10 citizens, 5 groups of 2; wealth fixes the groups.
    std::vector<double> w = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    SECTION("all evaders in the poorest group") {
        std::vector<bool> e(10, false);
        e[0] = e[1] = true; // the two poorest
        CHECK(fairness(society_with(w, e)) == 1.0);
    }
    SECTION("evaders spread evenly over the groups") {
        std::vector<bool> e(10, false);
        e[0] = e[2] = e[4] = e[6] = e[8] = true; // one per group
        CHECK(fairness(society_with(w, e)) == Catch::Approx(2.0 * 0.2 - 1.0).margin(1e-12));
    }
    SECTION("no evaders is neutral") {
        CHECK(fairness(society_with(w, {})) == 0.0);
    }
    SECTION("relabeling citizens changes nothing") {
        std::vector<bool> e = {true, false, true, false, false, false, false, false, false, false};
        const double base = fairness(society_with(w, e));
        // rotate both vectors by 3
        std::rotate(w.begin(), w.begin() + 3, w.end());
        std::vector<bool> e2 = e;
        std::rotate(e2.begin(), e2.begin() + 3, e2.end());
        CHECK(fairness(society_with(w, e2)) == base);
    }
}

TEST_CASE("wealth share cases") {
    SECTION("all equal wealth gives a fifth") {
        CHECK(wealth_share(society_with({3, 3, 3, 3, 3}, {})) == Catch::Approx(0.2));
    }
    SECTION("top group owns everything") {
        CHECK(wealth_share(society_with({0, 0, 0, 0, 9}, {})) == Catch::Approx(1.0));
    }
    SECTION("zero total wealth errors") {
        CHECK_THROWS_AS(wealth_share(society_with({0, 0, 0, 0, 0}, {})), DegenerateStateError);
    }
}

TEST_CASE("gained amount cases") {
    // groups of one: citizen 3 (wealth 4) is in g4.
    std::vector<Citizen> citizens(5);
    for (std::size_t i = 0; i < 5; ++i) {
        citizens[i].wealth = static_cast<double>(i + 1);
        citizens[i].primary_wealth = static_cast<double>(i + 1);
    }
    SECTION("no change in g4 gives zero") {
        const Society s(citizens, 5, 0.05, 0);
        CHECK(gained_amount(s, 10.0) == 0.0);
    }
    SECTION("g4 gained exactly the pool") {
        citizens[3].primary_wealth = citizens[3].wealth - 10.0;
        const Society s(citizens, 5, 0.05, 0);
        CHECK(gained_amount(s, 10.0) == Catch::Approx(1.0));
    }
    SECTION("the ratio may exceed one and is not clamped") {
        citizens[3].primary_wealth = citizens[3].wealth - 10.5;
        const Society s(citizens, 5, 0.05, 0);
        CHECK(gained_amount(s, 10.0) == Catch::Approx(1.05));
    }
    SECTION("zero pool yields zero") {
        const Society s(citizens, 5, 0.05, 0);
        CHECK(gained_amount(s, 0.0) == 0.0);
    }
}

TEST_CASE("collect portion cases") {
    NormVector n;
    n.redistribute = {0.2, 0.2, 0.2, 0.2, 0.2};
    n.collect[0] = 0.0;
    CHECK(collect_portion(n) == 1.0);
    n.collect[0] = 0.7054;
    CHECK(collect_portion(n) == Catch::Approx(0.2946));
    n.collect[0] = 1.0;
    CHECK(collect_portion(n) == 0.0);
}

TEST_CASE("evaluate with one sample equals the single-path computation") {
    SimulationConfig cfg;
    NormVector n;
    n.collect = {0.1, 0.2, 0.3, 0.4, 0.5};
    n.redistribute = {0.2, 0.2, 0.2, 0.2, 0.2};
    n.catch_rate = 0.4;
    n.fine_rate = 0.5;
    const auto set = five_objective_set();
    const ObjectiveVector mean = evaluate(n, cfg, set, 1, 99);
    const ObjectiveVector single = evaluate_single(n, cfg, set, derive_sample_seed(99, 0));
    CHECK(mean.scores == single.scores);
}

TEST_CASE("evaluate is deterministic") {
    SimulationConfig cfg;
    NormVector n;
    n.collect = {0.3, 0.3, 0.3, 0.3, 0.3};
    n.redistribute = {0.4, 0.3, 0.1, 0.1, 0.1};
    n.catch_rate = 0.2;
    n.fine_rate = 0.9;
    const auto set = two_objective_set();
    const auto a = evaluate(n, cfg, set, 16, 123);
    const auto b = evaluate(n, cfg, set, 16, 123);
    CHECK(a.scores == b.scores);
}

TEST_CASE("a k-sample mean equals the mean of k single-sample evaluations") {
    SimulationConfig cfg;
    cfg.num_agents = 50;
    NormVector n;
    n.collect = {0.2, 0.2, 0.2, 0.2, 0.2};
    n.redistribute = {0.2, 0.2, 0.2, 0.2, 0.2};
    n.catch_rate = 0.25;
    n.fine_rate = 0.5;
    const auto set = five_objective_set();
    const std::size_t k = 8;
    const ObjectiveVector mean = evaluate(n, cfg, set, k, 7);

    std::vector<double> sums(set.size(), 0.0);
    for (std::size_t s = 0; s < k; ++s) {
        const auto one = evaluate_single(n, cfg, set, derive_sample_seed(7, s));
        for (std::size_t i = 0; i < sums.size(); ++i) {
            sums[i] += one.scores[i];
        }
    }
    for (std::size_t i = 0; i < sums.size(); ++i) {
        CHECK(mean.scores[i] == Catch::Approx(sums[i] / k).margin(1e-12));
    }
}

TEST_CASE("zero taxes, no evaders: equality equals the initial distribution's") {
    SimulationConfig cfg;
    cfg.evader_probability = 0.0;
    NormVector n;
    n.redistribute = {0.2, 0.2, 0.2, 0.2, 0.2}; // collect stays all-zero
    const std::uint64_t seed = derive_sample_seed(4242, 0);
    const ObjectiveVector v = evaluate(n, cfg, two_objective_set(), 1, 4242);

    // Direct evaluation of the Gini formula on the untouched initial state.
    const Society initial(cfg, seed);
    std::vector<double> w;
    for (const auto& c : initial.citizens()) {
        w.push_back(c.wealth);
    }
    CHECK(v.scores[0] == Catch::Approx(1.0 - 2.0 * gini_bruteforce(w)).margin(1e-12));
    CHECK(v.scores[1] == 0.0); // no evaders
}
