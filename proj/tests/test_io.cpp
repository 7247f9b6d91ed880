#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "normopt/io.hpp"

using namespace normopt;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("normopt_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

Front random_front(std::size_t rows, std::size_t m, std::uint64_t seed, bool named) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Front f;
    for (std::size_t r = 0; r < rows; ++r) {
        Solution s;
        s.genes.resize(kGenomeSize);
        for (auto& g : s.genes) {
            g = u(rng);
        }
        s.objectives.scores.resize(m);
        for (auto& v : s.objectives.scores) {
            v = u(rng) * 2.0 - 1.0;
        }
        if (named) {
            s.objectives.set = m == 2 ? two_objective_set() : five_objective_set();
        }
        f.solutions.push_back(std::move(s));
    }
    return f;
}

} // namespace

TEST_CASE("format_double round-trips exactly") {
    Rng rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 10000; ++i) {
        const double v = u(rng) * std::pow(10.0, i % 13 - 6);
        const double back = parse_double(format_double(v));
        REQUIRE(back == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("front CSV round-trips bit for bit") {
    for (const bool named : {true, false}) {
        for (const std::size_t m : {std::size_t{2}, std::size_t{5}}) {
            const Front f = random_front(7, m, 99 + m, named);
            const std::string csv = front_to_csv(f);
            const Front back = front_from_csv(csv, "test");
            REQUIRE(back.size() == f.size());
            for (std::size_t i = 0; i < f.size(); ++i) {
                REQUIRE(back.solutions[i].genes == f.solutions[i].genes);
                REQUIRE(back.solutions[i].objectives.scores == f.solutions[i].objectives.scores);
                REQUIRE(back.solutions[i].objectives.set == f.solutions[i].objectives.set);
            }
            // serialization is stable
            REQUIRE(front_to_csv(back) == csv);
        }
    }
}

TEST_CASE("front CSV schema violations carry the path context") {
    CHECK_THROWS_WITH(front_from_csv("", "ctx"), Catch::Matchers::ContainsSubstring("ctx"));
    CHECK_THROWS_WITH(front_from_csv("a,b\n1,2\n", "ctx"),
                      Catch::Matchers::ContainsSubstring("genome"));
    const Front f = random_front(2, 2, 5, true);
    std::string csv = front_to_csv(f);
    csv += "1,2,3\n"; // truncated row
    CHECK_THROWS_WITH(front_from_csv(csv, "ctx"), Catch::Matchers::ContainsSubstring("row"));
}

TEST_CASE("norms JSON parses and validates") {
    const json good = {{"collect", {0.1, 0.2, 0.3, 0.4, 0.5}},
                       {"redistribute", {0.2, 0.2, 0.2, 0.2, 0.2}},
                       {"catch", 0.3},
                       {"fine", 0.9}};
    const NormVector n = norms_from_json(good, "ctx");
    CHECK(n.collect[4] == 0.5);
    CHECK(n.catch_rate == 0.3);

    json bad = good;
    bad["catch"] = 0.7; // above the 1/2 bound
    CHECK_THROWS_WITH(norms_from_json(bad, "ctx"), Catch::Matchers::ContainsSubstring("catch"));

    json malformed = good;
    malformed.erase("fine");
    CHECK_THROWS_AS(norms_from_json(malformed, "ctx"), IoError);
}

TEST_CASE("society snapshots carry the documented fields") {
    SimulationConfig cfg;
    cfg.num_agents = 10;
    const Society s(cfg, 3);
    const json j = society_to_json(s);
    REQUIRE(j.at("citizens").size() == 10);
    for (const auto& c : j.at("citizens")) {
        REQUIRE(c.contains("wealth"));
        REQUIRE(c.contains("primary_wealth"));
        REQUIRE(c.contains("group"));
        REQUIRE(c.contains("evader"));
    }
    CHECK(j.at("num_groups") == 5);
    CHECK(j.at("interest_rate") == 0.05);
    CHECK(j.contains("last_pool"));
    CHECK(j.contains("total_wealth"));
}

TEST_CASE("objective vectors serialize to CSV and JSON") {
    ObjectiveVector v{{0.5, -0.25}, two_objective_set()};
    CHECK(objectives_to_csv(v) == "Equality,Fairness\n0.5,-0.25\n");
    const json j = objective_vector_to_json(v);
    CHECK(j.at("Equality") == 0.5);
    CHECK(j.at("Fairness") == -0.25);
}

TEST_CASE("indicator CSV round-trips") {
    std::vector<IndicatorBatch> batches;
    batches.push_back(IndicatorBatch{"nsga2", {0.5, 0.25}, {0.1, 0.2}, {}});
    batches.push_back(IndicatorBatch{"spea2", {0.4, 0.3}, {0.3, 0.4}, {}});
    const std::string csv = indicator_csv(batches);
    const auto back = indicator_batches_from_csv(csv, "ctx");
    REQUIRE(back.size() == 2);
    CHECK(back[0].algorithm == "nsga2");
    CHECK(back[0].hypervolume == std::vector<double>{0.5, 0.25});
    CHECK(back[1].igd_plus == std::vector<double>{0.3, 0.4});
}

TEST_CASE("atomic_write leaves no temporaries behind") {
    TempDir tmp;
    const fs::path target = tmp.path / "nested" / "file.txt";
    atomic_write(target, "payload");
    CHECK(read_file(target) == "payload");
    std::size_t entries = 0;
    for (const auto& e : fs::directory_iterator(target.parent_path())) {
        (void)e;
        ++entries;
    }
    CHECK(entries == 1);

    // overwrite in place
    atomic_write(target, "second");
    CHECK(read_file(target) == "second");
}

TEST_CASE("election reports include the winner, tally and seed") {
    Front f = random_front(3, 2, 11, true);
    for (auto& s : f.solutions) {
        repair_genes(s.genes); // make genomes valid norm vectors
    }
    const auto voters = make_voters(10, 5);
    const auto result = main_reasoner(voters, f.solutions);
    const json report = election_to_json(result, 5, 10, VoteMode::weighted, false);
    CHECK(report.at("voters") == 10);
    CHECK(report.at("voter_seed") == 5);
    CHECK(report.at("mode") == "weighted");
    CHECK(report.at("tally").size() == 3);
    CHECK(report.at("winner").contains("norms"));
    CHECK(report.at("winner").contains("objectives"));
}
