#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "normopt/error.hpp"
#include "normopt/indicators.hpp"
#include "normopt/moea/evolve.hpp"
#include "normopt/norms.hpp"
#include "normopt/reasoner.hpp"
#include "normopt/society.hpp"
#include "normopt/values.hpp"

namespace normopt {

using json = nlohmann::json;

/// Shortest round-tripping decimal form of a double; identical values always
/// format identically, which keeps repeated runs byte-identical on disk.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw IoError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

/// Write-then-rename so concurrent writers never expose partial files.
inline void atomic_write(const std::filesystem::path& path, std::string_view contents) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out << contents;
        if (!out) {
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                      ec.message());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

/// Front CSV: a header row, then one row per solution with the 12 genome
/// columns followed by one column per objective.
inline std::string front_to_csv(const Front& front) {
    std::ostringstream out;
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        out << gene_name(i) << ',';
    }
    if (front.empty()) {
        throw ContractError("refusing to serialize an empty front");
    }
    const auto& set = front.solutions.front().objectives.set;
    const std::size_t m = front.solutions.front().objectives.scores.size();
    for (std::size_t k = 0; k < m; ++k) {
        out << (set.empty() ? "obj" + std::to_string(k + 1)
                            : std::string(objective_name(set[k])));
        out << (k + 1 < m ? ',' : '\n');
    }
    for (const auto& s : front.solutions) {
        if (s.genes.size() != kGenomeSize || s.objectives.scores.size() != m) {
            throw ContractError("front row with unexpected dimensions");
        }
        for (double g : s.genes) {
            out << format_double(g) << ',';
        }
        for (std::size_t k = 0; k < m; ++k) {
            out << format_double(s.objectives.scores[k]) << (k + 1 < m ? ',' : '\n');
        }
    }
    return out.str();
}

inline void write_front_csv(const std::filesystem::path& path, const Front& front) {
    atomic_write(path, front_to_csv(front));
}

inline Front front_from_csv(const std::string& text, const std::string& context) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(context + ": empty front file");
    }
    const auto header = split_csv_line(line);
    if (header.size() <= kGenomeSize) {
        throw IoError(context + ": header needs " + std::to_string(kGenomeSize) +
                      " genome columns plus objectives");
    }
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        if (header[i] != gene_name(i)) {
            throw IoError(context + ": genome column " + std::to_string(i + 1) + " is '" +
                          header[i] + "', expected '" + gene_name(i) + "'");
        }
    }
    ObjectiveSet set;
    bool named = true;
    for (std::size_t k = kGenomeSize; k < header.size(); ++k) {
        try {
            set.push_back(objective_from_name(header[k]));
        } catch (const ContractError&) {
            named = false;
        }
    }
    if (!named) {
        set.clear();
    }
    const std::size_t m = header.size() - kGenomeSize;

    Front front;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw IoError(context + ": row " + std::to_string(row) + " has " +
                          std::to_string(fields.size()) + " fields, expected " +
                          std::to_string(header.size()));
        }
        Solution s;
        s.genes.resize(kGenomeSize);
        for (std::size_t i = 0; i < kGenomeSize; ++i) {
            s.genes[i] = parse_double(fields[i]);
        }
        s.objectives.set = set;
        s.objectives.scores.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            s.objectives.scores[k] = parse_double(fields[kGenomeSize + k]);
        }
        front.solutions.push_back(std::move(s));
    }
    if (front.empty()) {
        throw IoError(context + ": front has no solutions");
    }
    return front;
}

inline Front read_front_csv(const std::filesystem::path& path) {
    return front_from_csv(read_file(path), path.string());
}

inline json norms_to_json(const NormVector& n) {
    return json{{"collect", n.collect},
                {"redistribute", n.redistribute},
                {"catch", n.catch_rate},
                {"fine", n.fine_rate}};
}

inline NormVector norms_from_json(const json& j, const std::string& context) {
    NormVector n;
    try {
        const auto collect = j.at("collect").get<std::vector<double>>();
        const auto redistribute = j.at("redistribute").get<std::vector<double>>();
        if (collect.size() != kNumGroups || redistribute.size() != kNumGroups) {
            throw IoError(context + ": collect and redistribute need " +
                          std::to_string(kNumGroups) + " entries each");
        }
        std::copy(collect.begin(), collect.end(), n.collect.begin());
        std::copy(redistribute.begin(), redistribute.end(), n.redistribute.begin());
        n.catch_rate = j.at("catch").get<double>();
        n.fine_rate = j.at("fine").get<double>();
    } catch (const json::exception& e) {
        throw IoError(context + ": " + e.what());
    }
    n.validate(); // ConstraintError names the violated bound
    return n;
}

inline NormVector read_norms_json(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    return norms_from_json(j, path.string());
}

/// Society snapshot: citizens with wealth / primary wealth / group / evader
/// flag, plus the scalar state.
inline json society_to_json(const Society& s) {
    json citizens = json::array();
    for (const auto& c : s.citizens()) {
        citizens.push_back(json{{"wealth", c.wealth},
                                {"primary_wealth", c.primary_wealth},
                                {"group", c.group},
                                {"evader", c.evader}});
    }
    return json{{"num_groups", s.num_groups()},
                {"interest_rate", s.interest_rate()},
                {"last_pool", s.last_pool()},
                {"total_wealth", s.total_wealth()},
                {"citizens", std::move(citizens)}};
}

inline json objective_vector_to_json(const ObjectiveVector& v) {
    json out = json::object();
    for (std::size_t k = 0; k < v.scores.size(); ++k) {
        const std::string key = v.set.empty() ? "obj" + std::to_string(k + 1)
                                              : std::string(objective_name(v.set[k]));
        out[key] = v.scores[k];
    }
    return out;
}

/// One CSV row of objective scores under their identifier header.
inline std::string objectives_to_csv(const ObjectiveVector& v) {
    std::ostringstream out;
    for (std::size_t k = 0; k < v.scores.size(); ++k) {
        out << (v.set.empty() ? "obj" + std::to_string(k + 1)
                              : std::string(objective_name(v.set[k])))
            << (k + 1 < v.scores.size() ? ',' : '\n');
    }
    for (std::size_t k = 0; k < v.scores.size(); ++k) {
        out << format_double(v.scores[k]) << (k + 1 < v.scores.size() ? ',' : '\n');
    }
    return out.str();
}

/// Indicator CSV: one row per (run, algorithm) with both indicator values.
inline std::string indicator_csv(const std::vector<IndicatorBatch>& batches) {
    std::ostringstream out;
    out << "run,algorithm,hypervolume,igd_plus\n";
    for (const auto& b : batches) {
        for (std::size_t r = 0; r < b.hypervolume.size(); ++r) {
            out << r << ',' << b.algorithm << ',' << format_double(b.hypervolume[r]) << ','
                << format_double(b.igd_plus[r]) << '\n';
        }
    }
    return out.str();
}

inline std::vector<IndicatorBatch> indicator_batches_from_csv(const std::string& text,
                                                              const std::string& context) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "run,algorithm,hypervolume,igd_plus") {
        throw IoError(context + ": bad indicator CSV header");
    }
    std::vector<IndicatorBatch> batches;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            throw IoError(context + ": bad indicator CSV row '" + line + "'");
        }
        auto it = std::find_if(batches.begin(), batches.end(),
                               [&](const IndicatorBatch& b) { return b.algorithm == fields[1]; });
        if (it == batches.end()) {
            batches.push_back(IndicatorBatch{fields[1], {}, {}, {}});
            it = std::prev(batches.end());
        }
        it->hypervolume.push_back(parse_double(fields[2]));
        it->igd_plus.push_back(parse_double(fields[3]));
    }
    return batches;
}

inline json comparison_to_json(const ComparisonTable& table) {
    auto rows = [](const std::vector<AlgorithmSummary>& summaries) {
        json out = json::array();
        for (const auto& s : summaries) {
            out.push_back(json{{"algorithm", s.algorithm},
                               {"mean", s.mean},
                               {"std", s.std_dev},
                               {"max", s.max},
                               {"best", s.best},
                               {"tied_with_best", s.tied_with_best},
                               {"p_value", s.p_value}});
        }
        return out;
    };
    return json{{"alpha", table.alpha},
                {"hypervolume", rows(table.hypervolume)},
                {"igd_plus", rows(table.igd_plus)}};
}

/// Markdown rendering of the comparison, one mean/std/max block per
/// algorithm and indicator; the best entry is marked and statistical ties
/// with it are bold.
inline std::string comparison_to_markdown(const ComparisonTable& table) {
    std::ostringstream out;
    out << "| Algorithm | Metric | Hypervolume | IGD+ |\n";
    out << "|---|---|---|---|\n";
    auto cell = [](const AlgorithmSummary& s, double v) {
        std::string text = format_double(v);
        if (s.best) {
            text += " (best)";
        } else if (s.tied_with_best) {
            text = "**" + text + "**";
        }
        return text;
    };
    for (std::size_t i = 0; i < table.hypervolume.size(); ++i) {
        const auto& hv = table.hypervolume[i];
        const auto& igd = table.igd_plus[i];
        out << "| " << hv.algorithm << " | mean | " << cell(hv, hv.mean) << " | "
            << cell(igd, igd.mean) << " |\n";
        out << "| | std | " << format_double(hv.std_dev) << " | " << format_double(igd.std_dev)
            << " |\n";
        out << "| | max | " << format_double(hv.max) << " | " << format_double(igd.max)
            << " |\n";
    }
    return out.str();
}

inline json election_to_json(const ElectionResult& result, std::uint64_t voter_seed,
                             std::size_t voter_count, VoteMode mode, bool invert_collect) {
    const NormVector norms = NormVector::from_genes(result.winner.genes);
    return json{{"winner_index", result.winner_index},
                {"winner",
                 json{{"norms", norms_to_json(norms)},
                      {"objectives", objective_vector_to_json(result.winner.objectives)}}},
                {"tally", result.tally},
                {"voters", voter_count},
                {"voter_seed", voter_seed},
                {"mode", mode == VoteMode::weighted ? "weighted" : "literal"},
                {"invert_collect", invert_collect}};
}

} // namespace normopt
