#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "fairtopk/sampling.hpp"

namespace fairtopk {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

// shortest decimal form that parses back to the same double
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

// Parsed ranking file: rows in file order, optional utility scores.
struct RankingTable {
    std::vector<std::string> ids;
    std::vector<std::uint8_t> groups;
    std::vector<double> scores;
    bool has_scores = false;

    std::int64_t rows() const { return static_cast<std::int64_t>(ids.size()); }

    Ranking to_ranking() const { return Ranking{groups, ids}; }

    PopulationSpec population() const {
        const auto np = std::accumulate(groups.begin(), groups.end(), std::int64_t{0});
        return PopulationSpec{rows(), np};
    }
};

enum class RowOrder { as_given, by_score };

// Header must be exactly `id,group` or `id,group,score`. Fields are trimmed;
// quoting is not supported, so ids must not contain commas. Errors carry
// `<source>:<row>:` prefixes with 1-based row numbers (header is row 1).
inline RankingTable parse_ranking_csv(std::istream& in, const std::string& source) {
    auto fail = [&](std::int64_t row, const std::string& msg) -> void {
        throw std::runtime_error(source + ":" + std::to_string(row) + ": " + msg);
    };

    RankingTable table;
    std::string line;
    std::int64_t row = 0;
    bool saw_header = false;
    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_fields(line);
        if (!saw_header) {
            if (fields.size() == 2 && fields[0] == "id" && fields[1] == "group") {
                table.has_scores = false;
            } else if (fields.size() == 3 && fields[0] == "id" && fields[1] == "group" &&
                       fields[2] == "score") {
                table.has_scores = true;
            } else {
                fail(row, "expected header 'id,group' or 'id,group,score'");
            }
            saw_header = true;
            continue;
        }
        const std::size_t want = table.has_scores ? 3 : 2;
        if (fields.size() != want)
            fail(row, "expected " + std::to_string(want) + " fields, got " +
                          std::to_string(fields.size()));
        if (fields[0].empty()) fail(row, "empty id");
        std::string id(fields[0]);
        if (!seen.insert(id).second) fail(row, "duplicate id '" + id + "'");
        std::uint8_t g = 0;
        if (fields[1] == "0") {
            g = 0;
        } else if (fields[1] == "1") {
            g = 1;
        } else {
            fail(row, "group must be 0 or 1, got '" + std::string(fields[1]) + "'");
        }
        double score = 0.0;
        if (table.has_scores) {
            const auto* b = fields[2].data();
            const auto* e = b + fields[2].size();
            const auto res = std::from_chars(b, e, score);
            if (res.ec != std::errc{} || res.ptr != e || !std::isfinite(score))
                fail(row, "unparseable score '" + std::string(fields[2]) + "'");
        }
        table.ids.push_back(std::move(id));
        table.groups.push_back(g);
        if (table.has_scores) table.scores.push_back(score);
    }
    if (!saw_header) throw std::runtime_error(source + ":1: missing header row");
    return table;
}

// Row order for auditing: as_given keeps file order; by_score sorts by
// descending score with file order breaking ties (stable).
inline RankingTable apply_order(RankingTable table, RowOrder order, const std::string& source) {
    if (order == RowOrder::as_given) return table;
    if (!table.has_scores)
        throw std::runtime_error(source + ": ordering by score requires a score column");
    std::vector<std::size_t> idx(table.ids.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return table.scores[a] > table.scores[b];
    });
    RankingTable sorted;
    sorted.has_scores = true;
    sorted.ids.reserve(idx.size());
    sorted.groups.reserve(idx.size());
    sorted.scores.reserve(idx.size());
    for (const auto i : idx) {
        sorted.ids.push_back(std::move(table.ids[i]));
        sorted.groups.push_back(table.groups[i]);
        sorted.scores.push_back(table.scores[i]);
    }
    return sorted;
}

// Writes rows in table order, or in `permutation` order when given
// (permutation[pos] = source row for output position pos).
inline void write_ranking_csv(std::ostream& out, const RankingTable& table,
                              const std::vector<std::int64_t>* permutation = nullptr) {
    if (permutation && permutation->size() != table.ids.size())
        throw std::invalid_argument("write_ranking_csv: permutation size " +
                                    std::to_string(permutation->size()) + " != row count " +
                                    std::to_string(table.ids.size()));
    out << (table.has_scores ? "id,group,score\n" : "id,group\n");
    for (std::size_t pos = 0; pos < table.ids.size(); ++pos) {
        const auto i = permutation ? static_cast<std::size_t>((*permutation)[pos]) : pos;
        const auto& id = table.ids[i];
        if (id.find_first_of(",\n\r") != std::string::npos)
            throw std::invalid_argument("write_ranking_csv: id '" + id +
                                        "' contains a delimiter character");
        out << id << ',' << static_cast<int>(table.groups[i]);
        if (table.has_scores) out << ',' << detail::format_double(table.scores[i]);
        out << '\n';
    }
}

}  // namespace fairtopk
