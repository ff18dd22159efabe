#pragma once

// Brute-force reference implementations. They share no code path with the library beyond
// plain data types.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace kgnbr::testing::oracle {

// Sort every unfiltered entity (target included) by score descending, placing tied competitors
// ahead of the target; the rank is the target's 1-based position. -inf targets are unranked.
inline std::optional<std::size_t> sort_rank(const std::vector<std::string>& universe,
                                            const std::unordered_map<std::string, double>& scores,
                                            const std::unordered_set<std::string>& filter,
                                            const std::string& target) {
    auto score = [&](const std::string& e) {
        auto it = scores.find(e);
        return it == scores.end() ? -std::numeric_limits<double>::infinity() : it->second;
    };
    if (std::isinf(score(target))) return std::nullopt;
    std::vector<std::pair<double, int>> rows;  // (score, is_target)
    for (const auto& e : universe) {
        if (e != target && filter.count(e)) continue;
        rows.emplace_back(score(e), e == target ? 1 : 0);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].second) return i + 1;
    return std::nullopt;
}

inline double count_hits(const std::vector<std::optional<std::size_t>>& ranks, std::size_t k) {
    std::size_t n = 0;
    for (const auto& r : ranks)
        if (r.has_value() && r.value() <= k) ++n;
    return static_cast<double>(n) / static_cast<double>(ranks.size());
}

// Full scan, full sort, slice.
inline std::vector<std::size_t> top_k(const std::vector<std::vector<double>>& rows,
                                      const std::vector<double>& q, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double s = 0;
        for (std::size_t d = 0; d < q.size(); ++d) s += rows[i][d] * q[d];
        all.emplace_back(-s, i);
    }
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(all[i].second);
    return out;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    long double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<long double>(a[i]) * b[i];
        na += static_cast<long double>(a[i]) * a[i];
        nb += static_cast<long double>(b[i]) * b[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return static_cast<double>(dot / std::sqrt(na * nb));
}

}  // namespace kgnbr::testing::oracle
