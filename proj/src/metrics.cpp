#include "techrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace techrank {

namespace {

// Average-tie positions of values sorted ascending; ties are groups of
// exactly equal values. Returns half-integers.
std::vector<double> average_rank_ascending(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] < values[b];
        return a < b;
    });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        double rank = static_cast<double>(i + 1 + j + 1) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

Ranking weights_to_ranking(std::vector<std::pair<std::string, double>> weights) {
    for (const auto& [label, weight] : weights) {
        if (!std::isfinite(weight)) {
            throw std::invalid_argument("non-finite weight for '" + label + "'");
        }
    }
    std::sort(weights.begin(), weights.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Ranking ranking;
    ranking.entries.reserve(weights.size());
    std::size_t i = 0;
    while (i < weights.size()) {
        std::size_t j = i;
        while (j + 1 < weights.size() && weights[j + 1].second == weights[i].second) ++j;
        double rank = static_cast<double>(i + 1 + j + 1) / 2.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranking.entries.push_back({std::move(weights[k].first), weights[k].second, rank});
        }
        i = j + 1;
    }
    return ranking;
}

Correlation spearman_ranks(std::span<const std::pair<std::string, double>> a,
                           std::span<const std::pair<std::string, double>> b) {
    std::unordered_map<std::string, double> b_ranks;
    b_ranks.reserve(b.size());
    for (const auto& [label, rank] : b) {
        if (!b_ranks.emplace(label, rank).second) {
            throw std::invalid_argument("duplicate label '" + label + "' in second ranking");
        }
    }

    std::vector<double> a_common;
    std::vector<double> b_common;
    {
        std::unordered_map<std::string, bool> a_seen;
        a_seen.reserve(a.size());
        for (const auto& [label, rank] : a) {
            if (!a_seen.emplace(label, true).second) {
                throw std::invalid_argument("duplicate label '" + label + "' in first ranking");
            }
            auto it = b_ranks.find(label);
            if (it == b_ranks.end()) continue;
            a_common.push_back(rank);
            b_common.push_back(it->second);
        }
    }

    Correlation correlation;
    correlation.n_common = a_common.size();
    correlation.only_in_first = a.size() - correlation.n_common;
    correlation.only_in_second = b.size() - correlation.n_common;
    if (correlation.n_common < 2) {
        throw InsufficientOverlapError("rankings share " +
                                       std::to_string(correlation.n_common) +
                                       " entities, need at least 2");
    }

    // re-rank within the intersection so rho is a proper Spearman even
    // when one side arrives with gaps
    std::vector<double> ra = average_rank_ascending(a_common);
    std::vector<double> rb = average_rank_ascending(b_common);

    const std::size_t n = ra.size();
    const double mean = static_cast<double>(n + 1) / 2.0;  // ranks sum to n(n+1)/2
    double cross = 0.0;
    double var_a = 0.0;
    double var_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double da = ra[i] - mean;
        double db = rb[i] - mean;
        cross += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) {
        throw ZeroVarianceError("a rank vector is constant over the intersection");
    }
    double rho = cross / std::sqrt(var_a * var_b);
    correlation.rho = std::clamp(rho, -1.0, 1.0);
    return correlation;
}

Correlation spearman(const Ranking& a, const Ranking& b) {
    std::vector<std::pair<std::string, double>> ra;
    ra.reserve(a.entries.size());
    for (const RankedEntity& e : a.entries) ra.emplace_back(e.label, e.rank);
    std::vector<std::pair<std::string, double>> rb;
    rb.reserve(b.entries.size());
    for (const RankedEntity& e : b.entries) rb.emplace_back(e.label, e.rank);
    return spearman_ranks(ra, rb);
}

}  // namespace techrank
