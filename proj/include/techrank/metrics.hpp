#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "techrank/errors.hpp"

namespace techrank {

struct RankedEntity {
    std::string label;
    double weight;
    double rank;  // fractional under ties
};

// Entries sorted by weight descending; equal weights share the average of
// the positions they span and are listed lexicographically. Ranks sum to
// n(n+1)/2.
struct Ranking {
    std::vector<RankedEntity> entries;
};

// Requires finite weights; input order does not matter.
Ranking weights_to_ranking(std::vector<std::pair<std::string, double>> weights);

struct Correlation {
    double rho;  // in [-1, 1]
    std::size_t n_common;
    std::size_t only_in_first;
    std::size_t only_in_second;
};

/// Spearman's rho over the label intersection: both sides are re-ranked
/// within the intersection (average ties) and rho is the Pearson
/// correlation of those rank vectors, which stays exact under ties.
/// Throws InsufficientOverlapError (fewer than 2 shared labels) and
/// ZeroVarianceError (one side all tied).
Correlation spearman(const Ranking& a, const Ranking& b);

// Same computation on raw (label, rank) pairs, smaller rank = better.
Correlation spearman_ranks(std::span<const std::pair<std::string, double>> a,
                           std::span<const std::pair<std::string, double>> b);

}  // namespace techrank
