#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "techrank/graph.hpp"

namespace techrank {

// Degree-bias exponents of the two jump operators. Negative values are
// allowed; both must be finite.
struct Exponents {
    double alpha = 0.0;
    double beta = 0.0;
};

struct RunConfig {
    Exponents exponents{};
    double tolerance = 1e-9;
    std::size_t rank_stability_window = 10;
    std::size_t max_iterations = 10000;
};

/// The two stochastic jump operators, stored over the support of the
/// adjacency in the orientation each update consumes.
///
/// beta_values[e] is the probability of jumping from technology
/// company_techs[e] to the company owning entry e: per technology these
/// sum to 1. alpha_values[e] is the probability of jumping from the
/// company tech_companies[e] to the technology owning entry e: per company
/// these sum to 1. All entries lie in (0, 1].
struct TransitionPair {
    // company-major: technologies of company c are
    // company_techs[company_offsets[c] .. company_offsets[c+1]), ascending
    std::vector<std::size_t> company_offsets;
    std::vector<std::uint32_t> company_techs;
    std::vector<double> beta_values;
    // technology-major: companies of technology t, ascending
    std::vector<std::size_t> tech_offsets;
    std::vector<std::uint32_t> tech_companies;
    std::vector<double> alpha_values;

    std::size_t company_count() const noexcept { return company_offsets.size() - 1; }
    std::size_t technology_count() const noexcept { return tech_offsets.size() - 1; }
    std::size_t edge_count() const noexcept { return company_techs.size(); }
};

// Per-layer weight vectors at some iteration. Both sum to 1 after every
// normalization.
struct RankState {
    std::vector<double> company_weights;
    std::vector<double> technology_weights;
    std::size_t iteration = 0;
};

struct TraceRow {
    std::size_t iteration;  // 1-based
    double delta_companies;
    double delta_technologies;
    // consecutive iterations (incl. this one) in which no pair of
    // entities separated by at least the tolerance swapped order
    std::size_t rank_stable_streak;
};

using ConvergenceTrace = std::vector<TraceRow>;

enum class RunStatus { Converged, MaxIterations, Failed };

struct RunResult {
    RankState state;
    ConvergenceTrace trace;
    RunStatus status;
};

using IterationObserver = std::function<void(const RankState&)>;

// Degree-proportional start: each layer's degrees normalized to sum 1.
// Requires a pruned graph.
RankState initial_weights(const BipartiteGraph& g);

/// Builds both operators from the degree powers k^(-beta) / k^(-alpha)
/// with per-technology resp. per-company normalization. Throws
/// NumericalOverflowError when a power or a normalizer leaves (0, inf).
TransitionPair build_transitions(const BipartiteGraph& g, Exponents exponents);

/// One synchronous update: company weights are refreshed from the input
/// state's technology weights through the beta operator and vice versa
/// through the alpha operator; each layer is renormalized to sum 1.
/// Summation order is ascending node index throughout.
RankState step(const RankState& state, const TransitionPair& transitions);

/// Iterates `step` until the largest per-layer weight change drops below
/// cfg.tolerance AND the rank order of both layers has been stable for
/// cfg.rank_stability_window consecutive iterations, or the iteration cap
/// is hit. An iteration counts as rank-stable when no pair of entities
/// whose weights differ by at least the tolerance (in either iteration)
/// swaps order; sub-tolerance pairs are indistinguishable at the run's
/// resolution, and structurally symmetric nodes keep exactly equal true
/// weights whose float images swap at ulp scale indefinitely. The trace
/// records every iteration performed. The observer, when set, sees each
/// new state.
RunResult run_to_convergence(const BipartiteGraph& g, const RunConfig& cfg,
                             const IterationObserver& on_iteration = {});

struct SweepCell {
    double alpha;
    double beta;
    RunStatus status;
    std::size_t iterations;
    RankState state;  // empty when status == Failed
};

/// One full run per (alpha, beta) pair, alpha-major order. Cells are
/// independent; a NumericalOverflowError marks its cell Failed and the
/// sweep continues.
std::vector<SweepCell> sweep(const BipartiteGraph& g,
                             std::span<const double> alphas,
                             std::span<const double> betas,
                             const RunConfig& cfg);

// Largest |column sum - 1| of the beta operator over technologies.
double max_beta_column_sum_error(const TransitionPair& transitions);
// Largest |row sum - 1| of the alpha operator over companies.
double max_alpha_row_sum_error(const TransitionPair& transitions);

}  // namespace techrank
