#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "techrank/engine.hpp"
#include "techrank/graph.hpp"

namespace techrank {

// Every (company, technology) pair becomes an edge with this probability.
struct UniformRandomModel {
    double edge_probability = 0.5;
};

// Every company links to exactly company_degree distinct technologies.
struct FixedDegreeModel {
    std::uint32_t company_degree = 1;
};

// Half-open index ranges. A pair inside company and tech range of the same
// block draws with p_in; a pair whose company lies in a block but whose
// technology does not draws with that block's p_out; companies covered by
// no block get no edges. The first matching block in list order wins.
struct BlockSpec {
    std::uint32_t company_begin = 0;
    std::uint32_t company_end = 0;
    std::uint32_t tech_begin = 0;
    std::uint32_t tech_end = 0;
    double p_in = 0.0;
    double p_out = 0.0;
};

struct PlantedBlocksModel {
    std::vector<BlockSpec> blocks;
};

struct GenSpec {
    std::uint32_t n_companies = 0;
    std::uint32_t n_technologies = 0;
    std::variant<UniformRandomModel, FixedDegreeModel, PlantedBlocksModel> model;
    std::uint64_t seed = 0;
};

/// Seeded random bipartite graph, reproducible across platforms.
///
/// RNG pin: std::mt19937_64 seeded with spec.seed; uniform doubles take the
/// top 53 engine bits ((x >> 11) * 2^-53); bounded integers use masked
/// rejection. Pair visiting order is company-major. Standard-library
/// distributions are avoided because their mapping is implementation
/// defined. Degree-0 nodes may occur and are left to prune.
BipartiteGraph generate(const GenSpec& spec);

struct OracleResult {
    RankState state;
    ConvergenceTrace trace;
    RunStatus status;
};

/// Dense brute-force re-implementation of the ranking recursion for engine
/// verification: full matrices, straight loops, no code shared with the
/// sparse engine. Stopping semantics match run_to_convergence. Requires a
/// pruned graph with company_count * technology_count <= 10000, otherwise
/// throws OracleTooLargeError.
OracleResult dense_oracle(const BipartiteGraph& g, const RunConfig& cfg,
                          const IterationObserver& on_iteration = {});

}  // namespace techrank
