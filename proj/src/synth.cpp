#include "techrank/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <random>
#include <type_traits>

namespace techrank {

namespace {

// Portable uniforms: the standard distributions are implementation
// defined, so only raw engine output is used.
double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t mask = std::bit_ceil(bound) - 1;
    while (true) {
        std::uint64_t value = rng() & mask;
        if (value < bound) return value;
    }
}

std::vector<std::string> make_labels(char prefix, std::uint32_t count) {
    const std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
    std::vector<std::string> labels;
    labels.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::string digits = std::to_string(i);
        std::string label(1, prefix);
        label.append(width - digits.size(), '0');
        label += digits;
        labels.push_back(std::move(label));
    }
    return labels;
}

void validate_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must be in [0, 1]");
    }
}

std::vector<Edge> generate_uniform(const GenSpec& spec, const UniformRandomModel& model,
                                   std::mt19937_64& rng) {
    validate_probability(model.edge_probability, "edge_probability");
    std::vector<Edge> edges;
    for (std::uint32_t c = 0; c < spec.n_companies; ++c) {
        for (std::uint32_t t = 0; t < spec.n_technologies; ++t) {
            if (unit_double(rng) < model.edge_probability) edges.push_back({c, t});
        }
    }
    return edges;
}

std::vector<Edge> generate_fixed_degree(const GenSpec& spec, const FixedDegreeModel& model,
                                        std::mt19937_64& rng) {
    if (model.company_degree < 1 || model.company_degree > spec.n_technologies) {
        throw std::invalid_argument("company_degree must be in [1, n_technologies]");
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(spec.n_companies) * model.company_degree);
    std::vector<std::uint32_t> pool(spec.n_technologies);
    for (std::uint32_t c = 0; c < spec.n_companies; ++c) {
        // partial Fisher-Yates for company_degree distinct picks
        for (std::uint32_t i = 0; i < spec.n_technologies; ++i) pool[i] = i;
        for (std::uint32_t i = 0; i < model.company_degree; ++i) {
            std::uint32_t j =
                i + static_cast<std::uint32_t>(below(rng, spec.n_technologies - i));
            std::swap(pool[i], pool[j]);
        }
        std::sort(pool.begin(), pool.begin() + model.company_degree);
        for (std::uint32_t i = 0; i < model.company_degree; ++i) {
            edges.push_back({c, pool[i]});
        }
    }
    return edges;
}

std::vector<Edge> generate_planted(const GenSpec& spec, const PlantedBlocksModel& model,
                                   std::mt19937_64& rng) {
    for (const BlockSpec& block : model.blocks) {
        if (block.company_begin > block.company_end ||
            block.company_end > spec.n_companies || block.tech_begin > block.tech_end ||
            block.tech_end > spec.n_technologies) {
            throw std::invalid_argument("block range out of bounds");
        }
        validate_probability(block.p_in, "p_in");
        validate_probability(block.p_out, "p_out");
    }
    auto pair_probability = [&](std::uint32_t c, std::uint32_t t) {
        for (const BlockSpec& block : model.blocks) {
            if (c >= block.company_begin && c < block.company_end) {
                bool inside = t >= block.tech_begin && t < block.tech_end;
                return inside ? block.p_in : block.p_out;
            }
        }
        return 0.0;
    };
    std::vector<Edge> edges;
    for (std::uint32_t c = 0; c < spec.n_companies; ++c) {
        for (std::uint32_t t = 0; t < spec.n_technologies; ++t) {
            // one draw per pair keeps the stream aligned across models
            if (unit_double(rng) < pair_probability(c, t)) edges.push_back({c, t});
        }
    }
    return edges;
}

}  // namespace

BipartiteGraph generate(const GenSpec& spec) {
    if (spec.n_companies < 1 || spec.n_technologies < 1) {
        throw std::invalid_argument("layer sizes must be positive");
    }
    std::mt19937_64 rng(spec.seed);
    std::vector<Edge> edges = std::visit(
        [&](const auto& model) {
            using Model = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<Model, UniformRandomModel>) {
                return generate_uniform(spec, model, rng);
            } else if constexpr (std::is_same_v<Model, FixedDegreeModel>) {
                return generate_fixed_degree(spec, model, rng);
            } else {
                return generate_planted(spec, model, rng);
            }
        },
        spec.model);
    return BipartiteGraph(make_labels('c', spec.n_companies),
                          make_labels('t', spec.n_technologies), std::move(edges));
}

OracleResult dense_oracle(const BipartiteGraph& g, const RunConfig& cfg,
                          const IterationObserver& on_iteration) {
    const std::size_t n_c = g.company_count();
    const std::size_t n_t = g.technology_count();
    if (n_c * n_t > 10000) {
        throw OracleTooLargeError("dense oracle bound is n_companies*n_technologies <= 10000");
    }
    if (cfg.tolerance <= 0.0) throw std::invalid_argument("tolerance must be > 0");
    if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (cfg.rank_stability_window < 1) {
        throw std::invalid_argument("rank_stability_window must be >= 1");
    }

    // dense adjacency, row-major companies x technologies
    std::vector<double> adjacency(n_c * n_t, 0.0);
    for (const Edge& e : g.edges()) {
        adjacency[static_cast<std::size_t>(e.company) * n_t + e.technology] = 1.0;
    }

    std::vector<double> company_degree(n_c, 0.0);
    std::vector<double> technology_degree(n_t, 0.0);
    for (std::size_t c = 0; c < n_c; ++c) {
        for (std::size_t t = 0; t < n_t; ++t) {
            company_degree[c] += adjacency[c * n_t + t];
            technology_degree[t] += adjacency[c * n_t + t];
        }
    }
    for (double k : company_degree) {
        if (k == 0.0) throw std::invalid_argument("graph has a degree-0 company; prune first");
    }
    for (double k : technology_degree) {
        if (k == 0.0) throw std::invalid_argument("graph has a degree-0 technology; prune first");
    }

    auto checked_power = [](double degree, double exponent) {
        double value = std::pow(degree, -exponent);
        if (!std::isfinite(value) || value == 0.0) {
            throw NumericalOverflowError("degree power outside the finite range");
        }
        return value;
    };

    // beta operator: columns over companies sum to 1
    std::vector<double> jump_to_company(n_c * n_t, 0.0);
    for (std::size_t t = 0; t < n_t; ++t) {
        double normalizer = 0.0;
        for (std::size_t c = 0; c < n_c; ++c) {
            normalizer +=
                adjacency[c * n_t + t] * checked_power(company_degree[c], cfg.exponents.beta);
        }
        if (!std::isfinite(normalizer)) throw NumericalOverflowError("normalizer overflowed");
        for (std::size_t c = 0; c < n_c; ++c) {
            if (adjacency[c * n_t + t] == 0.0) continue;
            double value = checked_power(company_degree[c], cfg.exponents.beta) / normalizer;
            if (value <= 0.0 || !std::isfinite(value)) {
                throw NumericalOverflowError("transition entry underflowed");
            }
            jump_to_company[c * n_t + t] = value;
        }
    }
    // alpha operator: rows over technologies sum to 1
    std::vector<double> jump_to_technology(n_c * n_t, 0.0);
    for (std::size_t c = 0; c < n_c; ++c) {
        double normalizer = 0.0;
        for (std::size_t t = 0; t < n_t; ++t) {
            normalizer +=
                adjacency[c * n_t + t] * checked_power(technology_degree[t], cfg.exponents.alpha);
        }
        if (!std::isfinite(normalizer)) throw NumericalOverflowError("normalizer overflowed");
        for (std::size_t t = 0; t < n_t; ++t) {
            if (adjacency[c * n_t + t] == 0.0) continue;
            double value = checked_power(technology_degree[t], cfg.exponents.alpha) / normalizer;
            if (value <= 0.0 || !std::isfinite(value)) {
                throw NumericalOverflowError("transition entry underflowed");
            }
            jump_to_technology[c * n_t + t] = value;
        }
    }

    // order is stable when no pair separated by at least the tolerance (in
    // either iteration) strictly reverses; checked pair by pair
    auto layer_stable = [&](const std::vector<double>& previous,
                            const std::vector<double>& current) {
        for (std::size_t i = 0; i < previous.size(); ++i) {
            for (std::size_t j = i + 1; j < previous.size(); ++j) {
                double before = previous[i] - previous[j];
                double after = current[i] - current[j];
                bool reversed = (before > 0.0 && after < 0.0) || (before < 0.0 && after > 0.0);
                if (!reversed) continue;
                if (std::abs(before) >= cfg.tolerance || std::abs(after) >= cfg.tolerance) {
                    return false;
                }
            }
        }
        return true;
    };
    auto renormalize = [](std::vector<double>& w) {
        double total = 0.0;
        for (double v : w) total += v;
        for (double& v : w) v /= total;
    };

    OracleResult result;
    result.status = RunStatus::MaxIterations;

    double edge_total = 0.0;
    for (double k : company_degree) edge_total += k;
    RankState state;
    state.company_weights.resize(n_c);
    state.technology_weights.resize(n_t);
    for (std::size_t c = 0; c < n_c; ++c) state.company_weights[c] = company_degree[c] / edge_total;
    for (std::size_t t = 0; t < n_t; ++t) {
        state.technology_weights[t] = technology_degree[t] / edge_total;
    }
    state.iteration = 0;
    std::size_t streak = 0;

    auto advance = [&](const RankState& from) {
        RankState next;
        next.company_weights.assign(n_c, 0.0);
        next.technology_weights.assign(n_t, 0.0);
        for (std::size_t c = 0; c < n_c; ++c) {
            double acc = 0.0;
            for (std::size_t t = 0; t < n_t; ++t) {
                acc += jump_to_company[c * n_t + t] * from.technology_weights[t];
            }
            next.company_weights[c] = acc;
        }
        for (std::size_t t = 0; t < n_t; ++t) {
            double acc = 0.0;
            for (std::size_t c = 0; c < n_c; ++c) {
                acc += jump_to_technology[c * n_t + t] * from.company_weights[c];
            }
            next.technology_weights[t] = acc;
        }
        renormalize(next.company_weights);
        renormalize(next.technology_weights);
        next.iteration = from.iteration + 1;
        return next;
    };
    auto max_delta = [](const RankState& a, const RankState& b) {
        double worst = 0.0;
        for (std::size_t i = 0; i < a.company_weights.size(); ++i) {
            worst = std::max(worst, std::abs(a.company_weights[i] - b.company_weights[i]));
        }
        for (std::size_t i = 0; i < a.technology_weights.size(); ++i) {
            worst = std::max(worst,
                             std::abs(a.technology_weights[i] - b.technology_weights[i]));
        }
        return worst;
    };

    std::optional<RankState> pending;
    for (std::size_t n = 1; n <= cfg.max_iterations; ++n) {
        RankState next = pending ? std::move(*pending) : advance(state);
        pending.reset();

        double delta_companies = 0.0;
        for (std::size_t c = 0; c < n_c; ++c) {
            delta_companies = std::max(
                delta_companies, std::abs(next.company_weights[c] - state.company_weights[c]));
        }
        double delta_technologies = 0.0;
        for (std::size_t t = 0; t < n_t; ++t) {
            delta_technologies =
                std::max(delta_technologies,
                         std::abs(next.technology_weights[t] - state.technology_weights[t]));
        }

        bool stable = layer_stable(state.company_weights, next.company_weights) &&
                      layer_stable(state.technology_weights, next.technology_weights);
        streak = stable ? streak + 1 : 0;

        result.trace.push_back({n, delta_companies, delta_technologies, streak});
        state = std::move(next);
        if (on_iteration) on_iteration(state);

        if (std::max(delta_companies, delta_technologies) < cfg.tolerance &&
            streak >= cfg.rank_stability_window) {
            // same verification step as the engine: the next update must
            // also stay below tolerance before convergence is declared
            RankState peek = advance(state);
            if (max_delta(peek, state) < cfg.tolerance) {
                result.status = RunStatus::Converged;
                break;
            }
            pending = std::move(peek);
        }
    }
    result.state = std::move(state);
    return result;
}

}  // namespace techrank
