#include "techrank/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace techrank {

namespace {

void require_pruned(const BipartiteGraph& g) {
    for (std::uint32_t c = 0; c < g.company_count(); ++c) {
        if (g.technologies_of(c).empty()) {
            throw std::invalid_argument("graph has a degree-0 company; prune first");
        }
    }
    for (std::uint32_t t = 0; t < g.technology_count(); ++t) {
        if (g.companies_of(t).empty()) {
            throw std::invalid_argument("graph has a degree-0 technology; prune first");
        }
    }
}

// k^(-exponent) per node, rejected when it leaves (0, inf).
std::vector<double> degree_powers(std::span<const std::uint32_t> degrees, double exponent) {
    std::vector<double> powers(degrees.size());
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        double value = std::pow(static_cast<double>(degrees[i]), -exponent);
        if (!std::isfinite(value) || value == 0.0) {
            throw NumericalOverflowError("degree power " + std::to_string(degrees[i]) +
                                         "^-(" + std::to_string(exponent) +
                                         ") is outside the finite range");
        }
        powers[i] = value;
    }
    return powers;
}

void normalize(std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    for (double& w : weights) w /= total;
}

double max_abs_difference(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

std::vector<std::uint32_t> ascending_order(std::span<const double> weights) {
    std::vector<std::uint32_t> order(weights.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (weights[a] != weights[b]) return weights[a] < weights[b];
        return a < b;
    });
    return order;
}

// True when some pair strictly reverses order between prev and curr while
// being separated by at least `threshold` in one of the two iterations.
// Pairs closer than the threshold on both sides carry no rank information
// at the run's resolution: structurally symmetric nodes sit at exactly
// equal true weights and their float images swap order at ulp scale
// forever, so exact order comparison would never stabilize.
//
// One sweep catches reversals separated in `a` (entities visited in
// ascending-b order against the running max of a over strictly smaller b);
// the caller runs it both ways.
bool reversal_separated_in_first(std::span<const double> a, std::span<const double> b,
                                 std::span<const std::uint32_t> b_ascending,
                                 double threshold) {
    double max_a = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < b_ascending.size()) {
        std::size_t j = i;  // group of exactly equal b values
        while (j + 1 < b_ascending.size() &&
               b[b_ascending[j + 1]] == b[b_ascending[i]]) {
            ++j;
        }
        for (std::size_t k = i; k <= j; ++k) {
            if (max_a >= a[b_ascending[k]] + threshold) return true;
        }
        for (std::size_t k = i; k <= j; ++k) max_a = std::max(max_a, a[b_ascending[k]]);
        i = j + 1;
    }
    return false;
}

bool order_stable(std::span<const double> previous, std::span<const double> current,
                  std::span<const std::uint32_t> previous_ascending,
                  std::span<const std::uint32_t> current_ascending, double threshold) {
    return !reversal_separated_in_first(previous, current, current_ascending, threshold) &&
           !reversal_separated_in_first(current, previous, previous_ascending, threshold);
}

}  // namespace

RankState initial_weights(const BipartiteGraph& g) {
    require_pruned(g);
    RankState state;
    state.company_weights.resize(g.company_count());
    state.technology_weights.resize(g.technology_count());
    const double total = static_cast<double>(g.edge_count());
    for (std::uint32_t c = 0; c < g.company_count(); ++c) {
        state.company_weights[c] = static_cast<double>(g.technologies_of(c).size()) / total;
    }
    for (std::uint32_t t = 0; t < g.technology_count(); ++t) {
        state.technology_weights[t] = static_cast<double>(g.companies_of(t).size()) / total;
    }
    state.iteration = 0;
    return state;
}

TransitionPair build_transitions(const BipartiteGraph& g, Exponents exponents) {
    require_pruned(g);
    if (!std::isfinite(exponents.alpha) || !std::isfinite(exponents.beta)) {
        throw std::invalid_argument("exponents must be finite");
    }
    const auto n_c = g.company_count();
    const auto n_t = g.technology_count();
    DegreeVectors deg = degrees(g);
    std::vector<double> company_powers = degree_powers(deg.company_degrees, exponents.beta);
    std::vector<double> technology_powers = degree_powers(deg.technology_degrees, exponents.alpha);

    // per-technology normalizer of the beta operator, ascending company order
    std::vector<double> beta_normalizers(n_t);
    for (std::uint32_t t = 0; t < n_t; ++t) {
        double total = 0.0;
        for (std::uint32_t c : g.companies_of(t)) total += company_powers[c];
        if (!std::isfinite(total)) {
            throw NumericalOverflowError("beta normalizer overflowed");
        }
        beta_normalizers[t] = total;
    }
    // per-company normalizer of the alpha operator, ascending technology order
    std::vector<double> alpha_normalizers(n_c);
    for (std::uint32_t c = 0; c < n_c; ++c) {
        double total = 0.0;
        for (std::uint32_t t : g.technologies_of(c)) total += technology_powers[t];
        if (!std::isfinite(total)) {
            throw NumericalOverflowError("alpha normalizer overflowed");
        }
        alpha_normalizers[c] = total;
    }

    TransitionPair tp;
    tp.company_offsets.assign(n_c + 1, 0);
    tp.tech_offsets.assign(n_t + 1, 0);
    tp.company_techs.reserve(g.edge_count());
    tp.beta_values.reserve(g.edge_count());
    tp.tech_companies.reserve(g.edge_count());
    tp.alpha_values.reserve(g.edge_count());

    for (std::uint32_t c = 0; c < n_c; ++c) {
        for (std::uint32_t t : g.technologies_of(c)) {
            double value = company_powers[c] / beta_normalizers[t];
            if (value <= 0.0 || !std::isfinite(value)) {
                throw NumericalOverflowError("beta transition entry underflowed");
            }
            tp.company_techs.push_back(t);
            tp.beta_values.push_back(value);
        }
        tp.company_offsets[c + 1] = tp.company_techs.size();
    }
    for (std::uint32_t t = 0; t < n_t; ++t) {
        for (std::uint32_t c : g.companies_of(t)) {
            double value = technology_powers[t] / alpha_normalizers[c];
            if (value <= 0.0 || !std::isfinite(value)) {
                throw NumericalOverflowError("alpha transition entry underflowed");
            }
            tp.tech_companies.push_back(c);
            tp.alpha_values.push_back(value);
        }
        tp.tech_offsets[t + 1] = tp.tech_companies.size();
    }
    return tp;
}

RankState step(const RankState& state, const TransitionPair& transitions) {
    const std::size_t n_c = transitions.company_count();
    const std::size_t n_t = transitions.technology_count();
    RankState next;
    next.company_weights.resize(n_c);
    next.technology_weights.resize(n_t);

    // synchronous cross-layer update: both layers read the input state
    for (std::size_t c = 0; c < n_c; ++c) {
        double acc = 0.0;
        for (std::size_t e = transitions.company_offsets[c];
             e < transitions.company_offsets[c + 1]; ++e) {
            acc += transitions.beta_values[e] *
                   state.technology_weights[transitions.company_techs[e]];
        }
        next.company_weights[c] = acc;
    }
    for (std::size_t t = 0; t < n_t; ++t) {
        double acc = 0.0;
        for (std::size_t e = transitions.tech_offsets[t]; e < transitions.tech_offsets[t + 1];
             ++e) {
            acc += transitions.alpha_values[e] *
                   state.company_weights[transitions.tech_companies[e]];
        }
        next.technology_weights[t] = acc;
    }
    normalize(next.company_weights);
    normalize(next.technology_weights);
    next.iteration = state.iteration + 1;
    return next;
}

RunResult run_to_convergence(const BipartiteGraph& g, const RunConfig& cfg,
                             const IterationObserver& on_iteration) {
    if (cfg.tolerance <= 0.0) throw std::invalid_argument("tolerance must be > 0");
    if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (cfg.rank_stability_window < 1) {
        throw std::invalid_argument("rank_stability_window must be >= 1");
    }

    TransitionPair transitions = build_transitions(g, cfg.exponents);
    RankState state = initial_weights(g);
    std::vector<std::uint32_t> company_order = ascending_order(state.company_weights);
    std::vector<std::uint32_t> technology_order = ascending_order(state.technology_weights);

    RunResult result;
    result.status = RunStatus::MaxIterations;
    std::size_t streak = 0;
    std::optional<RankState> pending;  // step precomputed by a convergence check

    for (std::size_t n = 1; n <= cfg.max_iterations; ++n) {
        RankState next = pending ? std::move(*pending) : step(state, transitions);
        pending.reset();
        double delta_companies = max_abs_difference(next.company_weights, state.company_weights);
        double delta_technologies =
            max_abs_difference(next.technology_weights, state.technology_weights);

        std::vector<std::uint32_t> next_company_order = ascending_order(next.company_weights);
        std::vector<std::uint32_t> next_technology_order =
            ascending_order(next.technology_weights);
        bool stable = order_stable(state.company_weights, next.company_weights,
                                   company_order, next_company_order, cfg.tolerance) &&
                      order_stable(state.technology_weights, next.technology_weights,
                                   technology_order, next_technology_order, cfg.tolerance);
        streak = stable ? streak + 1 : 0;

        result.trace.push_back({n, delta_companies, delta_technologies, streak});
        state = std::move(next);
        company_order = std::move(next_company_order);
        technology_order = std::move(next_technology_order);
        if (on_iteration) on_iteration(state);

        if (std::max(delta_companies, delta_technologies) < cfg.tolerance &&
            streak >= cfg.rank_stability_window) {
            // the update is no max-norm contraction, so one settled delta
            // does not bound the next; verify before declaring convergence
            RankState peek = step(state, transitions);
            double peek_delta =
                std::max(max_abs_difference(peek.company_weights, state.company_weights),
                         max_abs_difference(peek.technology_weights,
                                            state.technology_weights));
            if (peek_delta < cfg.tolerance) {
                result.status = RunStatus::Converged;
                break;
            }
            pending = std::move(peek);  // becomes the next iteration
        }
    }
    result.state = std::move(state);
    return result;
}

std::vector<SweepCell> sweep(const BipartiteGraph& g, std::span<const double> alphas,
                             std::span<const double> betas, const RunConfig& cfg) {
    if (alphas.empty() || betas.empty()) {
        throw std::invalid_argument("sweep grids must be non-empty");
    }
    std::vector<SweepCell> cells;
    cells.reserve(alphas.size() * betas.size());
    for (double alpha : alphas) {
        for (double beta : betas) {
            RunConfig cell_cfg = cfg;
            cell_cfg.exponents = {alpha, beta};
            try {
                RunResult run = run_to_convergence(g, cell_cfg);
                cells.push_back(
                    {alpha, beta, run.status, run.state.iteration, std::move(run.state)});
            } catch (const NumericalOverflowError&) {
                cells.push_back({alpha, beta, RunStatus::Failed, 0, {}});
            }
        }
    }
    return cells;
}

double max_beta_column_sum_error(const TransitionPair& transitions) {
    std::vector<double> sums(transitions.technology_count(), 0.0);
    for (std::size_t c = 0; c < transitions.company_count(); ++c) {
        for (std::size_t e = transitions.company_offsets[c];
             e < transitions.company_offsets[c + 1]; ++e) {
            sums[transitions.company_techs[e]] += transitions.beta_values[e];
        }
    }
    double worst = 0.0;
    for (double s : sums) worst = std::max(worst, std::abs(s - 1.0));
    return worst;
}

double max_alpha_row_sum_error(const TransitionPair& transitions) {
    std::vector<double> sums(transitions.company_count(), 0.0);
    for (std::size_t t = 0; t < transitions.technology_count(); ++t) {
        for (std::size_t e = transitions.tech_offsets[t]; e < transitions.tech_offsets[t + 1];
             ++e) {
            sums[transitions.tech_companies[e]] += transitions.alpha_values[e];
        }
    }
    double worst = 0.0;
    for (double s : sums) worst = std::max(worst, std::abs(s - 1.0));
    return worst;
}

}  // namespace techrank
