#include "techrank/graph.hpp"

#include <algorithm>
#include <queue>

namespace techrank {

namespace {

std::unordered_map<std::string, std::uint32_t> index_labels(
    const std::vector<std::string>& labels, const char* layer_name) {
    std::unordered_map<std::string, std::uint32_t> index;
    index.reserve(labels.size());
    for (std::uint32_t i = 0; i < labels.size(); ++i) {
        if (!index.emplace(labels[i], i).second) {
            throw DuplicateLabelError("duplicate " + std::string(layer_name) +
                                      " label '" + labels[i] + "'");
        }
    }
    return index;
}

}  // namespace

BipartiteGraph::BipartiteGraph(std::vector<std::string> company_labels,
                               std::vector<std::string> technology_labels,
                               std::vector<Edge> edges)
    : company_labels_(std::move(company_labels)),
      technology_labels_(std::move(technology_labels)),
      edges_(std::move(edges)) {
    if (company_labels_.empty()) throw EmptyLayerError("company layer has zero nodes");
    if (technology_labels_.empty()) throw EmptyLayerError("technology layer has zero nodes");
    company_index_ = index_labels(company_labels_, "company");
    technology_index_ = index_labels(technology_labels_, "technology");

    const auto n_c = company_labels_.size();
    const auto n_t = technology_labels_.size();
    for (const Edge& e : edges_) {
        if (e.company >= n_c || e.technology >= n_t) {
            throw std::out_of_range("edge index out of range");
        }
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
        throw std::invalid_argument("duplicate edge passed to BipartiteGraph");
    }

    // company-major adjacency straight from the sorted edge list
    company_offsets_.assign(n_c + 1, 0);
    technology_offsets_.assign(n_t + 1, 0);
    for (const Edge& e : edges_) {
        ++company_offsets_[e.company + 1];
        ++technology_offsets_[e.technology + 1];
    }
    for (std::size_t i = 1; i <= n_c; ++i) company_offsets_[i] += company_offsets_[i - 1];
    for (std::size_t i = 1; i <= n_t; ++i) technology_offsets_[i] += technology_offsets_[i - 1];

    company_adjacency_.resize(edges_.size());
    technology_adjacency_.resize(edges_.size());
    std::vector<std::size_t> cursor(technology_offsets_.begin(), technology_offsets_.end() - 1);
    std::size_t pos = 0;
    for (const Edge& e : edges_) {
        company_adjacency_[pos++] = e.technology;
        // companies arrive in ascending order for each technology because
        // the edge list is sorted company-major
        technology_adjacency_[cursor[e.technology]++] = e.company;
    }
}

std::span<const std::uint32_t> BipartiteGraph::technologies_of(std::uint32_t company) const {
    return {company_adjacency_.data() + company_offsets_[company],
            company_adjacency_.data() + company_offsets_[company + 1]};
}

std::span<const std::uint32_t> BipartiteGraph::companies_of(std::uint32_t technology) const {
    return {technology_adjacency_.data() + technology_offsets_[technology],
            technology_adjacency_.data() + technology_offsets_[technology + 1]};
}

std::optional<std::uint32_t> BipartiteGraph::find_company(std::string_view label) const {
    auto it = company_index_.find(std::string(label));
    if (it == company_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> BipartiteGraph::find_technology(std::string_view label) const {
    auto it = technology_index_.find(std::string(label));
    if (it == technology_index_.end()) return std::nullopt;
    return it->second;
}

BuildResult build_graph(std::vector<std::string> company_labels,
                        std::vector<std::string> technology_labels,
                        std::span<const std::pair<std::string, std::string>> edge_pairs) {
    if (company_labels.empty()) throw EmptyLayerError("company layer has zero nodes");
    if (technology_labels.empty()) throw EmptyLayerError("technology layer has zero nodes");
    auto company_index = index_labels(company_labels, "company");
    auto technology_index = index_labels(technology_labels, "technology");

    std::vector<Edge> edges;
    edges.reserve(edge_pairs.size());
    for (const auto& [company, technology] : edge_pairs) {
        auto c = company_index.find(company);
        if (c == company_index.end()) {
            throw UnknownLabelError("unknown company label '" + company + "'");
        }
        auto t = technology_index.find(technology);
        if (t == technology_index.end()) {
            throw UnknownLabelError("unknown technology label '" + technology + "'");
        }
        edges.push_back({c->second, t->second});
    }

    std::sort(edges.begin(), edges.end());
    auto unique_end = std::unique(edges.begin(), edges.end());
    std::size_t duplicates = static_cast<std::size_t>(edges.end() - unique_end);
    edges.erase(unique_end, edges.end());

    return {BipartiteGraph(std::move(company_labels), std::move(technology_labels),
                           std::move(edges)),
            duplicates};
}

DegreeVectors degrees(const BipartiteGraph& g) {
    DegreeVectors d;
    d.company_degrees.resize(g.company_count());
    d.technology_degrees.resize(g.technology_count());
    for (std::uint32_t c = 0; c < g.company_count(); ++c) {
        d.company_degrees[c] = static_cast<std::uint32_t>(g.technologies_of(c).size());
    }
    for (std::uint32_t t = 0; t < g.technology_count(); ++t) {
        d.technology_degrees[t] = static_cast<std::uint32_t>(g.companies_of(t).size());
    }
    return d;
}

PruneResult prune(const BipartiteGraph& g) {
    std::vector<EntityId> removed;
    std::vector<std::uint32_t> company_map(g.company_count(), 0);
    std::vector<std::uint32_t> technology_map(g.technology_count(), 0);

    std::vector<std::string> kept_companies;
    for (std::uint32_t c = 0; c < g.company_count(); ++c) {
        if (g.technologies_of(c).empty()) {
            removed.push_back({g.company_labels()[c], Layer::Company});
        } else {
            company_map[c] = static_cast<std::uint32_t>(kept_companies.size());
            kept_companies.push_back(g.company_labels()[c]);
        }
    }
    std::vector<std::string> kept_technologies;
    for (std::uint32_t t = 0; t < g.technology_count(); ++t) {
        if (g.companies_of(t).empty()) {
            removed.push_back({g.technology_labels()[t], Layer::Technology});
        } else {
            technology_map[t] = static_cast<std::uint32_t>(kept_technologies.size());
            kept_technologies.push_back(g.technology_labels()[t]);
        }
    }

    if (removed.empty()) return {g, {}};
    if (kept_companies.empty()) throw EmptyLayerError("pruning removed every company");
    if (kept_technologies.empty()) throw EmptyLayerError("pruning removed every technology");

    std::vector<Edge> edges;
    edges.reserve(g.edge_count());
    for (const Edge& e : g.edges()) {
        edges.push_back({company_map[e.company], technology_map[e.technology]});
    }
    return {BipartiteGraph(std::move(kept_companies), std::move(kept_technologies),
                           std::move(edges)),
            std::move(removed)};
}

std::vector<std::vector<NodeRef>> connected_components(const BipartiteGraph& g) {
    const auto n_c = g.company_count();
    const auto n_t = g.technology_count();
    const std::size_t total = n_c + n_t;
    std::vector<bool> visited(total, false);
    std::vector<std::vector<NodeRef>> components;

    // global order: companies 0..n_c-1, then technologies
    for (std::size_t start = 0; start < total; ++start) {
        if (visited[start]) continue;
        visited[start] = true;
        std::vector<std::size_t> member_ids{start};
        std::queue<std::size_t> frontier;
        frontier.push(start);
        while (!frontier.empty()) {
            std::size_t node = frontier.front();
            frontier.pop();
            if (node < n_c) {
                for (std::uint32_t t : g.technologies_of(static_cast<std::uint32_t>(node))) {
                    std::size_t id = n_c + t;
                    if (!visited[id]) {
                        visited[id] = true;
                        member_ids.push_back(id);
                        frontier.push(id);
                    }
                }
            } else {
                for (std::uint32_t c : g.companies_of(static_cast<std::uint32_t>(node - n_c))) {
                    if (!visited[c]) {
                        visited[c] = true;
                        member_ids.push_back(c);
                        frontier.push(c);
                    }
                }
            }
        }
        std::sort(member_ids.begin(), member_ids.end());
        std::vector<NodeRef> component;
        component.reserve(member_ids.size());
        for (std::size_t id : member_ids) {
            if (id < n_c) {
                component.push_back({Layer::Company, static_cast<std::uint32_t>(id)});
            } else {
                component.push_back({Layer::Technology, static_cast<std::uint32_t>(id - n_c)});
            }
        }
        components.push_back(std::move(component));
    }
    return components;
}

}  // namespace techrank
