#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "techrank/errors.hpp"

namespace techrank {

enum class Layer { Company, Technology };

// External identifier of a node; labels are unique within a layer.
struct EntityId {
    std::string label;
    Layer layer;

    bool operator==(const EntityId&) const = default;
};

// One adjacency entry: company `company` works on technology `technology`.
// Values index the graph's node order.
struct Edge {
    std::uint32_t company;
    std::uint32_t technology;

    auto operator<=>(const Edge&) const = default;
};

struct DegreeVectors {
    std::vector<std::uint32_t> company_degrees;
    std::vector<std::uint32_t> technology_degrees;
};

/// Immutable bipartite company-technology graph.
///
/// Node order is fixed at construction and the binary edge set is kept
/// sorted by (company, technology), so two graphs built from the same
/// inputs compare equal member by member. Instances are safe to share
/// across concurrent readers.
class BipartiteGraph {
public:
    // Requires unique labels per layer, non-empty layers, in-range edge
    // indices and no duplicate edges.
    BipartiteGraph(std::vector<std::string> company_labels,
                   std::vector<std::string> technology_labels,
                   std::vector<Edge> edges);

    std::size_t company_count() const noexcept { return company_labels_.size(); }
    std::size_t technology_count() const noexcept { return technology_labels_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::span<const std::string> company_labels() const noexcept { return company_labels_; }
    std::span<const std::string> technology_labels() const noexcept { return technology_labels_; }

    // Sorted by (company, technology).
    std::span<const Edge> edges() const noexcept { return edges_; }

    // Neighbor indices in ascending order.
    std::span<const std::uint32_t> technologies_of(std::uint32_t company) const;
    std::span<const std::uint32_t> companies_of(std::uint32_t technology) const;

    std::optional<std::uint32_t> find_company(std::string_view label) const;
    std::optional<std::uint32_t> find_technology(std::string_view label) const;

private:
    std::vector<std::string> company_labels_;
    std::vector<std::string> technology_labels_;
    std::vector<Edge> edges_;
    // adjacency in both orientations
    std::vector<std::size_t> company_offsets_;
    std::vector<std::uint32_t> company_adjacency_;
    std::vector<std::size_t> technology_offsets_;
    std::vector<std::uint32_t> technology_adjacency_;
    std::unordered_map<std::string, std::uint32_t> company_index_;
    std::unordered_map<std::string, std::uint32_t> technology_index_;
};

struct BuildResult {
    BipartiteGraph graph;
    std::size_t duplicate_edges;  // input multi-edges collapsed into one
};

/// Resolves label pairs against the node lists and builds the canonical
/// graph. Node order is input order; duplicate edges collapse and are
/// counted. Throws UnknownLabelError, DuplicateLabelError, EmptyLayerError.
BuildResult build_graph(std::vector<std::string> company_labels,
                        std::vector<std::string> technology_labels,
                        std::span<const std::pair<std::string, std::string>> edge_pairs);

// Exact neighbor counts per node. sum(company) == sum(technology) == edges.
DegreeVectors degrees(const BipartiteGraph& g);

struct PruneResult {
    BipartiteGraph graph;
    std::vector<EntityId> removed;
};

/// Removes every degree-0 node (one pass suffices: such nodes carry no
/// edges, so removing them cannot create new ones). Throws EmptyLayerError
/// if a layer would end up empty.
PruneResult prune(const BipartiteGraph& g);

struct NodeRef {
    Layer layer;
    std::uint32_t index;

    auto operator<=>(const NodeRef&) const = default;
};

/// Maximal connected node sets. Each component is sorted and components
/// are ordered by their smallest member (all companies precede all
/// technologies in that order).
std::vector<std::vector<NodeRef>> connected_components(const BipartiteGraph& g);

}  // namespace techrank
