#include <doctest.h>

#include <algorithm>
#include <random>

#include "techrank/graph.hpp"
#include "techrank/synth.hpp"

using namespace techrank;

namespace {

BuildResult small_graph() {
    std::vector<std::pair<std::string, std::string>> edges{
        {"A", "x"}, {"A", "y"}, {"B", "x"}};
    return build_graph({"A", "B"}, {"x", "y"}, edges);
}

}  // namespace

TEST_CASE("build_graph constructs the canonical graph") {
    auto built = small_graph();
    CHECK(built.graph.company_count() == 2);
    CHECK(built.graph.technology_count() == 2);
    CHECK(built.graph.edge_count() == 3);
    CHECK(built.duplicate_edges == 0);
    CHECK(built.graph.find_company("A") == 0);
    CHECK(built.graph.find_technology("y") == 1);
    CHECK(built.graph.find_company("x") == std::nullopt);
}

TEST_CASE("build_graph collapses duplicate edges with a count") {
    std::vector<std::pair<std::string, std::string>> edges{{"A", "x"}, {"A", "x"}};
    auto built = build_graph({"A"}, {"x"}, edges);
    CHECK(built.graph.edge_count() == 1);
    CHECK(built.duplicate_edges == 1);
}

TEST_CASE("build_graph rejects unknown labels and empty layers") {
    std::vector<std::pair<std::string, std::string>> edges{{"C", "x"}};
    CHECK_THROWS_AS(build_graph({"A"}, {"x"}, edges), UnknownLabelError);
    std::vector<std::pair<std::string, std::string>> tech_missing{{"A", "z"}};
    CHECK_THROWS_AS(build_graph({"A"}, {"x"}, tech_missing), UnknownLabelError);
    CHECK_THROWS_AS(build_graph({}, {"x"}, {}), EmptyLayerError);
    CHECK_THROWS_AS(build_graph({"A"}, {}, {}), EmptyLayerError);
    CHECK_THROWS_AS(build_graph({"A", "A"}, {"x"}, {}), DuplicateLabelError);
}

TEST_CASE("build_graph is insensitive to edge input order") {
    std::vector<std::pair<std::string, std::string>> forward{
        {"A", "x"}, {"A", "y"}, {"B", "x"}};
    std::vector<std::pair<std::string, std::string>> shuffled{
        {"B", "x"}, {"A", "y"}, {"A", "x"}};
    auto a = build_graph({"A", "B"}, {"x", "y"}, forward);
    auto b = build_graph({"A", "B"}, {"x", "y"}, shuffled);
    CHECK(std::ranges::equal(a.graph.edges(), b.graph.edges()));
    CHECK(std::ranges::equal(a.graph.company_labels(), b.graph.company_labels()));
}

TEST_CASE("degrees counts neighbors exactly") {
    SUBCASE("complete 2x2") {
        BipartiteGraph g({"A", "B"}, {"x", "y"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
        auto d = degrees(g);
        CHECK(d.company_degrees == std::vector<std::uint32_t>{2, 2});
        CHECK(d.technology_degrees == std::vector<std::uint32_t>{2, 2});
    }
    SUBCASE("M=[[1,1],[1,0]]") {
        BipartiteGraph g({"A", "B"}, {"x", "y"}, {{0, 0}, {0, 1}, {1, 0}});
        auto d = degrees(g);
        CHECK(d.company_degrees == std::vector<std::uint32_t>{2, 1});
        CHECK(d.technology_degrees == std::vector<std::uint32_t>{2, 1});
    }
    SUBCASE("single edge") {
        BipartiteGraph g({"A"}, {"x"}, {{0, 0}});
        auto d = degrees(g);
        CHECK(d.company_degrees == std::vector<std::uint32_t>{1});
        CHECK(d.technology_degrees == std::vector<std::uint32_t>{1});
    }
}

TEST_CASE("handshake identity on seeded random graphs") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GenSpec spec{30, 12, UniformRandomModel{0.2}, seed};
        auto g = generate(spec);
        auto d = degrees(g);
        std::size_t company_total = 0;
        for (auto k : d.company_degrees) company_total += k;
        std::size_t technology_total = 0;
        for (auto k : d.technology_degrees) technology_total += k;
        CHECK(company_total == g.edge_count());
        CHECK(technology_total == g.edge_count());
    }
}

TEST_CASE("prune removes isolated nodes and reports them") {
    SUBCASE("isolated company") {
        BipartiteGraph g({"A", "B", "C"}, {"x"}, {{0, 0}});
        auto result = prune(g);
        CHECK(result.graph.company_count() == 1);
        CHECK(result.graph.edge_count() == 1);
        REQUIRE(result.removed.size() == 2);
        CHECK(result.removed[0] == EntityId{"B", Layer::Company});
        CHECK(result.removed[1] == EntityId{"C", Layer::Company});
    }
    SUBCASE("identity on fully connected input") {
        auto built = small_graph();
        auto result = prune(built.graph);
        CHECK(result.removed.empty());
        CHECK(std::ranges::equal(result.graph.edges(), built.graph.edges()));
    }
    SUBCASE("pruning everything is an error") {
        GenSpec spec{3, 3, UniformRandomModel{0.0}, 1};
        auto g = generate(spec);
        CHECK_THROWS_AS(prune(g), EmptyLayerError);
    }
}

TEST_CASE("prune is idempotent") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        GenSpec spec{25, 10, UniformRandomModel{0.08}, seed};
        auto g = generate(spec);
        if (g.edge_count() == 0) continue;
        auto once = prune(g);
        auto twice = prune(once.graph);
        CHECK(twice.removed.empty());
        CHECK(std::ranges::equal(once.graph.edges(), twice.graph.edges()));
        CHECK(std::ranges::equal(once.graph.company_labels(), twice.graph.company_labels()));
    }
}

TEST_CASE("connected_components partitions the node set") {
    SUBCASE("complete 2x2 is one component") {
        BipartiteGraph g({"A", "B"}, {"x", "y"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
        auto components = connected_components(g);
        REQUIRE(components.size() == 1);
        CHECK(components[0].size() == 4);
    }
    SUBCASE("two disjoint edges are two components") {
        BipartiteGraph g({"A", "B"}, {"x", "y"}, {{0, 0}, {1, 1}});
        auto components = connected_components(g);
        REQUIRE(components.size() == 2);
        CHECK(components[0] ==
              std::vector<NodeRef>{{Layer::Company, 0}, {Layer::Technology, 0}});
        CHECK(components[1] ==
              std::vector<NodeRef>{{Layer::Company, 1}, {Layer::Technology, 1}});
    }
    SUBCASE("M=[[1,1],[1,0]] is connected") {
        BipartiteGraph g({"A", "B"}, {"x", "y"}, {{0, 0}, {0, 1}, {1, 0}});
        CHECK(connected_components(g).size() == 1);
    }
    SUBCASE("isolated node forms its own component") {
        BipartiteGraph g({"A", "B"}, {"x"}, {{0, 0}});
        auto components = connected_components(g);
        REQUIRE(components.size() == 2);
        CHECK(components[1] == std::vector<NodeRef>{{Layer::Company, 1}});
    }
}

TEST_CASE("adjacency spans are sorted ascending") {
    GenSpec spec{40, 17, UniformRandomModel{0.25}, 9};
    auto g = generate(spec);
    for (std::uint32_t c = 0; c < g.company_count(); ++c) {
        auto row = g.technologies_of(c);
        CHECK(std::is_sorted(row.begin(), row.end()));
    }
    for (std::uint32_t t = 0; t < g.technology_count(); ++t) {
        auto column = g.companies_of(t);
        CHECK(std::is_sorted(column.begin(), column.end()));
    }
}
