#include <doctest.h>

#include "tcs/error.hpp"
#include "tcs/graph.hpp"
#include "tcs/rng.hpp"

#include <set>
#include <tuple>

using namespace tcs;

namespace {

LaggedGraph random_graph(int n, int lmax, double p, Rng& rng) {
    LaggedGraph g(n, lmax);
    for (int lag = 1; lag <= lmax; ++lag)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (uniform01(rng) < p) g.set_edge(lag, i, j);
    return g;
}

}  // namespace

TEST_CASE("lagged_parents") {
    LaggedGraph empty(3, 2);
    CHECK(lagged_parents(empty, 0).empty());

    LaggedGraph one = LaggedGraph::from_edges(2, 2, {{2, 1, 0}});
    const auto pa = lagged_parents(one, 0);
    REQUIRE(pa.size() == 1);
    CHECK(pa[0] == Parent{1, 2});

    CHECK_THROWS_AS(lagged_parents(one, 2), ArgumentError);
    CHECK_THROWS_AS(lagged_parents(one, -1), ArgumentError);
}

TEST_CASE("lagged_parents matches an exhaustive scan and rebuilds adj") {
    Rng rng = make_rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const LaggedGraph g = random_graph(4, 3, 0.3, rng);
        LaggedGraph rebuilt(4, 3);
        for (int j = 0; j < 4; ++j) {
            std::set<std::pair<int, int>> scan;
            for (int i = 0; i < 4; ++i)
                for (int lag = 1; lag <= 3; ++lag)
                    if (g.has_edge(lag, i, j)) scan.insert({i, lag});
            std::set<std::pair<int, int>> got;
            for (const auto& p : lagged_parents(g, j)) {
                got.insert({p.var, p.lag});
                rebuilt.set_edge(p.lag, p.var, j);
            }
            CHECK(got == scan);
        }
        CHECK(rebuilt == g);
    }
}

TEST_CASE("parents come ordered by variable then lag") {
    const LaggedGraph g = LaggedGraph::from_edges(3, 3, {{3, 0, 1}, {1, 2, 1}, {1, 0, 1}});
    const auto pa = lagged_parents(g, 1);
    REQUIRE(pa.size() == 3);
    CHECK(pa[0] == Parent{0, 1});
    CHECK(pa[1] == Parent{0, 3});
    CHECK(pa[2] == Parent{2, 1});
}

TEST_CASE("to_summary") {
    CHECK(to_summary(LaggedGraph(3, 2)).edge_count() == 0);

    const LaggedGraph g = LaggedGraph::from_edges(2, 3, {{1, 0, 1}, {3, 0, 1}});
    const SummaryGraph s = to_summary(g);
    CHECK(s.edge_count() == 1);
    CHECK(s.has_edge(0, 1));

    Rng rng = make_rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const LaggedGraph r = random_graph(5, 3, 0.15, rng);
        SummaryGraph oracle(5);
        for (int lag = 1; lag <= 3; ++lag)
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j)
                    if (r.has_edge(lag, i, j)) oracle.set_edge(i, j);
        const SummaryGraph got = to_summary(r);
        CHECK(got == oracle);
        // every summary edge has a witnessing lag
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                if (got.has_edge(i, j)) {
                    bool witness = false;
                    for (int lag = 1; lag <= 3; ++lag) witness = witness || r.has_edge(lag, i, j);
                    CHECK(witness);
                }
    }
}

TEST_CASE("shd") {
    Rng rng = make_rng(7);
    const LaggedGraph g = random_graph(3, 2, 0.4, rng);
    CHECK(shd(g, g) == 0);
    CHECK(shd(g, LaggedGraph(3, 2)) == g.edge_count());
    CHECK_THROWS_AS(shd(g, LaggedGraph(3, 1)), ArgumentError);
    CHECK_THROWS_AS(shd(g, LaggedGraph(4, 2)), ArgumentError);

    for (int rep = 0; rep < 50; ++rep) {
        const LaggedGraph a = random_graph(3, 2, 0.5, rng);
        const LaggedGraph b = random_graph(3, 2, 0.5, rng);
        const LaggedGraph c = random_graph(3, 2, 0.5, rng);
        std::size_t brute = 0;
        for (int lag = 1; lag <= 2; ++lag)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) brute += a.has_edge(lag, i, j) != b.has_edge(lag, i, j);
        CHECK(shd(a, b) == brute);
        CHECK(shd(a, b) == shd(b, a));
        CHECK(shd(a, c) <= shd(a, b) + shd(b, c));
        CHECK((shd(a, b) == 0) == (a == b));
    }
}

TEST_CASE("edge_auc") {
    const LaggedGraph truth = LaggedGraph::from_edges(3, 1, {{1, 0, 1}, {1, 2, 2}});
    LagTensor exact(3, 1);
    for (const auto& e : truth.edges()) exact.at(e.lag, e.cause, e.effect) = 1.0;
    CHECK(edge_auc(exact, truth) == 1.0);
    CHECK(edge_auc(LagTensor(3, 1, 0.3), truth) == 0.5);

    CHECK_THROWS_AS(edge_auc(exact, LaggedGraph(3, 1)), DataError);
    CHECK_THROWS_AS(edge_auc(exact, LaggedGraph::fully_connected(3, 1)), DataError);
    CHECK_THROWS_AS(edge_auc(LagTensor(2, 1), truth), ArgumentError);

    // Mann-Whitney pairwise oracle
    Rng rng = make_rng(3);
    for (int rep = 0; rep < 30; ++rep) {
        LagTensor s(3, 1);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s.at(1, i, j) = std::floor(uniform01(rng) * 4.0);
        double wins = 0.0;
        int pairs = 0;
        for (int a = 0; a < 9; ++a)
            for (int b = 0; b < 9; ++b) {
                const bool pa = truth.cells()[static_cast<std::size_t>(a)];
                const bool pb = truth.cells()[static_cast<std::size_t>(b)];
                if (!pa || pb) continue;
                ++pairs;
                const double sa = s.flat()[static_cast<std::size_t>(a)];
                const double sb = s.flat()[static_cast<std::size_t>(b)];
                wins += sa > sb ? 1.0 : (sa == sb ? 0.5 : 0.0);
            }
        CHECK(edge_auc(s, truth) == doctest::Approx(wins / pairs).epsilon(1e-15));
    }
}

TEST_CASE("graph shape and index guards") {
    CHECK_THROWS_AS(LaggedGraph(0, 1), ArgumentError);
    CHECK_THROWS_AS(LaggedGraph(2, 0), ArgumentError);
    LaggedGraph g(2, 2);
    CHECK_THROWS_AS(g.set_edge(0, 0, 0), ArgumentError);
    CHECK_THROWS_AS(g.set_edge(3, 0, 0), ArgumentError);
    CHECK_THROWS_AS(g.has_edge(1, 2, 0), ArgumentError);
    CHECK(g.cells().size() == 8);
    CHECK(LaggedGraph::fully_connected(2, 2).edge_count() == 8);
    const auto edges = LaggedGraph::from_edges(2, 2, {{2, 1, 0}, {1, 1, 1}, {1, 0, 1}}).edges();
    REQUIRE(edges.size() == 3);
    CHECK(edges[0] == LaggedEdge{1, 0, 1});
    CHECK(edges[1] == LaggedEdge{1, 1, 1});
    CHECK(edges[2] == LaggedEdge{2, 1, 0});
}
