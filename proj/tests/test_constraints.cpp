#include "doctest.h"
#include "oracles.hpp"

#include "resil/constraints.hpp"
#include "resil/graph.hpp"

using namespace resil;
using gts::Graph;
using C = Constraint<Graph>;

namespace {

struct Subgraph {
    bool leq(const Graph& a, const Graph& b) const { return gts::embeds(a, b); }
    std::vector<Graph> join(const Graph& a, const Graph& b) const {
        std::vector<Graph> out;
        for (const auto& o : gts::overlaps(a, b)) out.push_back(gts::canonical(o.graph));
        return out;
    }
};

Graph node(gts::Label l) {
    Graph g;
    g.add_node(l);
    return g;
}

C random_positive(oracle::Rng& rng, int depth) {
    if (depth == 0 || oracle::uniform(rng, 0, 2) == 0)
        return C::exists(gts::canonical(oracle::random_graph(rng, 2, 1, 2)));
    std::vector<C> ch;
    for (std::size_t i = 0; i < oracle::uniform(rng, 1, 3); ++i) ch.push_back(random_positive(rng, depth - 1));
    return oracle::uniform(rng, 0, 1) ? C::all_of(std::move(ch)) : C::any_of(std::move(ch));
}

// ¬ pushed through: ∃ <-> ¬∃, ∧ <-> ∨
C dual(const C& c) {
    switch (c.kind) {
    case C::Kind::exists: return C::not_exists(c.atom);
    case C::Kind::not_exists: return C::exists(c.atom);
    default: break;
    }
    std::vector<C> ch;
    for (const auto& x : c.children) ch.push_back(dual(x));
    return c.kind == C::Kind::all_of ? C::any_of(std::move(ch)) : C::all_of(std::move(ch));
}

} // namespace

TEST_CASE("satisfies and polarity") {
    Subgraph w;
    Graph ab = node(0);
    ab.add_node(1);
    auto c = C::all_of({C::exists(node(0)), C::exists(node(1))});
    CHECK(satisfies(ab, c, w));
    CHECK_FALSE(satisfies(node(0), c, w));
    CHECK(satisfies(node(0), C::any_of({C::exists(node(0)), C::exists(node(1))}), w));
    CHECK(satisfies(node(0), C::not_exists(node(1)), w));
    CHECK(polarity(c) == Polarity::positive);
    CHECK(polarity(C::not_exists(node(1))) == Polarity::negative);
    CHECK(polarity(C::all_of({C::exists(node(0)), C::not_exists(node(1))})) == Polarity::mixed);
    CHECK(polarity(C::any_of({})) == Polarity::positive);
}

TEST_CASE("ideal bases of positive constraints") {
    Subgraph w;
    Graph ab = gts::canonical([] {
        Graph g = node(0);
        g.add_node(1);
        return g;
    }());
    auto b = ideal_basis_of(C::all_of({C::exists(node(0)), C::exists(node(1))}), w);
    REQUIRE(b.size() == 1);
    CHECK(gts::isomorphic(*b.begin(), ab));
    CHECK(ideal_basis_of(C::any_of({C::exists(node(0)), C::exists(ab)}), w).size() == 1);
    CHECK(ideal_basis_of(C::any_of({}), w).empty());
    CHECK_THROWS_AS(ideal_basis_of(C::all_of({}), w), Error);
    CHECK_THROWS_AS(ideal_basis_of(C::not_exists(node(0)), w), Error);
    CHECK_THROWS_AS(anti_ideal_of(C::exists(node(0)), w), Error);
}

TEST_CASE("covers agrees with satisfies on a bounded universe") {
    Subgraph w;
    oracle::Rng rng(71);
    const auto universe = oracle::graph_universe(4, 3, 2);
    for (int round = 0; round < 60; ++round) {
        auto c = random_positive(rng, 2);
        auto b = ideal_basis_of(c, w);
        auto bad = anti_ideal_of(dual(c), w);
        for (const auto& g : universe) {
            const bool sat = satisfies(g, c, w);
            CHECK(covers(b, g, w) == sat);
            // De Morgan: the dual holds exactly where c fails
            CHECK(bad(g) == !sat);
        }
    }
}

TEST_CASE("anti-ideals are downward closed") {
    Subgraph w;
    oracle::Rng rng(73);
    for (int round = 0; round < 200; ++round) {
        auto j = anti_ideal_of(dual(random_positive(rng, 2)), w);
        auto g = oracle::random_graph(rng, 4, 4, 2);
        if (!j(g)) continue;
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            std::vector<bool> dn(g.node_count(), false), de(g.edge_count(), false);
            dn[v] = true;
            CHECK(j(gts::remove_items(g, dn, de)));
        }
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            std::vector<bool> dn(g.node_count(), false), de(g.edge_count(), false);
            de[e] = true;
            CHECK(j(gts::remove_items(g, dn, de)));
        }
    }
}

TEST_CASE("error and adverse bad sets") {
    petri::Marking a{{1, 0}, 0, Marker::env}, b{{0, 0}, 1, Marker::sys};
    auto adverse = adverse_anti_ideal<petri::Marking>({0}, {Marker::env});
    CHECK(adverse(a));
    CHECK_FALSE(adverse(b));
    CHECK(adverse_anti_ideal<petri::Marking>({}, {})(b));
    CHECK(adverse_anti_ideal<petri::Marking>({}, {Marker::sys})(b));

    Subgraph w;
    auto err = error_anti_ideal(Basis<Graph>::from_antichain({node(0)}), w);
    CHECK(err(node(1)));
    CHECK_FALSE(err(node(0)));
}
