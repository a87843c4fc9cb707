#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "resil/error.hpp"

using namespace resil;
using petri::Marking;
using petri::Tokens;

TEST_CASE("enabled and fire on the supply chain") {
    auto sc = testing::supply_chain();
    const auto& net = sc.backend.net();
    const Tokens m0{0, 1, 1, 1};
    CHECK_FALSE(petri::enabled(net, m0, "tr"));
    CHECK(petri::enabled(net, m0, "sh1"));
    CHECK(petri::enabled(net, m0, "pr"));
    CHECK(petri::fire(net, m0, "sh1") == Tokens{0, 0, 2, 1});
    CHECK(petri::fire(net, m0, "pr") == Tokens{1, 1, 1, 1});
    CHECK_THROWS_AS(petri::fire(net, m0, "tr"), Error);
    CHECK_THROWS_AS(petri::enabled(net, m0, "nope"), Error);
}

TEST_CASE("identity transition leaves the marking unchanged") {
    petri::PetriNet net({"a", "b"}, {{"loop", {1, 2}, {1, 2}, Owner::sys}});
    CHECK(petri::fire(net, {3, 2}, "loop") == Tokens{3, 2});
}

TEST_CASE("leq_pn") {
    CHECK(petri::leq_pn({{0, 1, 1, 1}, 0, std::nullopt}, {{0, 5, 1, 1}, 0, std::nullopt}));
    CHECK_FALSE(petri::leq_pn({{0, 1, 1, 1}, 0, std::nullopt}, {{9, 9, 9, 9}, 1, std::nullopt}));
    CHECK_FALSE(petri::leq_pn({{0, 0, 2, 0}, 0, std::nullopt}, {{0, 0, 1, 2}, 0, std::nullopt}));
    CHECK_FALSE(petri::leq_pn({{0, 0, 1, 2}, 0, std::nullopt}, {{0, 0, 2, 0}, 0, std::nullopt}));
    CHECK_FALSE(petri::leq_pn({{0}, 0, Marker::sys}, {{0}, 0, Marker::env}));
    CHECK_THROWS_AS(petri::leq_pn({{0}, 0, std::nullopt}, {{0, 0}, 0, std::nullopt}), Error);
}

TEST_CASE("pre_basis_t examples") {
    auto sc = testing::supply_chain();
    const auto& net = sc.backend.net();
    const auto tr = net.transition_index("tr");
    const Tokens m{0, 1, 1, 1};
    CHECK(petri::pre_basis_t(net, m, tr) == Tokens{1, 0, 1, 1});
    CHECK(petri::pre_basis_t(net, {0, 0, 0, 0}, net.transition_index("pr")) == Tokens{0, 0, 0, 0});

    // minimal markings on the grid ≤ (3,3,3,3) that fire tr into ↑m
    std::vector<Tokens> good;
    oracle::for_each_point(4, 3, [&](const Tokens& x) {
        auto y = oracle::fire_by_hand(net.transitions()[tr], x);
        if (y && oracle::geq(*y, m)) good.push_back(x);
    });
    std::vector<Tokens> minimal;
    for (const auto& x : good)
        if (std::none_of(good.begin(), good.end(), [&](const Tokens& y) { return y != x && oracle::geq(x, y); }))
            minimal.push_back(x);
    CHECK(minimal == std::vector<Tokens>{{1, 0, 1, 1}});
}

TEST_CASE("pre_basis_t is exact on grids") {
    oracle::Rng rng(11);
    for (int round = 0; round < 300; ++round) {
        const std::size_t dim = oracle::uniform(rng, 1, 3);
        std::vector<std::string> places;
        for (std::size_t i = 0; i < dim; ++i) places.push_back("p" + std::to_string(i));
        auto t = oracle::random_transition(rng, dim, 2, "t");
        petri::PetriNet net(places, {t});
        Tokens m;
        for (std::size_t i = 0; i < dim; ++i) m.push_back(static_cast<std::uint32_t>(oracle::uniform(rng, 0, 3)));
        const auto b = petri::pre_basis_t(net, m, 0);
        oracle::for_each_point(dim, 4, [&](const Tokens& x) {
            auto y = oracle::fire_by_hand(t, x);
            CHECK(oracle::geq(x, b) == (y && oracle::geq(*y, m)));
        });
    }
}

TEST_CASE("invert is an involution and reverses firing") {
    auto sc = testing::supply_chain();
    const auto& net = sc.backend.net();
    CHECK(petri::invert(petri::invert(net)) == net);
    const auto inv = petri::invert(net);
    const auto& tr = inv.transitions()[net.transition_index("tr")];
    CHECK(tr.pre == Tokens{0, 1, 0, 0});
    CHECK(tr.post == Tokens{1, 0, 0, 0});

    oracle::Rng rng(5);
    int fired = 0;
    while (fired < 1000) {
        const std::size_t dim = oracle::uniform(rng, 1, 4);
        std::vector<std::string> places;
        for (std::size_t i = 0; i < dim; ++i) places.push_back("p" + std::to_string(i));
        petri::PetriNet n(places, {oracle::random_transition(rng, dim, 3, "t")});
        Tokens m;
        for (std::size_t i = 0; i < dim; ++i) m.push_back(static_cast<std::uint32_t>(oracle::uniform(rng, 0, 4)));
        if (!petri::enabled(n, m, 0)) continue;
        ++fired;
        auto m2 = petri::fire(n, m, 0);
        auto ni = petri::invert(n);
        REQUIRE(petri::enabled(ni, m2, 0));
        CHECK(petri::fire(ni, m2, 0) == m);
    }
}

TEST_CASE("product steps and pre-basis of the safety element") {
    auto sc = testing::supply_chain();
    // B¹ ∩ J from one backward step of the safety basis
    std::vector<Marking> gen(sc.safety.begin(), sc.safety.end());
    for (const auto& b : sc.safety)
        for (auto& p : sc.backend.pre_basis(b)) gen.push_back(p);
    auto b1 = minimize(gen, sc.backend);
    std::vector<Tokens> at_e;
    for (const auto& m : b1)
        if (m.state == sc.e) at_e.push_back(m.tokens);
    CHECK(at_e == std::vector<Tokens>{{0, 1, 1, 1}, {0, 2, 0, 1}, {0, 2, 1, 0}});
}

TEST_CASE("the narrated 17-step recovery of the supply chain") {
    auto sc = testing::supply_chain();
    std::vector<std::string> plan;
    for (int i = 0; i < 3; ++i)
        for (const char* t : {"pr", "tr", "pr", "tr", "ac"}) plan.push_back(t);
    plan.push_back("sh1");
    plan.push_back("sh2");
    REQUIRE(plan.size() == 17);
    Marking s = sc.backend.start({0, 0, 0, 0});
    const auto& net = sc.backend.net();
    for (const auto& t : plan) {
        auto next = petri::fire(net, s.tokens, t);
        auto succ = sc.backend.post_step(s);
        auto it = std::find_if(succ.begin(), succ.end(), [&](const Marking& x) { return x.tokens == next; });
        REQUIRE(it != succ.end());
        s = *it;
    }
    CHECK(s.tokens == Tokens{0, 1, 1, 1});
    CHECK(covers(sc.safety, s, sc.backend));
}

TEST_CASE("empty select sets give no steps") {
    petri::PetriNet net({"a"}, {{"t", {0}, {1}, Owner::sys}});
    ControlAutomaton a({"q"}, 0, {{0, 0, {}}});
    petri::PetriProduct prod(net, a, false);
    CHECK(prod.post_step(prod.start({0})).empty());
    CHECK(prod.pre_basis(prod.start({0})).empty());
}

TEST_CASE("unknown names are rejected") {
    petri::PetriNet net({"a"}, {{"t", {0}, {1}, Owner::sys}});
    CHECK_THROWS_AS(petri::PetriProduct(net, ControlAutomaton({"q"}, 0, {{0, 0, {"u"}}}), false), ValidationError);
    CHECK_THROWS_AS(petri::PetriNet({"a", "a"}, {}), ValidationError);
    CHECK_THROWS_AS(petri::PetriNet({"a"}, {{"t", {0, 1}, {1}, Owner::sys}}), ValidationError);
}

TEST_CASE("strong compatibility and marker invariant of random products") {
    oracle::Rng rng(3);
    for (int round = 0; round < 200; ++round) {
        auto jp = oracle::random_joint_petri(rng);
        petri::PetriProduct prod(jp.net, jp.automaton, jp.annotate);
        Marking s = prod.start(jp.start);
        for (int step = 0; step < 8; ++step) {
            auto succ = prod.post_step(s);
            // the product's successors agree with firing by hand
            auto by_hand = oracle::successors_by_hand(jp, s);
            std::sort(by_hand.begin(), by_hand.end());
            by_hand.erase(std::unique(by_hand.begin(), by_hand.end()), by_hand.end());
            CHECK(succ == by_hand);
            // a bigger state simulates every step
            Marking big = s;
            for (auto& x : big.tokens) x += static_cast<std::uint32_t>(oracle::uniform(rng, 0, 2));
            auto bsucc = prod.post_step(big);
            for (const auto& n : succ)
                CHECK(std::any_of(bsucc.begin(), bsucc.end(), [&](const Marking& b) { return prod.leq(n, b); }));
            if (succ.empty()) break;
            s = succ[oracle::uniform(rng, 0, succ.size() - 1)];
            if (jp.annotate) CHECK(s.marker != Marker::top);
        }
    }
}

TEST_CASE("pre_basis of random products is sound and complete on grids") {
    oracle::Rng rng(19);
    for (int round = 0; round < 60; ++round) {
        auto jp = oracle::random_joint_petri(rng);
        petri::PetriProduct prod(jp.net, jp.automaton, jp.annotate);
        const auto dim = jp.net.dimension();
        Tokens target;
        for (std::size_t i = 0; i < dim; ++i) target.push_back(static_cast<std::uint32_t>(oracle::uniform(rng, 0, 2)));
        const StateId q = static_cast<StateId>(oracle::uniform(rng, 0, jp.automaton.states().size() - 1));
        std::optional<Marker> mk;
        if (jp.annotate) mk = all_markers[oracle::uniform(rng, 1, 2)];
        Marking s{target, q, mk};
        auto pre = minimize(prod.pre_basis(s), prod);
        for (StateId from = 0; from < static_cast<StateId>(jp.automaton.states().size()); ++from) {
            std::vector<std::optional<Marker>> markers{std::nullopt};
            if (jp.annotate) markers = {Marker::top, Marker::sys, Marker::env};
            for (auto m : markers)
                oracle::for_each_point(dim, 4, [&](const Tokens& x) {
                    Marking g{x, from, m};
                    auto succ = oracle::successors_by_hand(jp, g);
                    bool reaches = std::any_of(succ.begin(), succ.end(), [&](const Marking& h) {
                        return h.state == s.state && h.marker == s.marker && oracle::geq(h.tokens, s.tokens);
                    });
                    CHECK(covers(pre, g, prod) == reaches);
                });
        }
    }
}
