#pragma once

// Shared builders for the unit and acceptance tests.

#include "resil/engine.hpp"
#include "resil/petri.hpp"

#include <string>
#include <vector>

namespace resil::testing {

struct SupplyChain {
    petri::PetriProduct backend;
    Basis<petri::Marking> safety;
    std::vector<petri::Marking> b_post;
    petri::Marking start;
    StateId e;
};

inline SupplyChain supply_chain() {
    using petri::Transition;
    // places P, W, S1, S2
    std::vector<Transition> ts{
        {"pr", {0, 0, 0, 0}, {1, 0, 0, 0}, Owner::sys},  {"tr", {1, 0, 0, 0}, {0, 1, 0, 0}, Owner::sys},
        {"sh1", {0, 1, 0, 0}, {0, 0, 1, 0}, Owner::sys}, {"sh2", {0, 1, 0, 0}, {0, 0, 0, 1}, Owner::sys},
        {"ac", {0, 1, 0, 0}, {0, 0, 0, 0}, Owner::env},  {"b1", {0, 0, 1, 0}, {0, 0, 0, 0}, Owner::env},
        {"b2", {0, 0, 0, 1}, {0, 0, 0, 0}, Owner::env},
    };
    petri::PetriNet net({"P", "W", "S1", "S2"}, ts);
    std::vector<std::string> qs{"e", "p", "pt", "ptp", "ptpt", "d", "dp", "dd"};
    auto q = [&](const std::string& n) {
        for (std::size_t i = 0; i < qs.size(); ++i)
            if (qs[i] == n) return static_cast<StateId>(i);
        return -1;
    };
    std::vector<ControlAutomaton::Edge> es{
        {q("e"), q("p"), {"pr"}},           {q("p"), q("pt"), {"tr"}},
        {q("pt"), q("ptp"), {"pr"}},        {q("ptp"), q("ptpt"), {"tr"}},
        {q("d"), q("dp"), {"pr"}},          {q("dp"), q("dd"), {"tr"}},
        {q("e"), q("d"), {"sh1", "sh2"}},   {q("d"), q("dd"), {"sh1", "sh2"}},
        {q("pt"), q("dd"), {"sh1", "sh2"}}, {q("ptpt"), q("e"), {"ac", "b1", "b2"}},
        {q("dd"), q("e"), {"b1", "b2"}},
    };
    ControlAutomaton a(qs, q("e"), es);
    petri::PetriProduct prod(net, a, false);

    std::vector<petri::Marking> b0;
    for (StateId i = 0; i < static_cast<StateId>(qs.size()); ++i) b0.push_back({{0, 1, 1, 1}, i, std::nullopt});
    auto safety = minimize(b0, prod);

    std::vector<petri::Tokens> post{{0, 1, 1, 1}, {0, 5, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 3}, {0, 1, 2, 0},
                                    {0, 1, 0, 2}, {0, 0, 2, 1}, {0, 0, 1, 2}, {0, 3, 1, 0}, {0, 3, 0, 1}};
    std::vector<petri::Marking> bp;
    for (auto& t : post) bp.push_back({t, q("e"), std::nullopt});
    auto start = prod.start({0, 1, 1, 1});
    return {std::move(prod), std::move(safety), std::move(bp), std::move(start), q("e")};
}

} // namespace resil::testing
