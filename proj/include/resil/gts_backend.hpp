#pragma once

// Joint graph transition system as an engine backend. A state is a class
// graph in canonical form together with the automaton state and, for
// annotated systems, the marker. Automaton state and marker compare by
// equality, which is what a dedicated Q-node and marker node would do
// under the subgraph order.

#include "resil/joint.hpp"
#include "resil/spo.hpp"

#include <compare>
#include <optional>
#include <vector>

namespace resil::gts {

struct GraphState {
    Graph graph; // canonical
    StateId state = 0;
    std::optional<Marker> marker;

    friend auto operator<=>(const GraphState&, const GraphState&) = default;
    friend bool operator==(const GraphState&, const GraphState&) = default;
};

struct GtsLimits {
    std::size_t overlap_cap = 0; // 0 = |R| + |S|, i.e. no cap
};

class GtsBackend {
public:
    using State = GraphState;

    /// Validates every rule (injective on its domain) and the automaton's
    /// select sets. `invertible` asserts that every rule is reversible by
    /// its inverse on the class, i.e. applications never delete dangling
    /// edges; it enables over-approximation.
    GtsBackend(std::vector<Rule> rules, ControlAutomaton automaton, GraphClass cls, bool annotate,
               bool invertible = false, GtsLimits limits = {});

    const std::vector<Rule>& rules() const noexcept { return rules_; }
    const ControlAutomaton& automaton() const noexcept { return automaton_; }
    const GraphClass& graph_class() const noexcept { return class_; }
    bool annotated() const noexcept { return annotate_; }
    bool is_reversed() const noexcept { return reversed_; }

    bool leq(const GraphState& a, const GraphState& b) const;
    /// Basis of ↑{a} ∩ ↑{b}: class overlaps of the two graphs.
    std::vector<GraphState> join(const GraphState& a, const GraphState& b) const;

    std::vector<GraphState> pre_basis(const GraphState& s) const;
    std::vector<GraphState> post_step(const GraphState& s) const;

    bool invertible() const noexcept { return invertible_; }
    /// Throws Error when the system was not declared invertible.
    GtsBackend inverted() const;

    /// Class-normalized state; throws Error when g is outside the class.
    GraphState make_state(const Graph& g, StateId q, std::optional<Marker> marker) const;
    GraphState start(const Graph& g) const;

private:
    std::vector<Rule> rules_;
    std::vector<Rule> inverse_rules_;
    ControlAutomaton automaton_;
    GraphClass class_;
    bool annotate_;
    bool invertible_;
    GtsLimits limits_;
    bool reversed_ = false;
    std::vector<MarkedRule> marked_;
};

} // namespace resil::gts
