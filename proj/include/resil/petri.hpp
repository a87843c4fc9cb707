#pragma once

// Place/transition nets, markings under the componentwise order, and the
// product of a net with a control automaton as an engine backend.

#include "resil/joint.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace resil::petri {

using Tokens = std::vector<std::uint32_t>;

struct Transition {
    std::string name;
    Tokens pre;  // weight consumed from each place
    Tokens post; // weight produced on each place
    Owner owner = Owner::sys;

    friend bool operator==(const Transition&, const Transition&) = default;
};

class PetriNet {
public:
    PetriNet() = default;
    /// Throws ValidationError on duplicate names or weight vectors of the
    /// wrong dimension.
    PetriNet(std::vector<std::string> places, std::vector<Transition> transitions);

    const std::vector<std::string>& places() const noexcept { return places_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    std::size_t dimension() const noexcept { return places_.size(); }

    /// Index of the named transition; throws Error if unknown.
    std::size_t transition_index(const std::string& name) const;
    std::optional<std::size_t> place_index(const std::string& name) const;

    friend bool operator==(const PetriNet&, const PetriNet&) = default;

private:
    std::vector<std::string> places_;
    std::vector<Transition> transitions_;
};

/// Token vector, optionally paired with an automaton state and a marker.
/// The optional parts take part in the order as equality components.
struct Marking {
    Tokens tokens;
    std::optional<StateId> state;
    std::optional<Marker> marker;

    friend auto operator<=>(const Marking&, const Marking&) = default;
    friend bool operator==(const Marking&, const Marking&) = default;
};

bool enabled(const PetriNet& net, const Tokens& m, std::size_t t);
bool enabled(const PetriNet& net, const Tokens& m, const std::string& t);

/// Throws Error when t is not enabled in m.
Tokens fire(const PetriNet& net, const Tokens& m, std::size_t t);
Tokens fire(const PetriNet& net, const Tokens& m, const std::string& t);

/// Componentwise ≤ on tokens, equality on state and marker. Throws Error on
/// a dimension mismatch.
bool leq_pn(const Marking& a, const Marking& b);

/// Least marking that enables t and whose successor covers m:
/// max(m - post(t), 0) + pre(t).
Tokens pre_basis_t(const PetriNet& net, const Tokens& m, std::size_t t);

/// Every transition with pre and post swapped.
PetriNet invert(const PetriNet& net);

/// Synchronous product of a net with a control automaton. Steps are
/// (M,q[,m]) -> (M',q'[,owner(t)]) for (q,q') an automaton edge selecting
/// t with M[t>M'. A reversed product runs every step backwards; its
/// backward saturation computes forward reachability of the original.
class PetriProduct {
public:
    using State = Marking;

    PetriProduct(PetriNet net, ControlAutomaton automaton, bool annotate);

    const PetriNet& net() const noexcept { return net_; }
    const ControlAutomaton& automaton() const noexcept { return automaton_; }
    bool annotated() const noexcept { return annotate_; }
    bool is_reversed() const noexcept { return reversed_; }

    bool leq(const Marking& a, const Marking& b) const { return leq_pn(a, b); }
    /// Basis of ↑{a} ∩ ↑{b}: the componentwise max, if state/marker agree.
    std::vector<Marking> join(const Marking& a, const Marking& b) const;

    /// Generating set of ↑pre(↑{s}); the engine minimizes.
    std::vector<Marking> pre_basis(const Marking& s) const;
    std::vector<Marking> post_step(const Marking& s) const;

    bool invertible() const noexcept { return true; }
    PetriProduct inverted() const;

    /// Start marking with the automaton's initial state (and ⊤ if annotated).
    Marking start(Tokens tokens) const;

private:
    PetriNet net_;
    PetriNet net_inv_;
    ControlAutomaton automaton_;
    bool annotate_;
    bool reversed_ = false;
    std::vector<EnrichedRule> enriched_;
    std::vector<MarkedRule> marked_;
};

} // namespace resil::petri
