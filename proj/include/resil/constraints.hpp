#pragma once

// Basic constraints ∃G / ¬∃G under ∧ and ∨, their ideal bases, and the
// anti-ideals used as bad sets.

#include "resil/engine.hpp"
#include "resil/error.hpp"
#include "resil/joint.hpp"
#include "resil/order.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace resil {

enum class Polarity { positive, negative, mixed };

template <class S>
struct Constraint {
    enum class Kind { exists, not_exists, all_of, any_of };

    Kind kind = Kind::all_of;
    S atom{}; // exists / not_exists
    std::vector<Constraint> children;

    static Constraint exists(S s) { return {Kind::exists, std::move(s), {}}; }
    static Constraint not_exists(S s) { return {Kind::not_exists, std::move(s), {}}; }
    static Constraint all_of(std::vector<Constraint> cs) { return {Kind::all_of, S{}, std::move(cs)}; }
    static Constraint any_of(std::vector<Constraint> cs) { return {Kind::any_of, S{}, std::move(cs)}; }

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Positive when only ∃ occurs, negative when only ¬∃ occurs. Empty
/// conjunctions and disjunctions fit either polarity; they count as positive.
template <class S>
Polarity polarity(const Constraint<S>& c) {
    using K = typename Constraint<S>::Kind;
    switch (c.kind) {
    case K::exists: return Polarity::positive;
    case K::not_exists: return Polarity::negative;
    default: break;
    }
    std::optional<Polarity> seen;
    for (const auto& ch : c.children) {
        auto p = polarity(ch);
        if (p == Polarity::mixed || (seen && *seen != p)) return Polarity::mixed;
        seen = p;
    }
    return seen.value_or(Polarity::positive);
}

template <class S, class W>
    requires Wqo<W, S>
bool satisfies(const S& s, const Constraint<S>& c, const W& order) {
    using K = typename Constraint<S>::Kind;
    switch (c.kind) {
    case K::exists: return order.leq(c.atom, s);
    case K::not_exists: return !order.leq(c.atom, s);
    case K::all_of:
        return std::all_of(c.children.begin(), c.children.end(),
                           [&](const Constraint<S>& ch) { return satisfies(s, ch, order); });
    case K::any_of:
        return std::any_of(c.children.begin(), c.children.end(),
                           [&](const Constraint<S>& ch) { return satisfies(s, ch, order); });
    }
    return false;
}

/// Basis of I_c. ∃G gives {G}, ∨ the union, ∧ the intersection. Atoms are
/// taken as given; callers normalize them into the state space first.
template <class S, class W>
    requires JoinableWqo<W, S>
Basis<S> ideal_basis_of(const Constraint<S>& c, const W& order) {
    using K = typename Constraint<S>::Kind;
    switch (c.kind) {
    case K::exists: return Basis<S>::from_antichain({c.atom});
    case K::not_exists: break;
    case K::any_of: {
        Basis<S> acc;
        for (const auto& ch : c.children) acc = ideal_union_basis(acc, ideal_basis_of(ch, order), order);
        return acc;
    }
    case K::all_of: {
        if (c.children.empty()) throw Error("empty conjunction has no finite ideal basis over this order");
        auto acc = ideal_basis_of(c.children.front(), order);
        for (std::size_t i = 1; i < c.children.size(); ++i)
            acc = ideal_intersection_basis(acc, ideal_basis_of(c.children[i], order), order);
        return acc;
    }
    }
    throw Error("a negative constraint does not describe an ideal");
}

/// J_c for a negative constraint.
template <class S, class W>
    requires Wqo<W, S>
AntiIdeal<S> anti_ideal_of(Constraint<S> c, const W& order) {
    if (polarity(c) != Polarity::negative)
        throw Error("bad set must be given by a negative constraint (only \"not_exists\" under and/or)");
    return [c = std::move(c), order](const S& s) { return satisfies(s, c, order); };
}

/// Error-state mode: J = S \ ↑B0.
template <class S, class W>
    requires Wqo<W, S>
AntiIdeal<S> error_anti_ideal(Basis<S> b0, const W& order) {
    return [b0 = std::move(b0), order](const S& s) { return !covers(b0, s, order); };
}

template <class S>
std::optional<StateId> control_state_of(const S& s) {
    return std::optional<StateId>(s.state);
}

/// Adverse-conditions mode: automaton state in `states` and marker in
/// `markers`; an empty set does not restrict. Both components are compared
/// by equality in every backend order, so the set is downward closed.
template <class S>
AntiIdeal<S> adverse_anti_ideal(std::set<StateId> states, std::set<Marker> markers) {
    return [states = std::move(states), markers = std::move(markers)](const S& s) {
        if (!states.empty()) {
            auto q = control_state_of(s);
            if (!q || !states.count(*q)) return false;
        }
        if (!markers.empty()) {
            if (!s.marker || !markers.count(*s.marker)) return false;
        }
        return true;
    };
}

} // namespace resil
