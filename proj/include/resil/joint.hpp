#pragma once

// Control automata and the joint (system + environment) rule sets they
// induce. A backend never sees the automaton directly: it consumes the
// enriched rules, or the marked rules when the joint system is annotated.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace resil {

enum class Owner : std::uint8_t { sys, env };

/// Marker of the last applied rule's owner; `top` only on start states.
enum class Marker : std::uint8_t { top, sys, env };

inline constexpr Marker all_markers[] = {Marker::top, Marker::sys, Marker::env};

std::string_view to_string(Owner o);
std::string_view to_string(Marker m);
std::optional<Owner> parse_owner(std::string_view s);
std::optional<Marker> parse_marker(std::string_view s);

constexpr Marker marker_of(Owner o) { return o == Owner::sys ? Marker::sys : Marker::env; }

using StateId = int;

class ControlAutomaton {
public:
    struct Edge {
        StateId from;
        StateId to;
        std::vector<std::string> select;

        friend bool operator==(const Edge&, const Edge&) = default;
    };

    ControlAutomaton() = default;
    ControlAutomaton(std::vector<std::string> states, StateId initial, std::vector<Edge> edges);

    /// Single state with a self-loop selecting every given rule name. Used
    /// when a model carries no automaton.
    static ControlAutomaton universal(const std::vector<std::string>& rule_names);

    const std::vector<std::string>& states() const noexcept { return states_; }
    StateId initial() const noexcept { return initial_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::optional<StateId> find_state(std::string_view name) const;
    const std::string& state_name(StateId q) const { return states_.at(static_cast<std::size_t>(q)); }

    /// The automaton with every edge reversed; select sets are unchanged.
    ControlAutomaton reversed() const;

    friend bool operator==(const ControlAutomaton&, const ControlAutomaton&) = default;

private:
    std::vector<std::string> states_;
    StateId initial_ = 0;
    std::vector<Edge> edges_;
};

/// ⟨(L,q) ⇀ (R,q')⟩ for one automaton edge and one selected rule.
struct EnrichedRule {
    std::size_t rule; // index into the combined rule list
    StateId from;
    StateId to;
    Owner owner;

    friend bool operator==(const EnrichedRule&, const EnrichedRule&) = default;
};

/// Enriched rule with a marker on each side.
struct MarkedRule {
    EnrichedRule base;
    Marker left;
    Marker right;

    friend bool operator==(const MarkedRule&, const MarkedRule&) = default;
};

struct NamedRule {
    std::string name;
    Owner owner;
};

/// One enriched rule per (edge, selected name). Throws ValidationError when
/// a selected name is unknown or sys/env names clash.
std::vector<EnrichedRule> enrich(const std::vector<NamedRule>& rules, const ControlAutomaton& automaton);

/// Each enriched rule triplicated over the left marker; the right marker is
/// the rule owner's.
std::vector<MarkedRule> annotate(const std::vector<EnrichedRule>& enriched);

/// Unannotated view: the marker fields are ignored by backends.
std::vector<MarkedRule> unmarked(const std::vector<EnrichedRule>& enriched);

} // namespace resil
