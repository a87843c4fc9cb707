#pragma once

// Single-pushout rewriting with injective rules and injective matches, the
// graph class a system lives in, and the overlap-based backward step.

#include "resil/graph.hpp"
#include "resil/joint.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace resil::gts {

/// r = ⟨L ⇀ R⟩. Maps give the image of each left item in R, or -1 when the
/// item is deleted. Right items outside the image are created.
struct Rule {
    std::string name;
    Graph left;
    Graph right;
    std::vector<NodeId> node_map;
    std::vector<EdgeId> edge_map;
    Owner owner = Owner::sys;

    friend bool operator==(const Rule&, const Rule&) = default;
};

/// Throws ValidationError unless the map is injective on its domain,
/// preserves labels and incidence, and maps edges only between mapped nodes.
void validate(const Rule& r);

/// ⟨R ⇀ L⟩ for a rule injective on its domain.
Rule inverse(const Rule& r);

/// The states of a graph transition system: graphs of bounded path length,
/// optionally with per-label node-count bounds, modulo isolated nodes
/// carrying one of the quotient labels.
struct GraphClass {
    std::optional<std::size_t> max_path_length;
    std::map<Label, std::size_t> max_label_count;
    std::set<Label> quotient_labels;

    bool contains(const Graph& g) const;
    /// Quotient, class check, canonical form. nullopt when outside the class.
    std::optional<Graph> admit(const Graph& g) const;

    friend bool operator==(const GraphClass&, const GraphClass&) = default;
};

bool is_match(const Rule& r, const Graph& g, const Morphism& m);

/// Matches up to the choice among parallel identical edges.
std::vector<Morphism> matches(const Rule& r, const Graph& g);

/// SPO application: delete unmapped left items and dangling edges, add
/// created right items. Throws Error on an invalid match. Not canonicalized.
Graph apply(const Rule& r, const Graph& g, const Morphism& match);

/// Canonical successors of g under r, restricted to the class.
std::vector<Graph> successors(const Rule& r, const Graph& g, const GraphClass& cls);

/// Basis of the class graphs G with G ⇒_r H for some H ⊇ s: one candidate
/// per overlap of R and s, minimized under the subgraph order and sorted
/// canonically. `overlap_cap` bounds overlap sizes (0 = none).
std::vector<Graph> pre_step_rule(const Rule& r, const Graph& s, const GraphClass& cls,
                                 std::size_t overlap_cap = 0);

} // namespace resil::gts
