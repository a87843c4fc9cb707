#pragma once

// Directed, labeled multigraphs with canonical forms, injective morphisms
// (the subgraph order), and jointly surjective overlaps.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

namespace resil::gts {

using Label = std::uint32_t;
using NodeId = int;
using EdgeId = int;

struct Edge {
    NodeId src;
    NodeId tgt;
    Label label;

    friend auto operator<=>(const Edge&, const Edge&) = default;
    friend bool operator==(const Edge&, const Edge&) = default;
};

class Graph {
public:
    NodeId add_node(Label label);
    EdgeId add_edge(NodeId src, NodeId tgt, Label label);

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    Label node_label(NodeId v) const { return labels_.at(static_cast<std::size_t>(v)); }
    const Edge& edge(EdgeId e) const { return edges_.at(static_cast<std::size_t>(e)); }
    const std::vector<Label>& node_labels() const noexcept { return labels_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// Structural comparison of the stored representation. On canonical
    /// forms this is the canonical-encoding order.
    friend auto operator<=>(const Graph&, const Graph&) = default;
    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<Label> labels_;
    std::vector<Edge> edges_;
};

/// Total injective morphism given by its node and edge images.
struct Morphism {
    std::vector<NodeId> nodes;
    std::vector<EdgeId> edges;

    friend bool operator==(const Morphism&, const Morphism&) = default;
};

struct CanonicalForm {
    Graph graph;              // nodes renumbered, edges sorted
    std::vector<NodeId> perm; // original node -> canonical node
};

/// Canonical labeling by color refinement and individualization, pruning
/// branches on interchangeable (twin) nodes.
CanonicalForm canonical_form(const Graph& g);
inline Graph canonical(const Graph& g) { return canonical_form(g).graph; }
bool isomorphic(const Graph& a, const Graph& b);

/// All injective, label- and incidence-preserving morphisms p -> t,
/// including every choice among parallel target edges.
std::vector<Morphism> embeddings(const Graph& p, const Graph& t);

/// One morphism per node mapping; parallel edges are assigned in order.
/// Results of rule applications at two morphisms with the same node
/// mapping are isomorphic.
std::vector<Morphism> node_embeddings(const Graph& p, const Graph& t);

/// Subgraph order: p ↪ t exists.
bool embeds(const Graph& p, const Graph& t);

/// Length of a longest simple undirected path.
std::size_t longest_path(const Graph& g);

/// Removes isolated nodes whose label is in `labels`.
Graph quotient_isolated(const Graph& g, const std::set<Label>& labels);

/// Copy of g without the dropped items; edges at dropped nodes go too.
/// `node_map` receives old -> new ids (-1 for dropped nodes).
Graph remove_items(const Graph& g, const std::vector<bool>& drop_nodes, const std::vector<bool>& drop_edges,
                   std::vector<NodeId>* node_map = nullptr, std::vector<EdgeId>* edge_map = nullptr);

/// Disjoint union; b's ids are shifted by a's sizes.
Graph disjoint_union(const Graph& a, const Graph& b);

struct Overlap {
    Graph graph; // b's items keep their ids; a's extra items follow
    Morphism from_a;
    Morphism from_b;
};

/// Jointly surjective overlaps of a and b: every partial injective,
/// label-preserving identification of a's items with b's items (parallel
/// edges identified in order). Includes the disjoint union. Throws
/// LimitExceeded when an overlap would have more than `node_cap` nodes
/// (0 = no cap).
std::vector<Overlap> overlaps(const Graph& a, const Graph& b, std::size_t node_cap = 0);

} // namespace resil::gts
