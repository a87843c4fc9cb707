#include "resil/spo.hpp"

#include "resil/error.hpp"
#include "resil/order.hpp"

#include <algorithm>

namespace resil::gts {

namespace {

struct SubgraphOrder {
    bool leq(const Graph& a, const Graph& b) const { return embeds(a, b); }
};

} // namespace

void validate(const Rule& r) {
    std::vector<Diagnostic> diags;
    const auto loc = "/rules/" + r.name;
    auto fail = [&](std::string msg) { diags.push_back({loc, "rule '" + r.name + "': " + std::move(msg)}); };
    if (r.node_map.size() != r.left.node_count() || r.edge_map.size() != r.left.edge_count()) {
        fail("map does not cover the left-hand side");
        throw ValidationError(std::move(diags));
    }
    std::vector<bool> hit(r.right.node_count(), false);
    for (std::size_t v = 0; v < r.node_map.size(); ++v) {
        const NodeId w = r.node_map[v];
        if (w < 0) continue;
        if (static_cast<std::size_t>(w) >= r.right.node_count()) {
            fail("node map target out of range");
            continue;
        }
        if (hit[static_cast<std::size_t>(w)]) fail("not injective on its domain");
        hit[static_cast<std::size_t>(w)] = true;
        if (r.left.node_label(static_cast<NodeId>(v)) != r.right.node_label(w)) fail("node map changes a label");
    }
    std::vector<bool> ehit(r.right.edge_count(), false);
    for (std::size_t e = 0; e < r.edge_map.size(); ++e) {
        const EdgeId f = r.edge_map[e];
        if (f < 0) continue;
        if (static_cast<std::size_t>(f) >= r.right.edge_count()) {
            fail("edge map target out of range");
            continue;
        }
        if (ehit[static_cast<std::size_t>(f)]) fail("not injective on its domain");
        ehit[static_cast<std::size_t>(f)] = true;
        const auto& le = r.left.edge(static_cast<EdgeId>(e));
        const auto& re = r.right.edge(f);
        if (le.label != re.label) fail("edge map changes a label");
        const NodeId ms = r.node_map[static_cast<std::size_t>(le.src)];
        const NodeId mt = r.node_map[static_cast<std::size_t>(le.tgt)];
        if (ms < 0 || mt < 0)
            fail("edge mapped while an endpoint is deleted");
        else if (ms != re.src || mt != re.tgt)
            fail("edge map does not preserve incidence");
    }
    if (!diags.empty()) throw ValidationError(std::move(diags));
}

Rule inverse(const Rule& r) {
    validate(r);
    Rule inv;
    inv.name = r.name;
    inv.owner = r.owner;
    inv.left = r.right;
    inv.right = r.left;
    inv.node_map.assign(r.right.node_count(), -1);
    inv.edge_map.assign(r.right.edge_count(), -1);
    for (std::size_t v = 0; v < r.node_map.size(); ++v)
        if (r.node_map[v] >= 0) inv.node_map[static_cast<std::size_t>(r.node_map[v])] = static_cast<NodeId>(v);
    for (std::size_t e = 0; e < r.edge_map.size(); ++e)
        if (r.edge_map[e] >= 0) inv.edge_map[static_cast<std::size_t>(r.edge_map[e])] = static_cast<EdgeId>(e);
    return inv;
}

bool GraphClass::contains(const Graph& g) const {
    if (!max_label_count.empty()) {
        std::map<Label, std::size_t> count;
        for (Label l : g.node_labels()) ++count[l];
        for (const auto& [l, bound] : max_label_count) {
            auto it = count.find(l);
            if (it != count.end() && it->second > bound) return false;
        }
    }
    if (max_path_length && g.node_count() > *max_path_length + 1 && longest_path(g) > *max_path_length)
        return false;
    return true;
}

std::optional<Graph> GraphClass::admit(const Graph& g) const {
    Graph q = quotient_isolated(g, quotient_labels);
    if (!contains(q)) return std::nullopt;
    return canonical(q);
}

bool is_match(const Rule& r, const Graph& g, const Morphism& m) {
    if (m.nodes.size() != r.left.node_count() || m.edges.size() != r.left.edge_count()) return false;
    std::vector<bool> used(g.node_count(), false);
    for (std::size_t v = 0; v < m.nodes.size(); ++v) {
        const NodeId x = m.nodes[v];
        if (x < 0 || static_cast<std::size_t>(x) >= g.node_count() || used[static_cast<std::size_t>(x)]) return false;
        used[static_cast<std::size_t>(x)] = true;
        if (g.node_label(x) != r.left.node_label(static_cast<NodeId>(v))) return false;
    }
    std::vector<bool> eused(g.edge_count(), false);
    for (std::size_t e = 0; e < m.edges.size(); ++e) {
        const EdgeId f = m.edges[e];
        if (f < 0 || static_cast<std::size_t>(f) >= g.edge_count() || eused[static_cast<std::size_t>(f)]) return false;
        eused[static_cast<std::size_t>(f)] = true;
        const auto& le = r.left.edge(static_cast<EdgeId>(e));
        const auto& ge = g.edge(f);
        if (ge.label != le.label || ge.src != m.nodes[static_cast<std::size_t>(le.src)] ||
            ge.tgt != m.nodes[static_cast<std::size_t>(le.tgt)])
            return false;
    }
    return true;
}

std::vector<Morphism> matches(const Rule& r, const Graph& g) { return node_embeddings(r.left, g); }

Graph apply(const Rule& r, const Graph& g, const Morphism& match) {
    if (!is_match(r, g, match)) throw Error("invalid match for rule '" + r.name + "'");
    std::vector<bool> drop_nodes(g.node_count(), false);
    std::vector<bool> drop_edges(g.edge_count(), false);
    for (std::size_t v = 0; v < r.node_map.size(); ++v)
        if (r.node_map[v] < 0) drop_nodes[static_cast<std::size_t>(match.nodes[v])] = true;
    for (std::size_t e = 0; e < r.edge_map.size(); ++e)
        if (r.edge_map[e] < 0) drop_edges[static_cast<std::size_t>(match.edges[e])] = true;
    std::vector<NodeId> nmap;
    Graph h = remove_items(g, drop_nodes, drop_edges, &nmap);

    std::vector<NodeId> right_to_h(r.right.node_count(), -1);
    for (std::size_t v = 0; v < r.node_map.size(); ++v)
        if (r.node_map[v] >= 0)
            right_to_h[static_cast<std::size_t>(r.node_map[v])] = nmap[static_cast<std::size_t>(match.nodes[v])];
    for (std::size_t w = 0; w < r.right.node_count(); ++w)
        if (right_to_h[w] < 0) right_to_h[w] = h.add_node(r.right.node_labels()[w]);
    std::vector<bool> preserved(r.right.edge_count(), false);
    for (EdgeId f : r.edge_map)
        if (f >= 0) preserved[static_cast<std::size_t>(f)] = true;
    for (std::size_t f = 0; f < r.right.edge_count(); ++f) {
        if (preserved[f]) continue;
        const auto& e = r.right.edges()[f];
        h.add_edge(right_to_h[static_cast<std::size_t>(e.src)], right_to_h[static_cast<std::size_t>(e.tgt)], e.label);
    }
    return h;
}

std::vector<Graph> successors(const Rule& r, const Graph& g, const GraphClass& cls) {
    std::vector<Graph> out;
    for (const auto& m : matches(r, g))
        if (auto h = cls.admit(apply(r, g, m))) out.push_back(std::move(*h));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Graph> pre_step_rule(const Rule& r, const Graph& s, const GraphClass& cls, std::size_t overlap_cap) {
    std::vector<bool> created_node(r.right.node_count(), true);
    std::vector<bool> created_edge(r.right.edge_count(), true);
    std::vector<NodeId> left_of_right(r.right.node_count(), -1);
    for (std::size_t v = 0; v < r.node_map.size(); ++v)
        if (r.node_map[v] >= 0) {
            created_node[static_cast<std::size_t>(r.node_map[v])] = false;
            left_of_right[static_cast<std::size_t>(r.node_map[v])] = static_cast<NodeId>(v);
        }
    for (EdgeId f : r.edge_map)
        if (f >= 0) created_edge[static_cast<std::size_t>(f)] = false;

    std::vector<Graph> candidates;
    for (const auto& o : overlaps(r.right, s, overlap_cap)) {
        const Graph& u = o.graph;
        std::vector<bool> drop_nodes(u.node_count(), false);
        std::vector<bool> drop_edges(u.edge_count(), false);
        std::vector<bool> from_rule_edge(u.edge_count(), false);
        for (std::size_t w = 0; w < created_node.size(); ++w)
            if (created_node[w]) drop_nodes[static_cast<std::size_t>(o.from_a.nodes[w])] = true;
        for (std::size_t f = 0; f < created_edge.size(); ++f) {
            const auto ue = static_cast<std::size_t>(o.from_a.edges[f]);
            from_rule_edge[ue] = true;
            if (created_edge[f]) drop_edges[ue] = true;
        }
        // a created node has no edges besides the ones the rule creates
        bool reject = false;
        for (std::size_t i = 0; i < u.edge_count() && !reject; ++i) {
            if (from_rule_edge[i]) continue;
            const auto& e = u.edges()[i];
            reject = drop_nodes[static_cast<std::size_t>(e.src)] || drop_nodes[static_cast<std::size_t>(e.tgt)];
        }
        if (reject) continue;

        std::vector<NodeId> nmap;
        Graph g = remove_items(u, drop_nodes, drop_edges, &nmap);
        // glue the deleted part of L back in
        std::vector<NodeId> left_to_g(r.left.node_count(), -1);
        for (std::size_t v = 0; v < r.left.node_count(); ++v) {
            const NodeId w = r.node_map[v];
            left_to_g[v] = w >= 0 ? nmap[static_cast<std::size_t>(o.from_a.nodes[static_cast<std::size_t>(w)])]
                                  : g.add_node(r.left.node_labels()[v]);
        }
        for (std::size_t e = 0; e < r.left.edge_count(); ++e) {
            if (r.edge_map[e] >= 0) continue;
            const auto& le = r.left.edges()[e];
            g.add_edge(left_to_g[static_cast<std::size_t>(le.src)], left_to_g[static_cast<std::size_t>(le.tgt)],
                       le.label);
        }
        if (auto adm = cls.admit(g)) candidates.push_back(std::move(*adm));
    }
    return minimize(std::move(candidates), SubgraphOrder{}).elements();
}

} // namespace resil::gts
