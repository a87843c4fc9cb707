#include "resil/graph.hpp"

#include "resil/error.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>

namespace resil::gts {

NodeId Graph::add_node(Label label) {
    labels_.push_back(label);
    return static_cast<NodeId>(labels_.size() - 1);
}

EdgeId Graph::add_edge(NodeId src, NodeId tgt, Label label) {
    const auto n = static_cast<NodeId>(labels_.size());
    if (src < 0 || src >= n || tgt < 0 || tgt >= n) throw Error("edge endpoint does not exist");
    edges_.push_back({src, tgt, label});
    return static_cast<EdgeId>(edges_.size() - 1);
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

struct Incidence {
    int dir; // 0 = outgoing, 1 = incoming
    Label label;
    NodeId other;
};

std::vector<std::vector<Incidence>> incidences(const Graph& g) {
    std::vector<std::vector<Incidence>> inc(g.node_count());
    for (const auto& e : g.edges()) {
        inc[static_cast<std::size_t>(e.src)].push_back({0, e.label, e.tgt});
        inc[static_cast<std::size_t>(e.tgt)].push_back({1, e.label, e.src});
    }
    return inc;
}

std::size_t count_distinct(std::vector<long long> v) {
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

/// Equitable refinement; returns colors renumbered 0..k-1 by sorted
/// signature, so the result is invariant under isomorphism.
std::vector<long long> refine(const std::vector<std::vector<Incidence>>& inc, std::vector<long long> colors) {
    const std::size_t n = colors.size();
    std::size_t classes = count_distinct(colors);
    while (true) {
        std::vector<std::vector<long long>> sig(n);
        for (std::size_t v = 0; v < n; ++v) {
            std::vector<std::tuple<int, Label, long long>> nb;
            nb.reserve(inc[v].size());
            for (const auto& i : inc[v]) nb.emplace_back(i.dir, i.label, colors[static_cast<std::size_t>(i.other)]);
            std::sort(nb.begin(), nb.end());
            auto& s = sig[v];
            s.reserve(1 + 3 * nb.size());
            s.push_back(colors[v]);
            for (const auto& [d, l, c] : nb) {
                s.push_back(d);
                s.push_back(static_cast<long long>(l));
                s.push_back(c);
            }
        }
        auto sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<long long> next(n);
        for (std::size_t v = 0; v < n; ++v)
            next[v] = std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin();
        // signatures start with the old color, so the partition only splits
        if (sorted.size() == classes) return next;
        classes = sorted.size();
        colors = std::move(next);
    }
}

Graph relabel(const Graph& g, const std::vector<NodeId>& perm) {
    std::vector<Label> labels(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v) labels[static_cast<std::size_t>(perm[v])] = g.node_labels()[v];
    std::vector<Edge> edges;
    edges.reserve(g.edge_count());
    for (const auto& e : g.edges())
        edges.push_back({perm[static_cast<std::size_t>(e.src)], perm[static_cast<std::size_t>(e.tgt)], e.label});
    std::sort(edges.begin(), edges.end());
    Graph out;
    for (Label l : labels) out.add_node(l);
    for (const auto& e : edges) out.add_edge(e.src, e.tgt, e.label);
    return out;
}

class Canonizer {
public:
    explicit Canonizer(const Graph& g) : g_(g), inc_(incidences(g)), sorted_edges_(g.edges()) {
        std::sort(sorted_edges_.begin(), sorted_edges_.end());
    }

    CanonicalForm run() {
        std::vector<long long> colors(g_.node_count());
        for (std::size_t v = 0; v < colors.size(); ++v) colors[v] = g_.node_labels()[v];
        search(std::move(colors));
        return {std::move(*best_), std::move(best_perm_)};
    }

private:
    // Swapping u and v is an automorphism.
    bool twins(NodeId u, NodeId v) const {
        if (g_.node_label(u) != g_.node_label(v)) return false;
        auto sw = [&](NodeId x) { return x == u ? v : (x == v ? u : x); };
        std::vector<Edge> swapped;
        swapped.reserve(sorted_edges_.size());
        for (const auto& e : sorted_edges_) swapped.push_back({sw(e.src), sw(e.tgt), e.label});
        std::sort(swapped.begin(), swapped.end());
        return swapped == sorted_edges_;
    }

    void search(std::vector<long long> colors) {
        colors = refine(inc_, std::move(colors));
        const std::size_t n = colors.size();
        std::map<long long, std::vector<NodeId>> cells;
        for (std::size_t v = 0; v < n; ++v) cells[colors[v]].push_back(static_cast<NodeId>(v));
        const std::vector<NodeId>* target = nullptr;
        for (const auto& [c, members] : cells)
            if (members.size() > 1) {
                target = &members;
                break;
            }
        if (!target) {
            std::vector<NodeId> perm(n);
            for (std::size_t v = 0; v < n; ++v) perm[v] = static_cast<NodeId>(colors[v]);
            Graph cand = relabel(g_, perm);
            if (!best_ || cand < *best_) {
                best_ = std::move(cand);
                best_perm_ = std::move(perm);
            }
            return;
        }
        std::vector<NodeId> reps;
        for (NodeId v : *target) {
            bool covered = std::any_of(reps.begin(), reps.end(), [&](NodeId r) { return twins(r, v); });
            if (!covered) reps.push_back(v);
        }
        const auto cell = *target;
        for (NodeId v : reps) {
            std::vector<long long> c2(n);
            for (std::size_t x = 0; x < n; ++x) c2[x] = colors[x] * 2;
            for (NodeId x : cell)
                if (x != v) c2[static_cast<std::size_t>(x)] += 1;
            search(std::move(c2));
        }
    }

    const Graph& g_;
    std::vector<std::vector<Incidence>> inc_;
    std::vector<Edge> sorted_edges_;
    std::optional<Graph> best_;
    std::vector<NodeId> best_perm_;
};

} // namespace

CanonicalForm canonical_form(const Graph& g) { return Canonizer(g).run(); }

bool isomorphic(const Graph& a, const Graph& b) {
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
    return canonical(a) == canonical(b);
}

// ---------------------------------------------------------------------------
// Embeddings

namespace {

/// Edge multiplicities per ordered node pair and label.
class PairCounts {
public:
    explicit PairCounts(const Graph& g) : n_(g.node_count()), cells_(n_ * n_) {
        for (const auto& e : g.edges()) {
            auto& cell = cells_[idx(e.src, e.tgt)];
            auto it = std::find_if(cell.begin(), cell.end(), [&](const auto& p) { return p.first == e.label; });
            if (it == cell.end())
                cell.emplace_back(e.label, 1u);
            else
                ++it->second;
        }
    }

    std::uint32_t count(NodeId u, NodeId v, Label l) const {
        for (const auto& [lab, c] : cells_[idx(u, v)])
            if (lab == l) return c;
        return 0;
    }

    const std::vector<std::pair<Label, std::uint32_t>>& cell(NodeId u, NodeId v) const { return cells_[idx(u, v)]; }

private:
    std::size_t idx(NodeId u, NodeId v) const {
        return static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v);
    }
    std::size_t n_;
    std::vector<std::vector<std::pair<Label, std::uint32_t>>> cells_;
};

struct Constraint {
    std::size_t other_pos; // position in the search order (== own position for loops)
    Label label;
    std::uint32_t out; // edges node -> other
    std::uint32_t in;  // edges other -> node (unused for loops)
};

class NodeMatcher {
public:
    NodeMatcher(const Graph& p, const Graph& t) : p_(p), t_(t), pc_(p), tc_(t) {
        const auto np = p.node_count();
        const auto nt = t.node_count();
        pout_.assign(np, 0);
        pin_.assign(np, 0);
        tout_.assign(nt, 0);
        tin_.assign(nt, 0);
        for (const auto& e : p.edges()) {
            ++pout_[static_cast<std::size_t>(e.src)];
            ++pin_[static_cast<std::size_t>(e.tgt)];
        }
        for (const auto& e : t.edges()) {
            ++tout_[static_cast<std::size_t>(e.src)];
            ++tin_[static_cast<std::size_t>(e.tgt)];
        }
        build_order();
    }

    /// Calls `visit` with every injective node mapping satisfying all edge
    /// multiplicity constraints. `visit` returns false to stop.
    void run(const std::function<bool(const std::vector<NodeId>&)>& visit) {
        if (p_.node_count() > t_.node_count() || p_.edge_count() > t_.edge_count()) return;
        if (!label_counts_fit()) return;
        assign_.assign(p_.node_count(), -1);
        used_.assign(t_.node_count(), false);
        stop_ = false;
        extend(0, visit);
    }

private:
    bool label_counts_fit() const {
        std::map<Label, long> count;
        for (Label l : p_.node_labels()) ++count[l];
        for (Label l : t_.node_labels()) --count[l];
        for (const auto& [l, c] : count)
            if (c > 0) return false;
        return true;
    }

    void build_order() {
        const auto np = p_.node_count();
        std::vector<bool> placed(np, false);
        std::vector<std::size_t> links(np, 0);
        auto deg = [&](std::size_t v) { return pout_[v] + pin_[v]; };
        for (std::size_t step = 0; step < np; ++step) {
            std::size_t best = np;
            for (std::size_t v = 0; v < np; ++v) {
                if (placed[v]) continue;
                if (best == np || links[v] > links[best] || (links[v] == links[best] && deg(v) > deg(best)))
                    best = v;
            }
            placed[best] = true;
            pos_of_.resize(np);
            pos_of_[best] = order_.size();
            order_.push_back(static_cast<NodeId>(best));
            for (const auto& e : p_.edges()) {
                if (static_cast<std::size_t>(e.src) == best) ++links[static_cast<std::size_t>(e.tgt)];
                if (static_cast<std::size_t>(e.tgt) == best) ++links[static_cast<std::size_t>(e.src)];
            }
        }
        constraints_.resize(np);
        for (std::size_t i = 0; i < np; ++i) {
            const NodeId u = order_[i];
            for (std::size_t j = 0; j <= i; ++j) {
                const NodeId w = order_[j];
                std::map<Label, std::pair<std::uint32_t, std::uint32_t>> per_label;
                for (const auto& [l, c] : pc_.cell(u, w)) per_label[l].first += c;
                if (w != u)
                    for (const auto& [l, c] : pc_.cell(w, u)) per_label[l].second += c;
                for (const auto& [l, oc] : per_label) constraints_[i].push_back({j, l, oc.first, oc.second});
            }
        }
    }

    void extend(std::size_t i, const std::function<bool(const std::vector<NodeId>&)>& visit) {
        if (stop_) return;
        if (i == order_.size()) {
            if (!visit(assign_)) stop_ = true;
            return;
        }
        const NodeId u = order_[i];
        const auto uu = static_cast<std::size_t>(u);
        for (std::size_t x = 0; x < t_.node_count(); ++x) {
            if (used_[x] || t_.node_labels()[x] != p_.node_labels()[uu]) continue;
            if (tout_[x] < pout_[uu] || tin_[x] < pin_[uu]) continue;
            const auto xn = static_cast<NodeId>(x);
            bool ok = true;
            for (const auto& c : constraints_[i]) {
                const NodeId w = order_[c.other_pos];
                const NodeId y = (w == u) ? xn : assign_[static_cast<std::size_t>(w)];
                if (tc_.count(xn, y, c.label) < c.out || (w != u && tc_.count(y, xn, c.label) < c.in)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            assign_[uu] = xn;
            used_[x] = true;
            extend(i + 1, visit);
            used_[x] = false;
            assign_[uu] = -1;
            if (stop_) return;
        }
    }

    const Graph& p_;
    const Graph& t_;
    PairCounts pc_;
    PairCounts tc_;
    std::vector<std::uint32_t> pout_, pin_, tout_, tin_;
    std::vector<NodeId> order_;
    std::vector<std::size_t> pos_of_;
    std::vector<std::vector<Constraint>> constraints_;
    std::vector<NodeId> assign_;
    std::vector<bool> used_;
    bool stop_ = false;
};

using EdgeKey = std::tuple<NodeId, NodeId, Label>;

std::map<EdgeKey, std::vector<EdgeId>> group_edges(const Graph& g) {
    std::map<EdgeKey, std::vector<EdgeId>> out;
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const auto& e = g.edges()[i];
        out[{e.src, e.tgt, e.label}].push_back(static_cast<EdgeId>(i));
    }
    return out;
}

} // namespace

std::vector<Morphism> node_embeddings(const Graph& p, const Graph& t) {
    std::vector<Morphism> out;
    const auto pg = group_edges(p);
    const auto tg = group_edges(t);
    NodeMatcher(p, t).run([&](const std::vector<NodeId>& nodes) {
        Morphism m{nodes, std::vector<EdgeId>(p.edge_count(), -1)};
        for (const auto& [key, pedges] : pg) {
            const auto& [s, g, l] = key;
            const auto& tedges = tg.at({nodes[static_cast<std::size_t>(s)], nodes[static_cast<std::size_t>(g)], l});
            for (std::size_t k = 0; k < pedges.size(); ++k) m.edges[static_cast<std::size_t>(pedges[k])] = tedges[k];
        }
        out.push_back(std::move(m));
        return true;
    });
    return out;
}

std::vector<Morphism> embeddings(const Graph& p, const Graph& t) {
    std::vector<Morphism> out;
    const auto pg = group_edges(p);
    const auto tg = group_edges(t);
    NodeMatcher(p, t).run([&](const std::vector<NodeId>& nodes) {
        // every injective assignment of each pattern edge group into its
        // target group
        std::vector<std::pair<const std::vector<EdgeId>*, const std::vector<EdgeId>*>> groups;
        for (const auto& [key, pedges] : pg) {
            const auto& [s, g, l] = key;
            groups.emplace_back(&pedges, &tg.at({nodes[static_cast<std::size_t>(s)],
                                                 nodes[static_cast<std::size_t>(g)], l}));
        }
        Morphism m{nodes, std::vector<EdgeId>(p.edge_count(), -1)};
        std::function<void(std::size_t, std::size_t, std::vector<bool>&)> rec;
        rec = [&](std::size_t gi, std::size_t k, std::vector<bool>& used) {
            if (gi == groups.size()) {
                out.push_back(m);
                return;
            }
            const auto& [pe, te] = groups[gi];
            if (k == pe->size()) {
                std::vector<bool> fresh(groups.size() > gi + 1 ? groups[gi + 1].second->size() : 0, false);
                rec(gi + 1, 0, fresh);
                return;
            }
            for (std::size_t j = 0; j < te->size(); ++j) {
                if (used[j]) continue;
                used[j] = true;
                m.edges[static_cast<std::size_t>((*pe)[k])] = (*te)[j];
                rec(gi, k + 1, used);
                used[j] = false;
            }
        };
        std::vector<bool> used0(groups.empty() ? 0 : groups[0].second->size(), false);
        rec(0, 0, used0);
        return true;
    });
    return out;
}

bool embeds(const Graph& p, const Graph& t) {
    bool found = false;
    NodeMatcher(p, t).run([&](const std::vector<NodeId>&) {
        found = true;
        return false;
    });
    return found;
}

// ---------------------------------------------------------------------------
// Structure

std::size_t longest_path(const Graph& g) {
    const auto inc = incidences(g);
    const auto n = g.node_count();
    std::vector<bool> on_path(n, false);
    std::size_t best = 0;
    std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t v, std::size_t len) {
        best = std::max(best, len);
        if (best + 1 == n) return; // cannot do better than a Hamiltonian path
        on_path[v] = true;
        for (const auto& i : inc[v]) {
            const auto w = static_cast<std::size_t>(i.other);
            if (!on_path[w]) dfs(w, len + 1);
        }
        on_path[v] = false;
    };
    for (std::size_t v = 0; v < n && best + 1 < n; ++v) dfs(v, 0);
    return best;
}

Graph remove_items(const Graph& g, const std::vector<bool>& drop_nodes, const std::vector<bool>& drop_edges,
                   std::vector<NodeId>* node_map, std::vector<EdgeId>* edge_map) {
    Graph out;
    std::vector<NodeId> nmap(g.node_count(), -1);
    for (std::size_t v = 0; v < g.node_count(); ++v)
        if (v >= drop_nodes.size() || !drop_nodes[v]) nmap[v] = out.add_node(g.node_labels()[v]);
    std::vector<EdgeId> emap(g.edge_count(), -1);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        if (i < drop_edges.size() && drop_edges[i]) continue;
        const auto& e = g.edges()[i];
        const NodeId s = nmap[static_cast<std::size_t>(e.src)];
        const NodeId t = nmap[static_cast<std::size_t>(e.tgt)];
        if (s < 0 || t < 0) continue;
        emap[i] = out.add_edge(s, t, e.label);
    }
    if (node_map) *node_map = std::move(nmap);
    if (edge_map) *edge_map = std::move(emap);
    return out;
}

Graph quotient_isolated(const Graph& g, const std::set<Label>& labels) {
    if (labels.empty()) return g;
    std::vector<bool> touched(g.node_count(), false);
    for (const auto& e : g.edges()) {
        touched[static_cast<std::size_t>(e.src)] = true;
        touched[static_cast<std::size_t>(e.tgt)] = true;
    }
    std::vector<bool> drop(g.node_count(), false);
    bool any = false;
    for (std::size_t v = 0; v < g.node_count(); ++v)
        if (!touched[v] && labels.count(g.node_labels()[v])) any = drop[v] = true;
    if (!any) return g;
    return remove_items(g, drop, {});
}

Graph disjoint_union(const Graph& a, const Graph& b) {
    Graph out = a;
    const auto shift = static_cast<NodeId>(a.node_count());
    for (Label l : b.node_labels()) out.add_node(l);
    for (const auto& e : b.edges()) out.add_edge(e.src + shift, e.tgt + shift, e.label);
    return out;
}

// ---------------------------------------------------------------------------
// Overlaps

std::vector<Overlap> overlaps(const Graph& a, const Graph& b, std::size_t node_cap) {
    std::vector<Overlap> out;
    const auto na = a.node_count();
    const auto nb = b.node_count();
    const auto ag = group_edges(a);
    const auto bg = group_edges(b);
    std::vector<NodeId> f(na, -1);
    std::vector<bool> used(nb, false);

    auto emit = [&](std::size_t mapped) {
        const std::size_t size = nb + (na - mapped);
        if (node_cap != 0 && size > node_cap)
            throw LimitExceeded("overlap of " + std::to_string(size) + " nodes exceeds the cap of " +
                                std::to_string(node_cap));
        // groups of a's edges whose endpoints are both identified, with how
        // many b-edges are available for identification
        std::vector<std::pair<const std::vector<EdgeId>*, const std::vector<EdgeId>*>> choice;
        for (const auto& [key, aedges] : ag) {
            const auto& [s, t, l] = key;
            const NodeId fs = f[static_cast<std::size_t>(s)];
            const NodeId ft = f[static_cast<std::size_t>(t)];
            if (fs < 0 || ft < 0) continue;
            auto it = bg.find({fs, ft, l});
            if (it != bg.end()) choice.emplace_back(&aedges, &it->second);
        }
        std::vector<std::size_t> take(choice.size(), 0);
        while (true) {
            Overlap o;
            o.graph = b;
            o.from_b.nodes.resize(nb);
            std::iota(o.from_b.nodes.begin(), o.from_b.nodes.end(), 0);
            o.from_b.edges.resize(b.edge_count());
            std::iota(o.from_b.edges.begin(), o.from_b.edges.end(), 0);
            o.from_a.nodes.assign(na, -1);
            o.from_a.edges.assign(a.edge_count(), -1);
            for (std::size_t v = 0; v < na; ++v)
                o.from_a.nodes[v] = f[v] >= 0 ? f[v] : o.graph.add_node(a.node_labels()[v]);
            for (std::size_t c = 0; c < choice.size(); ++c)
                for (std::size_t k = 0; k < take[c]; ++k)
                    o.from_a.edges[static_cast<std::size_t>((*choice[c].first)[k])] = (*choice[c].second)[k];
            for (std::size_t i = 0; i < a.edge_count(); ++i) {
                if (o.from_a.edges[i] >= 0) continue;
                const auto& e = a.edges()[i];
                o.from_a.edges[i] = o.graph.add_edge(o.from_a.nodes[static_cast<std::size_t>(e.src)],
                                                     o.from_a.nodes[static_cast<std::size_t>(e.tgt)], e.label);
            }
            out.push_back(std::move(o));
            // next combination of identification counts
            std::size_t c = 0;
            for (; c < choice.size(); ++c) {
                const auto limit = std::min(choice[c].first->size(), choice[c].second->size());
                if (take[c] < limit) {
                    ++take[c];
                    break;
                }
                take[c] = 0;
            }
            if (c == choice.size()) break;
        }
    };

    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t v, std::size_t mapped) {
        if (v == na) {
            emit(mapped);
            return;
        }
        f[v] = -1;
        rec(v + 1, mapped);
        for (std::size_t x = 0; x < nb; ++x) {
            if (used[x] || b.node_labels()[x] != a.node_labels()[v]) continue;
            used[x] = true;
            f[v] = static_cast<NodeId>(x);
            rec(v + 1, mapped + 1);
            used[x] = false;
            f[v] = -1;
        }
    };
    rec(0, 0);
    return out;
}

} // namespace resil::gts
