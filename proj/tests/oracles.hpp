#pragma once

// Brute-force oracles and random generators. Nothing here calls the
// backend step functions under test: firing, coverage, embeddings and
// overlaps are recomputed from the definitions.

#include "resil/constraints.hpp"
#include "resil/engine.hpp"
#include "resil/graph.hpp"
#include "resil/petri.hpp"
#include "resil/spo.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace resil::oracle {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// ---- vectors ---------------------------------------------------------------

inline void for_each_point(std::size_t dim, std::uint32_t max, const std::function<void(const petri::Tokens&)>& fn) {
    petri::Tokens v(dim, 0);
    while (true) {
        fn(v);
        std::size_t i = 0;
        for (; i < dim; ++i) {
            if (v[i] < max) {
                ++v[i];
                break;
            }
            v[i] = 0;
        }
        if (i == dim) return;
    }
}

inline bool geq(const petri::Tokens& a, const petri::Tokens& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] < b[i]) return false;
    return true;
}

inline std::optional<petri::Tokens> fire_by_hand(const petri::Transition& t, const petri::Tokens& m) {
    petri::Tokens out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] < t.pre[i]) return std::nullopt;
        out[i] = m[i] - t.pre[i] + t.post[i];
    }
    return out;
}

inline petri::Transition random_transition(Rng& rng, std::size_t dim, std::uint32_t max_w, std::string name) {
    petri::Transition t;
    t.name = std::move(name);
    for (std::size_t i = 0; i < dim; ++i) {
        t.pre.push_back(static_cast<std::uint32_t>(uniform(rng, 0, max_w)));
        t.post.push_back(static_cast<std::uint32_t>(uniform(rng, 0, max_w)));
    }
    t.owner = uniform(rng, 0, 1) ? Owner::env : Owner::sys;
    return t;
}

// ---- random joint Petri models and the forward oracle ------------------------

struct JointPetri {
    petri::PetriNet net;
    ControlAutomaton automaton;
    bool annotate = false;
    petri::Tokens start;
    std::vector<petri::Marking> safety;     // generators of I
    bool error_mode = false;
    std::set<StateId> bad_states;           // adverse mode
    std::set<Marker> bad_markers;           // adverse mode
};

inline JointPetri random_joint_petri(Rng& rng) {
    JointPetri m;
    const std::size_t dim = uniform(rng, 1, 3);
    std::vector<std::string> places;
    for (std::size_t i = 0; i < dim; ++i) places.push_back("p" + std::to_string(i));
    std::vector<petri::Transition> ts;
    const std::size_t nt = uniform(rng, 1, 4);
    for (std::size_t i = 0; i < nt; ++i) {
        auto t = random_transition(rng, dim, 2, "t" + std::to_string(i));
        // keep most nets from pumping tokens without bound
        if (uniform(rng, 0, 3) != 0)
            for (std::size_t p = 0; p < dim; ++p) t.post[p] = std::min(t.post[p], t.pre[p]);
        ts.push_back(std::move(t));
    }
    m.net = petri::PetriNet(places, ts);
    const std::size_t nq = uniform(rng, 1, 3);
    std::vector<std::string> qs;
    for (std::size_t i = 0; i < nq; ++i) qs.push_back("q" + std::to_string(i));
    std::vector<ControlAutomaton::Edge> edges;
    for (std::size_t a = 0; a < nq; ++a)
        for (std::size_t b = 0; b < nq; ++b) {
            if (uniform(rng, 0, 2) == 0) continue;
            ControlAutomaton::Edge e{static_cast<StateId>(a), static_cast<StateId>(b), {}};
            for (const auto& t : ts)
                if (uniform(rng, 0, 1)) e.select.push_back(t.name);
            edges.push_back(std::move(e));
        }
    m.automaton = ControlAutomaton(qs, 0, edges);
    m.annotate = uniform(rng, 0, 2) == 0;
    for (std::size_t i = 0; i < dim; ++i) m.start.push_back(static_cast<std::uint32_t>(uniform(rng, 0, 2)));
    const std::size_t ns = uniform(rng, 1, 2);
    for (std::size_t i = 0; i < ns; ++i) {
        petri::Tokens v;
        for (std::size_t p = 0; p < dim; ++p) v.push_back(static_cast<std::uint32_t>(uniform(rng, 0, 1)));
        for (StateId q = 0; q < static_cast<StateId>(nq); ++q) {
            if (uniform(rng, 0, 3) == 0) continue;
            if (m.annotate) {
                for (Marker mk : all_markers) m.safety.push_back({v, q, mk});
            } else {
                m.safety.push_back({v, q, std::nullopt});
            }
        }
    }
    m.error_mode = uniform(rng, 0, 1) == 0;
    if (!m.error_mode) {
        m.bad_states.insert(static_cast<StateId>(uniform(rng, 0, nq - 1)));
        if (m.annotate && uniform(rng, 0, 1)) m.bad_markers.insert(Marker::env);
    }
    return m;
}

inline bool in_safety(const JointPetri& m, const petri::Marking& s) {
    return std::any_of(m.safety.begin(), m.safety.end(), [&](const petri::Marking& b) {
        return b.state == s.state && b.marker == s.marker && geq(s.tokens, b.tokens);
    });
}

inline bool in_bad(const JointPetri& m, const petri::Marking& s) {
    if (m.error_mode) return !in_safety(m, s);
    if (!m.bad_states.empty() && !m.bad_states.count(*s.state)) return false;
    if (!m.bad_markers.empty() && (!s.marker || !m.bad_markers.count(*s.marker))) return false;
    return true;
}

inline std::vector<petri::Marking> successors_by_hand(const JointPetri& m, const petri::Marking& s) {
    std::vector<petri::Marking> out;
    for (const auto& e : m.automaton.edges()) {
        if (e.from != *s.state) continue;
        for (const auto& name : e.select)
            for (const auto& t : m.net.transitions())
                if (t.name == name)
                    if (auto next = fire_by_hand(t, s.tokens)) {
                        std::optional<Marker> mk;
                        if (m.annotate) mk = t.owner == Owner::sys ? Marker::sys : Marker::env;
                        out.push_back({*next, e.to, mk});
                    }
    }
    return out;
}

struct ForwardAnswer {
    bool finite = false;                     // state space within the cap
    std::optional<std::size_t> k;            // nullopt: unbounded
    std::vector<petri::Marking> reachable;
};

/// Explicit-state answer: the largest, over reachable bad states, of the
/// shortest distance to the safety ideal.
inline ForwardAnswer forward_oracle(const JointPetri& m, std::size_t cap) {
    ForwardAnswer ans;
    petri::Marking s0{m.start, m.automaton.initial(),
                      m.annotate ? std::optional<Marker>(Marker::top) : std::nullopt};
    std::map<petri::Marking, std::size_t> id{{s0, 0}};
    std::vector<petri::Marking> states{s0};
    std::vector<std::vector<std::size_t>> preds(1);
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (auto& n : successors_by_hand(m, states[i])) {
            auto [it, fresh] = id.emplace(n, states.size());
            if (fresh) {
                if (states.size() >= cap) return ans;
                states.push_back(n);
                preds.emplace_back();
            }
            preds[it->second].push_back(i);
        }
    }
    ans.finite = true;
    std::vector<std::size_t> dist(states.size(), SIZE_MAX);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < states.size(); ++i)
        if (in_safety(m, states[i])) {
            dist[i] = 0;
            queue.push_back(i);
        }
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        for (auto p : preds[v])
            if (dist[p] == SIZE_MAX) {
                dist[p] = dist[v] + 1;
                queue.push_back(p);
            }
    }
    std::size_t worst = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (!in_bad(m, states[i])) continue;
        if (dist[i] == SIZE_MAX) {
            ans.k.reset();
            ans.reachable = states;
            return ans;
        }
        worst = std::max(worst, dist[i]);
    }
    ans.k = worst;
    ans.reachable = states;
    return ans;
}

// ---- graphs ----------------------------------------------------------------

/// Injective node maps by exhaustive search; edges counted per
/// (source, target, label) so parallel edges need enough partners.
inline bool embeds_by_permutation(const gts::Graph& p, const gts::Graph& t) {
    const auto n = p.node_count(), m = t.node_count();
    if (n > m) return false;
    std::map<std::tuple<int, int, gts::Label>, std::size_t> tc;
    for (const auto& e : t.edges()) ++tc[{e.src, e.tgt, e.label}];
    std::vector<int> f(n, -1);
    std::vector<bool> used(m, false);
    std::function<bool(std::size_t)> go = [&](std::size_t v) {
        if (v == n) {
            std::map<std::tuple<int, int, gts::Label>, std::size_t> pc;
            for (const auto& e : p.edges()) ++pc[{f[static_cast<std::size_t>(e.src)], f[static_cast<std::size_t>(e.tgt)], e.label}];
            for (const auto& [k, c] : pc) {
                auto it = tc.find(k);
                if (it == tc.end() || it->second < c) return false;
            }
            return true;
        }
        for (std::size_t x = 0; x < m; ++x) {
            if (used[x] || p.node_label(static_cast<int>(v)) != t.node_label(static_cast<int>(x))) continue;
            used[x] = true;
            f[v] = static_cast<int>(x);
            if (go(v + 1)) return true;
            used[x] = false;
        }
        return false;
    };
    return go(0);
}

inline gts::Graph random_graph(Rng& rng, std::size_t max_nodes, std::size_t max_edges, std::size_t node_labels,
                               std::size_t edge_labels = 1, bool loops = false) {
    gts::Graph g;
    const auto n = uniform(rng, 0, max_nodes);
    for (std::size_t i = 0; i < n; ++i) g.add_node(static_cast<gts::Label>(uniform(rng, 0, node_labels - 1)));
    if (n == 0) return g;
    const auto ne = uniform(rng, 0, max_edges);
    for (std::size_t i = 0; i < ne; ++i) {
        auto s = static_cast<int>(uniform(rng, 0, n - 1));
        auto t = static_cast<int>(uniform(rng, 0, n - 1));
        if (s == t && !loops) continue;
        g.add_edge(s, t, static_cast<gts::Label>(uniform(rng, 0, edge_labels - 1)));
    }
    return g;
}

inline gts::Graph permuted(const gts::Graph& g, Rng& rng) {
    std::vector<int> perm(g.node_count());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
    gts::Graph h;
    for (std::size_t i = 0; i < perm.size(); ++i) h.add_node(g.node_label(inv[i]));
    auto edges = g.edges();
    std::shuffle(edges.begin(), edges.end(), rng);
    for (const auto& e : edges) h.add_edge(perm[static_cast<std::size_t>(e.src)], perm[static_cast<std::size_t>(e.tgt)], e.label);
    return h;
}

/// Every graph with at most `max_nodes` nodes and `max_edges` loop-free
/// edges (one edge label), one representative per isomorphism class.
inline std::vector<gts::Graph> graph_universe(std::size_t max_nodes, std::size_t max_edges, std::size_t node_labels) {
    std::set<gts::Graph> seen;
    for (std::size_t n = 0; n <= max_nodes; ++n) {
        std::vector<std::pair<int, int>> pairs;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (a != b) pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
        std::vector<gts::Label> labels(n, 0);
        while (true) {
            // nondecreasing labelings suffice up to isomorphism
            if (std::is_sorted(labels.begin(), labels.end())) {
                std::function<void(std::size_t, std::size_t, gts::Graph&)> add = [&](std::size_t from, std::size_t left,
                                                                                      gts::Graph& g) {
                    seen.insert(gts::canonical(g));
                    if (left == 0) return;
                    for (std::size_t i = from; i < pairs.size(); ++i) {
                        gts::Graph h = g;
                        h.add_edge(pairs[i].first, pairs[i].second, 0);
                        add(i, left - 1, h);
                    }
                };
                gts::Graph g;
                for (auto l : labels) g.add_node(l);
                add(0, max_edges, g);
            }
            std::size_t i = 0;
            for (; i < n; ++i) {
                if (labels[i] + 1 < node_labels) {
                    ++labels[i];
                    break;
                }
                labels[i] = 0;
            }
            if (i == n) break;
        }
    }
    return {seen.begin(), seen.end()};
}

/// A rule with small random sides, injective on its domain.
inline gts::Rule random_rule(Rng& rng, std::size_t node_labels) {
    gts::Rule r;
    r.name = "r";
    r.left = random_graph(rng, 3, 2, node_labels);
    const auto nl = r.left.node_count();
    r.node_map.assign(nl, -1);
    for (std::size_t v = 0; v < nl; ++v)
        if (uniform(rng, 0, 3) != 0) r.node_map[v] = r.right.add_node(r.left.node_label(static_cast<int>(v)));
    r.edge_map.assign(r.left.edge_count(), -1);
    for (std::size_t e = 0; e < r.left.edge_count(); ++e) {
        const auto& x = r.left.edge(static_cast<int>(e));
        const auto s = r.node_map[static_cast<std::size_t>(x.src)], t = r.node_map[static_cast<std::size_t>(x.tgt)];
        if (s >= 0 && t >= 0 && uniform(rng, 0, 2) != 0) r.edge_map[e] = r.right.add_edge(s, t, x.label);
    }
    const auto fresh = uniform(rng, 0, 1);
    for (std::size_t i = 0; i < fresh; ++i) r.right.add_node(static_cast<gts::Label>(uniform(rng, 0, node_labels - 1)));
    const auto nr = r.right.node_count();
    if (nr >= 2) {
        const auto extra = uniform(rng, 0, 2);
        for (std::size_t i = 0; i < extra; ++i) {
            auto s = static_cast<int>(uniform(rng, 0, nr - 1)), t = static_cast<int>(uniform(rng, 0, nr - 1));
            if (s != t) r.right.add_edge(s, t, 0);
        }
    }
    return r;
}

/// Results of applying r at every injective match, by hand: matches come
/// from the permutation search, application follows the SPO definition.
inline std::vector<gts::Graph> successors_by_hand(const gts::Rule& r, const gts::Graph& g) {
    std::vector<gts::Graph> out;
    const auto n = r.left.node_count(), m = g.node_count();
    std::vector<int> f(n, -1);
    std::vector<bool> used(m, false);
    std::function<void(std::size_t)> go = [&](std::size_t v) {
        if (v < n) {
            for (std::size_t x = 0; x < m; ++x) {
                if (used[x] || r.left.node_label(static_cast<int>(v)) != g.node_label(static_cast<int>(x))) continue;
                used[x] = true;
                f[v] = static_cast<int>(x);
                go(v + 1);
                used[x] = false;
            }
            return;
        }
        // assign left edges to distinct host edges, every choice
        std::vector<int> em(r.left.edge_count(), -1);
        std::vector<bool> eused(g.edge_count(), false);
        std::function<void(std::size_t)> edges = [&](std::size_t i) {
            if (i == em.size()) {
                std::vector<bool> dn(m, false), de(g.edge_count(), false);
                for (std::size_t v2 = 0; v2 < n; ++v2)
                    if (r.node_map[v2] < 0) dn[static_cast<std::size_t>(f[v2])] = true;
                for (std::size_t e = 0; e < em.size(); ++e)
                    if (r.edge_map[e] < 0) de[static_cast<std::size_t>(em[e])] = true;
                gts::Graph h;
                std::vector<int> keep(m, -1);
                for (std::size_t x = 0; x < m; ++x)
                    if (!dn[x]) keep[x] = h.add_node(g.node_label(static_cast<int>(x)));
                for (std::size_t e = 0; e < g.edge_count(); ++e) {
                    const auto& x = g.edge(static_cast<int>(e));
                    if (de[e] || keep[static_cast<std::size_t>(x.src)] < 0 || keep[static_cast<std::size_t>(x.tgt)] < 0) continue;
                    h.add_edge(keep[static_cast<std::size_t>(x.src)], keep[static_cast<std::size_t>(x.tgt)], x.label);
                }
                std::vector<int> rn(r.right.node_count(), -1);
                for (std::size_t v2 = 0; v2 < n; ++v2)
                    if (r.node_map[v2] >= 0) rn[static_cast<std::size_t>(r.node_map[v2])] = keep[static_cast<std::size_t>(f[v2])];
                for (std::size_t w = 0; w < rn.size(); ++w)
                    if (rn[w] < 0) rn[w] = h.add_node(r.right.node_label(static_cast<int>(w)));
                std::vector<bool> mapped(r.right.edge_count(), false);
                for (auto x : r.edge_map)
                    if (x >= 0) mapped[static_cast<std::size_t>(x)] = true;
                for (std::size_t e = 0; e < r.right.edge_count(); ++e) {
                    if (mapped[e]) continue;
                    const auto& x = r.right.edge(static_cast<int>(e));
                    h.add_edge(rn[static_cast<std::size_t>(x.src)], rn[static_cast<std::size_t>(x.tgt)], x.label);
                }
                out.push_back(std::move(h));
                return;
            }
            const auto& le = r.left.edge(static_cast<int>(i));
            for (std::size_t e = 0; e < g.edge_count(); ++e) {
                const auto& ge = g.edge(static_cast<int>(e));
                if (eused[e] || ge.label != le.label || ge.src != f[static_cast<std::size_t>(le.src)] ||
                    ge.tgt != f[static_cast<std::size_t>(le.tgt)])
                    continue;
                eused[e] = true;
                em[i] = static_cast<int>(e);
                edges(i + 1);
                eused[e] = false;
            }
        };
        edges(0);
    };
    go(0);
    return out;
}

} // namespace resil::oracle
