#include "resil/model.hpp"

#include "resil/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace resil {

namespace {

std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

std::string at(const std::string& base, const std::string& key) { return base + "/" + escape(key); }
std::string at(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

struct ParsedGraph {
    gts::Graph graph;
    std::map<std::string, gts::NodeId> nodes;
    std::map<std::string, gts::EdgeId> edges;
};

void collect_labels(const Json& j, std::set<std::string>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() == "label" && it.value().is_string()) out.insert(it.value().get<std::string>());
            collect_labels(it.value(), out);
        }
    } else if (j.is_array()) {
        for (const auto& x : j) collect_labels(x, out);
    }
}

class Parser {
public:
    explicit Parser(const Json& doc) : doc_(doc) {}

    Model run();

private:
    const Json& doc_;
    std::vector<Diagnostic> diags_;
    bool annotate_ = false;
    std::vector<std::string> labels_;
    std::map<std::string, gts::Label> label_ids_;

    void fail(std::string loc, std::string msg) { diags_.push_back({std::move(loc), std::move(msg)}); }

    void check() {
        if (!diags_.empty()) throw ValidationError(std::move(diags_));
    }

    bool expect_object(const Json& j, const std::string& loc) {
        if (j.is_object()) return true;
        fail(loc, "expected an object");
        return false;
    }

    bool expect_array(const Json& j, const std::string& loc) {
        if (j.is_array()) return true;
        fail(loc, "expected an array");
        return false;
    }

    void known_keys(const Json& obj, const std::string& loc, std::initializer_list<const char*> keys) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool ok = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; });
            if (!ok) fail(at(loc, it.key()), "unknown key '" + it.key() + "'");
        }
    }

    const Json* member(const Json& obj, const char* key, const std::string& loc) {
        if (!obj.is_object() || !obj.contains(key)) {
            fail(at(loc, key), std::string("missing '") + key + "'");
            return nullptr;
        }
        return &obj[key];
    }

    std::optional<std::string> string_of(const Json& j, const std::string& loc) {
        if (j.is_string()) return j.get<std::string>();
        fail(loc, "expected a string");
        return std::nullopt;
    }

    std::optional<std::size_t> count_of(const Json& j, const std::string& loc,
                                        std::size_t max = std::numeric_limits<std::size_t>::max()) {
        if (j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0)) {
            auto v = j.get<unsigned long long>();
            if (v <= max) return static_cast<std::size_t>(v);
            fail(loc, "value too large");
            return std::nullopt;
        }
        fail(loc, "expected a non-negative integer");
        return std::nullopt;
    }

    std::optional<bool> bool_of(const Json& j, const std::string& loc) {
        if (j.is_boolean()) return j.get<bool>();
        fail(loc, "expected true or false");
        return std::nullopt;
    }

    std::vector<std::string> unique_names(const Json& j, const std::string& loc, const char* what) {
        std::vector<std::string> out;
        if (!expect_array(j, loc)) return out;
        std::set<std::string> seen;
        for (std::size_t i = 0; i < j.size(); ++i) {
            auto s = string_of(j[i], at(loc, i));
            if (!s) continue;
            if (!seen.insert(*s).second) fail(at(loc, i), std::string("duplicate ") + what + " '" + *s + "'");
            out.push_back(*s);
        }
        return out;
    }

    Limits parse_limits();
    ControlAutomaton parse_automaton(const std::vector<std::string>& rule_names);

    std::optional<Marker> parse_marker_at(const Json& j, const std::string& loc) {
        auto s = string_of(j, loc);
        if (!s) return std::nullopt;
        auto m = parse_marker(*s);
        if (!m) fail(loc, "unknown marker '" + *s + "' (expected top, sys or env)");
        return m;
    }

    // atoms: {<payload key>: ..., state?, marker?}; a missing state or marker
    // stands for every value
    template <class S, class Payload>
    std::vector<S> parse_atom(const Json& j, const std::string& loc, const char* payload_key,
                              const ControlAutomaton& a,
                              const std::function<std::optional<Payload>(const Json&, const std::string&)>& payload,
                              const std::function<S(const Payload&, StateId, std::optional<Marker>)>& make) {
        std::vector<S> out;
        if (!expect_object(j, loc)) return out;
        known_keys(j, loc, {payload_key, "state", "marker"});
        const Json* p = member(j, payload_key, loc);
        if (!p) return out;
        auto value = payload(*p, at(loc, payload_key));
        std::vector<StateId> qs;
        if (j.contains("state")) {
            if (auto name = string_of(j["state"], at(loc, "state"))) {
                if (auto q = a.find_state(*name))
                    qs.push_back(*q);
                else
                    fail(at(loc, "state"), "unknown automaton state '" + *name + "'");
            }
        } else {
            for (StateId q = 0; q < static_cast<StateId>(a.states().size()); ++q) qs.push_back(q);
        }
        std::vector<std::optional<Marker>> ms;
        if (j.contains("marker")) {
            if (!annotate_) fail(at(loc, "marker"), "marker given but the model is not annotated");
            if (auto m = parse_marker_at(j["marker"], at(loc, "marker"))) ms.push_back(*m);
        } else if (annotate_) {
            for (Marker m : all_markers) ms.push_back(m);
        } else {
            ms.push_back(std::nullopt);
        }
        if (!value || qs.empty() || ms.empty()) return out;
        for (StateId q : qs)
            for (auto m : ms) {
                try {
                    out.push_back(make(*value, q, m));
                } catch (const Error& e) {
                    fail(loc, e.what());
                }
            }
        return out;
    }

    template <class S>
    std::optional<Constraint<S>> parse_constraint(const Json& j, const std::string& loc,
                                                  const std::function<std::vector<S>(const Json&, const std::string&)>& atom) {
        using C = Constraint<S>;
        if (!expect_object(j, loc)) return std::nullopt;
        if (j.size() != 1) {
            fail(loc, "a constraint has exactly one of exists, not_exists, and, or");
            return std::nullopt;
        }
        const auto key = j.begin().key();
        const Json& v = j.begin().value();
        const auto sub = at(loc, key);
        if (key == "exists" || key == "not_exists") {
            auto atoms = atom(v, sub);
            std::vector<C> parts;
            for (auto& s : atoms) parts.push_back(key == "exists" ? C::exists(std::move(s)) : C::not_exists(std::move(s)));
            if (parts.size() == 1) return std::move(parts.front());
            // an atom with open state or marker: ∃(a ∨ b) = ∃a ∨ ∃b, ¬∃(a ∨ b) = ¬∃a ∧ ¬∃b
            return key == "exists" ? C::any_of(std::move(parts)) : C::all_of(std::move(parts));
        }
        if (key == "and" || key == "or") {
            if (!expect_array(v, sub)) return std::nullopt;
            std::vector<C> parts;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (auto c = parse_constraint<S>(v[i], at(sub, i), atom)) parts.push_back(std::move(*c));
            return key == "and" ? C::all_of(std::move(parts)) : C::any_of(std::move(parts));
        }
        if (key == "forall" || key == "implies")
            fail(sub, "nested graph constraints are not supported; only basic constraints under and/or");
        else
            fail(sub, "unknown constraint operator '" + key + "'");
        return std::nullopt;
    }

    template <class B>
    Problem<B> finish(B backend, const ControlAutomaton& a,
                      const std::function<std::vector<typename B::State>(const Json&, const std::string&)>& atom,
                      const std::function<std::optional<typename B::State>(const Json&, const std::string&)>& start);

    Model parse_petri(Limits limits);

    std::optional<ParsedGraph> parse_graph(const Json& j, const std::string& loc);
    std::optional<gts::Label> label_of(const Json& obj, const std::string& loc) {
        if (!obj.contains("label")) return label_ids_.at("");
        auto s = string_of(obj["label"], at(loc, "label"));
        if (!s) return std::nullopt;
        return label_ids_.at(*s);
    }
    std::optional<gts::Rule> parse_rule(const Json& j, const std::string& loc);
    gts::GraphClass parse_class(const Json& j, const std::string& loc);
    Model parse_gts(Limits limits);
};

Limits Parser::parse_limits() {
    Limits l;
    if (!doc_.contains("limits")) return l;
    const auto loc = std::string("/limits");
    const Json& j = doc_["limits"];
    if (!expect_object(j, loc)) return l;
    known_keys(j, loc, {"max_iters", "overlap_cap", "forward_depth_cap", "forward_state_cap"});
    auto get = [&](const char* key, std::size_t& dst, bool positive) {
        if (!j.contains(key)) return;
        if (auto v = count_of(j[key], at(loc, key))) {
            if (positive && *v == 0)
                fail(at(loc, key), "must be positive");
            else
                dst = *v;
        }
    };
    get("max_iters", l.max_iters, true);
    get("overlap_cap", l.overlap_cap, false);
    get("forward_depth_cap", l.forward_depth_cap, false);
    get("forward_state_cap", l.forward_state_cap, true);
    return l;
}

ControlAutomaton Parser::parse_automaton(const std::vector<std::string>& rule_names) {
    if (!doc_.contains("automaton")) return ControlAutomaton::universal(rule_names);
    const std::string loc = "/automaton";
    const Json& j = doc_["automaton"];
    if (!expect_object(j, loc)) return {};
    known_keys(j, loc, {"states", "initial", "edges"});
    std::vector<std::string> states;
    if (auto p = member(j, "states", loc)) states = unique_names(*p, at(loc, "states"), "state");
    if (states.empty() && j.contains("states") && j["states"].is_array()) fail(at(loc, "states"), "needs at least one state");
    auto index = [&](const std::string& name) -> std::optional<StateId> {
        auto it = std::find(states.begin(), states.end(), name);
        if (it == states.end()) return std::nullopt;
        return static_cast<StateId>(it - states.begin());
    };
    StateId initial = 0;
    if (auto p = member(j, "initial", loc)) {
        if (auto s = string_of(*p, at(loc, "initial"))) {
            if (auto q = index(*s))
                initial = *q;
            else
                fail(at(loc, "initial"), "unknown state '" + *s + "'");
        }
    }
    const std::set<std::string> known(rule_names.begin(), rule_names.end());
    std::vector<ControlAutomaton::Edge> edges;
    if (auto p = member(j, "edges", loc); p && expect_array(*p, at(loc, "edges"))) {
        for (std::size_t i = 0; i < p->size(); ++i) {
            const auto eloc = at(at(loc, "edges"), i);
            const Json& e = (*p)[i];
            if (!expect_object(e, eloc)) continue;
            known_keys(e, eloc, {"from", "to", "select"});
            ControlAutomaton::Edge edge{0, 0, {}};
            bool ok = true;
            for (const char* end : {"from", "to"}) {
                const Json* x = member(e, end, eloc);
                auto s = x ? string_of(*x, at(eloc, end)) : std::nullopt;
                auto q = s ? index(*s) : std::nullopt;
                if (s && !q) fail(at(eloc, end), "unknown state '" + *s + "'");
                if (!q) {
                    ok = false;
                    continue;
                }
                (std::string_view(end) == "from" ? edge.from : edge.to) = *q;
            }
            if (const Json* sel = member(e, "select", eloc)) {
                auto names = unique_names(*sel, at(eloc, "select"), "selected rule");
                for (std::size_t k = 0; k < names.size(); ++k)
                    if (!known.count(names[k])) {
                        fail(at(at(eloc, "select"), k), "selects unknown rule '" + names[k] + "'");
                        ok = false;
                    }
                edge.select = std::move(names);
            }
            if (ok) edges.push_back(std::move(edge));
        }
    }
    check();
    return ControlAutomaton(std::move(states), initial, std::move(edges));
}

template <class B>
Problem<B> Parser::finish(B backend, const ControlAutomaton& a,
                          const std::function<std::vector<typename B::State>(const Json&, const std::string&)>& atom,
                          const std::function<std::optional<typename B::State>(const Json&, const std::string&)>& start) {
    using S = typename B::State;
    std::optional<S> s0;
    if (const Json* p = member(doc_, "start", "")) s0 = start(*p, "/start");

    std::optional<Constraint<S>> safety;
    if (const Json* p = member(doc_, "safety", "")) {
        safety = parse_constraint<S>(*p, "/safety", atom);
        if (safety && polarity(*safety) != Polarity::positive) {
            fail("/safety", "safety must be a positive constraint (only \"exists\" under and/or)");
            safety.reset();
        }
    }

    BadMode mode = BadMode::adverse;
    std::set<StateId> bad_states;
    std::set<Marker> bad_markers;
    std::optional<Constraint<S>> bad_constraint;
    if (const Json* p = member(doc_, "bad", ""); p && expect_object(*p, "/bad")) {
        const Json& b = *p;
        known_keys(b, "/bad", {"mode", "states", "markers", "constraint"});
        std::string m;
        if (const Json* x = member(b, "mode", "/bad"))
            if (auto s = string_of(*x, "/bad/mode")) m = *s;
        if (m == "adverse") {
            mode = BadMode::adverse;
            if (b.contains("states"))
                for (const auto& name : unique_names(b["states"], "/bad/states", "state")) {
                    if (auto q = a.find_state(name))
                        bad_states.insert(*q);
                    else
                        fail("/bad/states", "unknown automaton state '" + name + "'");
                }
            if (b.contains("markers")) {
                if (!annotate_) fail("/bad/markers", "markers given but the model is not annotated");
                const Json& ms = b["markers"];
                if (expect_array(ms, "/bad/markers"))
                    for (std::size_t i = 0; i < ms.size(); ++i)
                        if (auto mk = parse_marker_at(ms[i], at("/bad/markers", i))) bad_markers.insert(*mk);
            }
            if (bad_states.empty() && bad_markers.empty())
                fail("/bad", "adverse mode needs a non-empty \"states\" or \"markers\" list");
        } else if (m == "error") {
            mode = BadMode::error;
        } else if (m == "custom") {
            mode = BadMode::custom;
            if (const Json* c = member(b, "constraint", "/bad")) {
                bad_constraint = parse_constraint<S>(*c, "/bad/constraint", atom);
                if (bad_constraint && polarity(*bad_constraint) != Polarity::negative) {
                    fail("/bad/constraint", "the bad set must be a negative constraint (only \"not_exists\" under and/or)");
                    bad_constraint.reset();
                }
            }
        } else if (!m.empty()) {
            fail("/bad/mode", "unknown mode '" + m + "' (expected adverse, error or custom)");
        }
    }

    std::optional<std::vector<S>> b_post;
    if (doc_.contains("b_post") && expect_array(doc_["b_post"], "/b_post")) {
        std::vector<S> elems;
        const Json& bp = doc_["b_post"];
        for (std::size_t i = 0; i < bp.size(); ++i) {
            auto xs = atom(bp[i], at("/b_post", i));
            elems.insert(elems.end(), xs.begin(), xs.end());
        }
        b_post = minimize(std::move(elems), backend).elements();
    }
    check();
    if (!s0) throw ValidationError("/start", "invalid start state");
    if (!safety) throw ValidationError("/safety", "invalid safety constraint");
    if (mode == BadMode::custom && !bad_constraint) throw ValidationError("/bad", "invalid bad-set constraint");

    Problem<B> out{std::move(backend), std::move(*s0), std::move(*safety), {}, mode, {}, std::move(b_post)};
    try {
        out.safety = ideal_basis_of(out.safety_constraint, out.backend);
    } catch (const Error& e) {
        throw ValidationError("/safety", e.what());
    }
    switch (mode) {
    case BadMode::adverse: out.bad = adverse_anti_ideal<S>(bad_states, bad_markers); break;
    case BadMode::error: out.bad = error_anti_ideal(out.safety, out.backend); break;
    case BadMode::custom: out.bad = anti_ideal_of(std::move(*bad_constraint), out.backend); break;
    }
    return out;
}

Model Parser::parse_petri(Limits limits) {
    const std::string loc = "/petri";
    const Json* sec = member(doc_, "petri", "");
    check();
    if (!expect_object(*sec, loc)) check();
    if (sec->contains("sys") || sec->contains("env")) {
        fail(loc, "uncomposed model: run `resil compose` first");
        check();
    }
    known_keys(*sec, loc, {"places", "transitions"});
    std::vector<std::string> places;
    if (const Json* p = member(*sec, "places", loc)) places = unique_names(*p, at(loc, "places"), "place");
    check();

    auto tokens_of = [&](const Json& j, const std::string& l) -> std::optional<petri::Tokens> {
        if (!expect_object(j, l)) return std::nullopt;
        petri::Tokens t(places.size(), 0);
        bool ok = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            auto pos = std::find(places.begin(), places.end(), it.key());
            if (pos == places.end()) {
                fail(at(l, it.key()), "unknown place '" + it.key() + "'");
                ok = false;
                continue;
            }
            if (auto v = count_of(it.value(), at(l, it.key()), std::numeric_limits<std::uint32_t>::max()))
                t[static_cast<std::size_t>(pos - places.begin())] = static_cast<std::uint32_t>(*v);
            else
                ok = false;
        }
        if (!ok) return std::nullopt;
        return t;
    };

    std::vector<petri::Transition> ts;
    std::vector<std::string> names;
    std::set<std::string> seen;
    if (const Json* p = member(*sec, "transitions", loc); p && expect_array(*p, at(loc, "transitions"))) {
        for (std::size_t i = 0; i < p->size(); ++i) {
            const auto tloc = at(at(loc, "transitions"), i);
            const Json& t = (*p)[i];
            if (!expect_object(t, tloc)) continue;
            known_keys(t, tloc, {"name", "pre", "post", "owner"});
            petri::Transition tr;
            bool ok = true;
            if (const Json* n = member(t, "name", tloc)) {
                if (auto s = string_of(*n, at(tloc, "name"))) {
                    tr.name = *s;
                    if (!seen.insert(*s).second) fail(at(tloc, "name"), "duplicate transition '" + *s + "'");
                } else {
                    ok = false;
                }
            } else {
                ok = false;
            }
            const std::string who = tr.name.empty() ? std::string() : "transition '" + tr.name + "': ";
            for (const char* side : {"pre", "post"}) {
                std::optional<petri::Tokens> w = petri::Tokens(places.size(), 0);
                if (t.contains(side)) {
                    std::size_t before = diags_.size();
                    w = tokens_of(t[side], at(tloc, side));
                    for (std::size_t d = before; d < diags_.size(); ++d) diags_[d].message = who + diags_[d].message;
                }
                if (!w) {
                    ok = false;
                    continue;
                }
                (std::string_view(side) == "pre" ? tr.pre : tr.post) = std::move(*w);
            }
            if (const Json* o = member(t, "owner", tloc)) {
                if (auto s = string_of(*o, at(tloc, "owner"))) {
                    if (auto own = parse_owner(*s))
                        tr.owner = *own;
                    else
                        fail(at(tloc, "owner"), who + "owner must be sys or env");
                }
            }
            if (ok) {
                names.push_back(tr.name);
                ts.push_back(std::move(tr));
            }
        }
    }
    check();
    petri::PetriNet net(places, std::move(ts));
    auto automaton = parse_automaton(names);
    petri::PetriProduct prod(std::move(net), automaton, annotate_);

    using S = petri::Marking;
    std::function<std::optional<petri::Tokens>(const Json&, const std::string&)> payload = tokens_of;
    std::function<S(const petri::Tokens&, StateId, std::optional<Marker>)> make =
        [](const petri::Tokens& t, StateId q, std::optional<Marker> m) { return S{t, q, m}; };
    std::function<std::vector<S>(const Json&, const std::string&)> atom = [&](const Json& j, const std::string& l) {
        return parse_atom<S, petri::Tokens>(j, l, "marking", automaton, payload, make);
    };
    std::function<std::optional<S>(const Json&, const std::string&)> start = [&](const Json& j,
                                                                                 const std::string& l) -> std::optional<S> {
        Json fixed = j;
        if (fixed.is_object() && !fixed.contains("state")) fixed["state"] = automaton.state_name(automaton.initial());
        if (fixed.is_object() && annotate_ && !fixed.contains("marker")) fixed["marker"] = "top";
        auto xs = atom(fixed, l);
        if (xs.size() != 1) return std::nullopt;
        return xs.front();
    };
    return Model{doc_, limits, finish<petri::PetriProduct>(std::move(prod), automaton, atom, start), {}};
}

std::optional<ParsedGraph> Parser::parse_graph(const Json& j, const std::string& loc) {
    if (!expect_object(j, loc)) return std::nullopt;
    known_keys(j, loc, {"nodes", "edges"});
    ParsedGraph pg;
    const std::size_t before = diags_.size();
    if (j.contains("nodes") && expect_array(j["nodes"], at(loc, "nodes"))) {
        const Json& ns = j["nodes"];
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const auto nloc = at(at(loc, "nodes"), i);
            if (!expect_object(ns[i], nloc)) continue;
            known_keys(ns[i], nloc, {"id", "label"});
            const Json* id = member(ns[i], "id", nloc);
            auto name = id ? string_of(*id, at(nloc, "id")) : std::nullopt;
            auto label = label_of(ns[i], nloc);
            if (!name || !label) continue;
            if (pg.nodes.count(*name)) {
                fail(at(nloc, "id"), "duplicate node id '" + *name + "'");
                continue;
            }
            pg.nodes[*name] = pg.graph.add_node(*label);
        }
    }
    if (j.contains("edges") && expect_array(j["edges"], at(loc, "edges"))) {
        const Json& es = j["edges"];
        for (std::size_t i = 0; i < es.size(); ++i) {
            const auto eloc = at(at(loc, "edges"), i);
            if (!expect_object(es[i], eloc)) continue;
            known_keys(es[i], eloc, {"id", "src", "tgt", "label"});
            std::string name = "#" + std::to_string(i);
            if (es[i].contains("id"))
                if (auto s = string_of(es[i]["id"], at(eloc, "id"))) name = *s;
            std::optional<gts::NodeId> ends[2];
            const char* keys[2] = {"src", "tgt"};
            for (int k = 0; k < 2; ++k) {
                const Json* x = member(es[i], keys[k], eloc);
                auto s = x ? string_of(*x, at(eloc, keys[k])) : std::nullopt;
                if (!s) continue;
                auto it = pg.nodes.find(*s);
                if (it == pg.nodes.end())
                    fail(at(eloc, keys[k]), "unknown node '" + *s + "'");
                else
                    ends[k] = it->second;
            }
            auto label = label_of(es[i], eloc);
            if (!ends[0] || !ends[1] || !label) continue;
            if (pg.edges.count(name)) {
                fail(at(eloc, "id"), "duplicate edge id '" + name + "'");
                continue;
            }
            pg.edges[name] = pg.graph.add_edge(*ends[0], *ends[1], *label);
        }
    }
    if (diags_.size() != before) return std::nullopt;
    return pg;
}

std::optional<gts::Rule> Parser::parse_rule(const Json& j, const std::string& loc) {
    if (!expect_object(j, loc)) return std::nullopt;
    known_keys(j, loc, {"name", "owner", "left", "right", "map"});
    const std::size_t before = diags_.size();
    gts::Rule r;
    if (const Json* n = member(j, "name", loc))
        if (auto s = string_of(*n, at(loc, "name"))) r.name = *s;
    if (const Json* o = member(j, "owner", loc))
        if (auto s = string_of(*o, at(loc, "owner"))) {
            if (auto own = parse_owner(*s))
                r.owner = *own;
            else
                fail(at(loc, "owner"), "owner must be sys or env");
        }
    std::optional<ParsedGraph> left, right;
    if (const Json* l = member(j, "left", loc)) left = parse_graph(*l, at(loc, "left"));
    if (const Json* rr = member(j, "right", loc)) right = parse_graph(*rr, at(loc, "right"));
    if (!left || !right) return std::nullopt;
    r.left = left->graph;
    r.right = right->graph;
    r.node_map.assign(r.left.node_count(), -1);
    r.edge_map.assign(r.left.edge_count(), -1);
    if (j.contains("map") && expect_object(j["map"], at(loc, "map"))) {
        const Json& mp = j["map"];
        known_keys(mp, at(loc, "map"), {"nodes", "edges"});
        auto pairs = [&](const char* key, const auto& lids, const auto& rids, std::vector<int>& dst) {
            if (!mp.contains(key)) return;
            const auto ploc = at(at(loc, "map"), key);
            if (!expect_array(mp[key], ploc)) return;
            for (std::size_t i = 0; i < mp[key].size(); ++i) {
                const Json& pr = mp[key][i];
                const auto iloc = at(ploc, i);
                if (!pr.is_array() || pr.size() != 2 || !pr[0].is_string() || !pr[1].is_string()) {
                    fail(iloc, "expected a pair [left id, right id]");
                    continue;
                }
                auto li = lids.find(pr[0].template get<std::string>());
                auto ri = rids.find(pr[1].template get<std::string>());
                if (li == lids.end()) fail(at(iloc, 0), "unknown left id '" + pr[0].template get<std::string>() + "'");
                if (ri == rids.end()) fail(at(iloc, 1), "unknown right id '" + pr[1].template get<std::string>() + "'");
                if (li == lids.end() || ri == rids.end()) continue;
                auto& slot = dst[static_cast<std::size_t>(li->second)];
                if (slot >= 0) fail(iloc, "rule '" + r.name + "': left item '" + li->first + "' mapped twice");
                slot = ri->second;
            }
        };
        pairs("nodes", left->nodes, right->nodes, r.node_map);
        pairs("edges", left->edges, right->edges, r.edge_map);
    }
    if (diags_.size() != before) return std::nullopt;
    try {
        gts::validate(r);
    } catch (const ValidationError& e) {
        for (const auto& d : e.diagnostics()) fail(loc, d.message);
        return std::nullopt;
    }
    return r;
}

gts::GraphClass Parser::parse_class(const Json& j, const std::string& loc) {
    gts::GraphClass cls;
    if (!expect_object(j, loc)) return cls;
    known_keys(j, loc, {"max_path_length", "max_label_count", "quotient_isolated"});
    if (j.contains("max_path_length"))
        if (auto v = count_of(j["max_path_length"], at(loc, "max_path_length"))) cls.max_path_length = *v;
    if (j.contains("max_label_count") && expect_object(j["max_label_count"], at(loc, "max_label_count"))) {
        for (auto it = j["max_label_count"].begin(); it != j["max_label_count"].end(); ++it)
            if (auto v = count_of(it.value(), at(at(loc, "max_label_count"), it.key())))
                cls.max_label_count[label_ids_.at(it.key())] = *v;
    }
    if (j.contains("quotient_isolated") && expect_array(j["quotient_isolated"], at(loc, "quotient_isolated"))) {
        const Json& q = j["quotient_isolated"];
        for (std::size_t i = 0; i < q.size(); ++i)
            if (auto s = string_of(q[i], at(at(loc, "quotient_isolated"), i))) cls.quotient_labels.insert(label_ids_.at(*s));
    }
    return cls;
}

Model Parser::parse_gts(Limits limits) {
    const std::string loc = "/gts";
    const Json* sec = member(doc_, "gts", "");
    check();
    if (!expect_object(*sec, loc)) check();
    if (sec->contains("sys") || sec->contains("env")) {
        fail(loc, "uncomposed model: run `resil compose` first");
        check();
    }
    known_keys(*sec, loc, {"class", "rules", "invertible"});

    std::set<std::string> names{""};
    collect_labels(doc_, names);
    if (sec->contains("class") && (*sec)["class"].is_object()) {
        const Json& c = (*sec)["class"];
        if (c.contains("max_label_count") && c["max_label_count"].is_object())
            for (auto it = c["max_label_count"].begin(); it != c["max_label_count"].end(); ++it) names.insert(it.key());
        if (c.contains("quotient_isolated") && c["quotient_isolated"].is_array())
            for (const auto& s : c["quotient_isolated"])
                if (s.is_string()) names.insert(s.get<std::string>());
    }
    labels_.assign(names.begin(), names.end());
    for (std::size_t i = 0; i < labels_.size(); ++i) label_ids_[labels_[i]] = static_cast<gts::Label>(i);

    gts::GraphClass cls;
    if (const Json* c = member(*sec, "class", loc)) cls = parse_class(*c, at(loc, "class"));
    bool invertible = false;
    if (sec->contains("invertible"))
        if (auto b = bool_of((*sec)["invertible"], at(loc, "invertible"))) invertible = *b;

    std::vector<gts::Rule> rules;
    std::vector<std::string> rule_names;
    if (const Json* p = member(*sec, "rules", loc); p && expect_array(*p, at(loc, "rules"))) {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < p->size(); ++i) {
            const auto rloc = at(at(loc, "rules"), i);
            auto r = parse_rule((*p)[i], rloc);
            if (!r) continue;
            if (!seen.insert(r->name).second) {
                fail(at(rloc, "name"), "duplicate rule '" + r->name + "'");
                continue;
            }
            rule_names.push_back(r->name);
            rules.push_back(std::move(*r));
        }
    }
    check();
    auto automaton = parse_automaton(rule_names);
    gts::GtsBackend backend(std::move(rules), automaton, cls, annotate_, invertible, {limits.overlap_cap});

    using S = gts::GraphState;
    std::function<std::optional<gts::Graph>(const Json&, const std::string&)> payload =
        [&](const Json& j, const std::string& l) -> std::optional<gts::Graph> {
        auto pg = parse_graph(j, l);
        if (!pg) return std::nullopt;
        return pg->graph;
    };
    std::function<S(const gts::Graph&, StateId, std::optional<Marker>)> make =
        [&backend](const gts::Graph& g, StateId q, std::optional<Marker> m) { return backend.make_state(g, q, m); };
    std::function<std::vector<S>(const Json&, const std::string&)> atom = [&](const Json& j, const std::string& l) {
        return parse_atom<S, gts::Graph>(j, l, "graph", automaton, payload, make);
    };
    std::function<std::optional<S>(const Json&, const std::string&)> start = [&](const Json& j,
                                                                                 const std::string& l) -> std::optional<S> {
        Json fixed = j;
        if (fixed.is_object() && !fixed.contains("state")) fixed["state"] = automaton.state_name(automaton.initial());
        if (fixed.is_object() && annotate_ && !fixed.contains("marker")) fixed["marker"] = "top";
        auto xs = atom(fixed, l);
        if (xs.size() != 1) return std::nullopt;
        return xs.front();
    };
    return Model{doc_, limits, finish<gts::GtsBackend>(backend, automaton, atom, start), labels_};
}

Model Parser::run() {
    if (!doc_.is_object()) {
        fail("", "a model document must be a JSON object");
        check();
    }
    known_keys(doc_, "",
               {"format", "kind", "petri", "gts", "automaton", "annotate", "start", "safety", "bad", "b_post", "limits",
                "description"});
    std::string kind;
    if (const Json* f = member(doc_, "format", ""))
        if (auto s = string_of(*f, "/format"); s && *s != format_tag)
            fail("/format", "unsupported format '" + *s + "' (expected " + format_tag + ")");
    if (const Json* k = member(doc_, "kind", ""))
        if (auto s = string_of(*k, "/kind")) {
            kind = *s;
            if (kind != "petri" && kind != "gts") fail("/kind", "kind must be petri or gts");
        }
    if (doc_.contains("annotate"))
        if (auto b = bool_of(doc_["annotate"], "/annotate")) annotate_ = *b;
    auto limits = parse_limits();
    check();
    return kind == "petri" ? parse_petri(limits) : parse_gts(limits);
}

} // namespace

Model parse_model(const Json& doc) {
    Parser p(doc);
    return p.run();
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError("", std::string("JSON parse error: ") + e.what());
    }
    auto m = parse_model(doc);
    if (const char* env = std::getenv("RESIL_MAX_ITERS")) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0) throw Error("RESIL_MAX_ITERS must be a positive integer");
        m.limits.max_iters = static_cast<std::size_t>(v);
    }
    return m;
}

Json compose_model(const Json& doc) {
    std::vector<Diagnostic> diags;
    if (!doc.is_object()) throw ValidationError("", "a model document must be a JSON object");
    const std::string kind = doc.value("kind", "");
    if (kind != "petri" && kind != "gts") throw ValidationError("/kind", "kind must be petri or gts");
    const std::string sec = kind;
    const std::string list = kind == "petri" ? "transitions" : "rules";
    if (!doc.contains(sec) || !doc[sec].is_object()) throw ValidationError("/" + sec, "missing section");
    const Json& in = doc[sec];
    if (in.contains(list)) diags.push_back({"/" + sec + "/" + list, "already composed; give \"sys\" and \"env\" instead"});
    Json combined = Json::array();
    for (const char* owner : {"sys", "env"}) {
        if (!in.contains(owner)) continue;
        const auto loc = "/" + sec + "/" + owner;
        if (!in[owner].is_array()) {
            diags.push_back({loc, "expected an array"});
            continue;
        }
        for (std::size_t i = 0; i < in[owner].size(); ++i) {
            Json item = in[owner][i];
            if (!item.is_object()) {
                diags.push_back({loc + "/" + std::to_string(i), "expected an object"});
                continue;
            }
            if (item.contains("owner") && item["owner"] != owner)
                diags.push_back({loc + "/" + std::to_string(i) + "/owner", std::string("conflicts with the ") + owner +
                                                                               " component"});
            item["owner"] = owner;
            combined.push_back(std::move(item));
        }
    }
    if (!in.contains("sys") && !in.contains("env")) diags.push_back({"/" + sec, "nothing to compose: no \"sys\" or \"env\""});
    if (!diags.empty()) throw ValidationError(std::move(diags));
    Json out = doc;
    out[sec].erase("sys");
    out[sec].erase("env");
    out[sec][list] = std::move(combined);
    parse_model(out);
    return out;
}

Json state_to_json(const Model& m, const petri::Marking& s) {
    const auto& backend = std::get<PetriProblem>(m.problem).backend;
    Json j;
    Json marking = Json::object();
    const auto& places = backend.net().places();
    for (std::size_t i = 0; i < s.tokens.size(); ++i)
        if (s.tokens[i] != 0) marking[places[i]] = s.tokens[i];
    j["marking"] = std::move(marking);
    if (s.state) j["state"] = backend.automaton().state_name(*s.state);
    if (s.marker) j["marker"] = std::string(to_string(*s.marker));
    return j;
}

Json state_to_json(const Model& m, const gts::GraphState& s) {
    const auto& backend = std::get<GtsProblem>(m.problem).backend;
    Json nodes = Json::array();
    const auto& g = s.graph;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        Json n{{"id", "n" + std::to_string(v)}};
        const auto& l = m.labels.at(g.node_label(static_cast<gts::NodeId>(v)));
        if (!l.empty()) n["label"] = l;
        nodes.push_back(std::move(n));
    }
    Json edges = Json::array();
    for (const auto& e : g.edges()) {
        Json x{{"src", "n" + std::to_string(e.src)}, {"tgt", "n" + std::to_string(e.tgt)}};
        const auto& l = m.labels.at(e.label);
        if (!l.empty()) x["label"] = l;
        edges.push_back(std::move(x));
    }
    Json j{{"graph", {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}}},
           {"state", backend.automaton().state_name(s.state)}};
    if (s.marker) j["marker"] = std::string(to_string(*s.marker));
    return j;
}

} // namespace resil
