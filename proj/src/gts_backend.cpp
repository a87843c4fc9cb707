#include "resil/gts_backend.hpp"

#include "resil/error.hpp"

#include <algorithm>

namespace resil::gts {

namespace {

std::vector<NamedRule> named(const std::vector<Rule>& rules) {
    std::vector<NamedRule> out;
    for (const auto& r : rules) out.push_back({r.name, r.owner});
    return out;
}

std::vector<Rule> inverses(const std::vector<Rule>& rules) {
    std::vector<Rule> out;
    for (const auto& r : rules) out.push_back(inverse(r));
    return out;
}

} // namespace

GtsBackend::GtsBackend(std::vector<Rule> rules, ControlAutomaton automaton, GraphClass cls, bool annotate,
                       bool invertible, GtsLimits limits)
    : rules_(std::move(rules)),
      inverse_rules_(inverses(rules_)),
      automaton_(std::move(automaton)),
      class_(std::move(cls)),
      annotate_(annotate),
      invertible_(invertible),
      limits_(limits) {
    auto enriched = enrich(named(rules_), automaton_);
    marked_ = annotate_ ? resil::annotate(enriched) : unmarked(enriched);
}

bool GtsBackend::leq(const GraphState& a, const GraphState& b) const {
    return a.state == b.state && a.marker == b.marker && embeds(a.graph, b.graph);
}

std::vector<GraphState> GtsBackend::join(const GraphState& a, const GraphState& b) const {
    if (a.state != b.state || a.marker != b.marker) return {};
    std::vector<GraphState> out;
    for (const auto& o : overlaps(a.graph, b.graph, limits_.overlap_cap))
        if (auto g = class_.admit(o.graph)) out.push_back({std::move(*g), a.state, a.marker});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Marker handling mirrors PetriProduct: in a reversed system the stored
// rules are the inverses and automaton edges point backwards; the reversed
// source of a step carries owner(r), its target any marker.

std::vector<GraphState> GtsBackend::pre_basis(const GraphState& s) const {
    std::vector<GraphState> out;
    const auto& rules = reversed_ ? inverse_rules_ : rules_;
    for (const auto& mr : marked_) {
        const auto& e = mr.base;
        if (e.to != s.state) continue;
        if (annotate_ && !reversed_ && mr.right != s.marker) continue;
        if (reversed_ && mr.left != Marker::top) continue;
        for (auto& g : pre_step_rule(rules[e.rule], s.graph, class_, limits_.overlap_cap)) {
            GraphState p{std::move(g), e.from, std::nullopt};
            if (annotate_) p.marker = reversed_ ? marker_of(e.owner) : mr.left;
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<GraphState> GtsBackend::post_step(const GraphState& s) const {
    std::vector<GraphState> out;
    const auto& rules = reversed_ ? inverse_rules_ : rules_;
    for (const auto& mr : marked_) {
        const auto& e = mr.base;
        if (e.from != s.state) continue;
        if (!reversed_ && mr.left != Marker::top) continue;
        if (annotate_ && reversed_ && s.marker != marker_of(e.owner)) continue;
        for (auto& h : successors(rules[e.rule], s.graph, class_)) {
            GraphState n{std::move(h), e.to, std::nullopt};
            if (annotate_) n.marker = reversed_ ? mr.left : marker_of(e.owner);
            out.push_back(std::move(n));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

GtsBackend GtsBackend::inverted() const {
    if (!invertible_)
        throw Error("over-approximation needs a weakly invertible system: every rule application must be "
                    "undone by the inverse rule (no dangling-edge deletion); declare \"invertible\": true "
                    "in the gts section only if this holds");
    GtsBackend inv = *this;
    inv.automaton_ = automaton_.reversed();
    for (auto& r : inv.marked_) std::swap(r.base.from, r.base.to);
    inv.reversed_ = !reversed_;
    return inv;
}

GraphState GtsBackend::make_state(const Graph& g, StateId q, std::optional<Marker> marker) const {
    auto adm = class_.admit(g);
    if (!adm) throw Error("graph is outside the declared class");
    if (q < 0 || static_cast<std::size_t>(q) >= automaton_.states().size()) throw Error("unknown automaton state");
    if (annotate_ != marker.has_value()) throw Error(annotate_ ? "annotated state needs a marker" : "unexpected marker");
    return {std::move(*adm), q, marker};
}

GraphState GtsBackend::start(const Graph& g) const {
    return make_state(g, automaton_.initial(), annotate_ ? std::optional<Marker>(Marker::top) : std::nullopt);
}

} // namespace resil::gts
