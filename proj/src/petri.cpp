#include "resil/petri.hpp"

#include "resil/error.hpp"

#include <algorithm>
#include <set>

namespace resil::petri {

PetriNet::PetriNet(std::vector<std::string> places, std::vector<Transition> transitions)
    : places_(std::move(places)), transitions_(std::move(transitions)) {
    std::vector<Diagnostic> diags;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < places_.size(); ++i)
        if (!seen.insert(places_[i]).second)
            diags.push_back({"/petri/places/" + std::to_string(i), "duplicate place '" + places_[i] + "'"});
    seen.clear();
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
        const auto& t = transitions_[i];
        const auto loc = "/petri/transitions/" + std::to_string(i);
        if (!seen.insert(t.name).second) diags.push_back({loc, "duplicate transition '" + t.name + "'"});
        if (t.pre.size() != places_.size() || t.post.size() != places_.size())
            diags.push_back({loc, "transition '" + t.name + "' has weights of the wrong dimension"});
    }
    if (!diags.empty()) throw ValidationError(std::move(diags));
}

std::size_t PetriNet::transition_index(const std::string& name) const {
    for (std::size_t i = 0; i < transitions_.size(); ++i)
        if (transitions_[i].name == name) return i;
    throw Error("unknown transition '" + name + "'");
}

std::optional<std::size_t> PetriNet::place_index(const std::string& name) const {
    auto it = std::find(places_.begin(), places_.end(), name);
    if (it == places_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - places_.begin());
}

namespace {

void check_dim(const PetriNet& net, const Tokens& m) {
    if (m.size() != net.dimension())
        throw Error("marking has dimension " + std::to_string(m.size()) + ", net has " +
                    std::to_string(net.dimension()) + " places");
}

const Transition& transition_at(const PetriNet& net, std::size_t t) {
    if (t >= net.transitions().size()) throw Error("unknown transition index " + std::to_string(t));
    return net.transitions()[t];
}

} // namespace

bool enabled(const PetriNet& net, const Tokens& m, std::size_t t) {
    check_dim(net, m);
    const auto& tr = transition_at(net, t);
    for (std::size_t p = 0; p < m.size(); ++p)
        if (tr.pre[p] > m[p]) return false;
    return true;
}

bool enabled(const PetriNet& net, const Tokens& m, const std::string& t) {
    return enabled(net, m, net.transition_index(t));
}

Tokens fire(const PetriNet& net, const Tokens& m, std::size_t t) {
    if (!enabled(net, m, t)) throw Error("transition '" + net.transitions()[t].name + "' is not enabled");
    const auto& tr = net.transitions()[t];
    Tokens out(m.size());
    for (std::size_t p = 0; p < m.size(); ++p) out[p] = m[p] - tr.pre[p] + tr.post[p];
    return out;
}

Tokens fire(const PetriNet& net, const Tokens& m, const std::string& t) {
    return fire(net, m, net.transition_index(t));
}

bool leq_pn(const Marking& a, const Marking& b) {
    if (a.tokens.size() != b.tokens.size())
        throw Error("cannot compare markings of dimension " + std::to_string(a.tokens.size()) + " and " +
                    std::to_string(b.tokens.size()));
    if (a.state != b.state || a.marker != b.marker) return false;
    for (std::size_t p = 0; p < a.tokens.size(); ++p)
        if (a.tokens[p] > b.tokens[p]) return false;
    return true;
}

Tokens pre_basis_t(const PetriNet& net, const Tokens& m, std::size_t t) {
    check_dim(net, m);
    const auto& tr = transition_at(net, t);
    Tokens out(m.size());
    for (std::size_t p = 0; p < m.size(); ++p)
        out[p] = (m[p] > tr.post[p] ? m[p] - tr.post[p] : 0) + tr.pre[p];
    return out;
}

PetriNet invert(const PetriNet& net) {
    auto ts = net.transitions();
    for (auto& t : ts) std::swap(t.pre, t.post);
    return PetriNet(net.places(), std::move(ts));
}

namespace {

std::vector<NamedRule> named(const PetriNet& net) {
    std::vector<NamedRule> out;
    for (const auto& t : net.transitions()) out.push_back({t.name, t.owner});
    return out;
}

} // namespace

PetriProduct::PetriProduct(PetriNet net, ControlAutomaton automaton, bool annotate)
    : net_(std::move(net)),
      net_inv_(invert(net_)),
      automaton_(std::move(automaton)),
      annotate_(annotate),
      enriched_(enrich(named(net_), automaton_)),
      marked_(annotate_ ? resil::annotate(enriched_) : unmarked(enriched_)) {}

std::vector<Marking> PetriProduct::join(const Marking& a, const Marking& b) const {
    if (a.tokens.size() != b.tokens.size()) throw Error("cannot join markings of different dimension");
    if (a.state != b.state || a.marker != b.marker) return {};
    Marking j = a;
    for (std::size_t p = 0; p < j.tokens.size(); ++p) j.tokens[p] = std::max(a.tokens[p], b.tokens[p]);
    return {j};
}

// In a reversed product the stored net is already inverted and automaton
// edges are reversed, so a reversed step (M',q') -> (M,q) is an original
// step (M,q) -> (M',q'). Markers follow the original direction: the
// reversed source carries owner(t), the reversed target any marker.

std::vector<Marking> PetriProduct::pre_basis(const Marking& s) const {
    std::vector<Marking> out;
    if (!s.state) throw Error("product state without automaton state");
    for (const auto& r : marked_) {
        const auto& e = r.base;
        if (e.to != *s.state) continue;
        if (annotate_ && !reversed_ && r.right != s.marker) continue;
        if (reversed_ && r.left != Marker::top) continue; // one copy per enriched rule
        Marking m;
        m.tokens = pre_basis_t(net_, s.tokens, e.rule);
        m.state = e.from;
        if (annotate_) m.marker = reversed_ ? marker_of(e.owner) : r.left;
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<Marking> PetriProduct::post_step(const Marking& s) const {
    std::vector<Marking> out;
    if (!s.state) throw Error("product state without automaton state");
    for (const auto& r : marked_) {
        const auto& e = r.base;
        if (e.from != *s.state) continue;
        if (!reversed_ && r.left != Marker::top) continue; // one copy per enriched rule
        if (annotate_ && reversed_ && s.marker != marker_of(e.owner)) continue;
        if (!enabled(net_, s.tokens, e.rule)) continue;
        Marking m;
        m.tokens = fire(net_, s.tokens, e.rule);
        m.state = e.to;
        if (annotate_) m.marker = reversed_ ? r.left : marker_of(e.owner);
        out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PetriProduct PetriProduct::inverted() const {
    PetriProduct inv = *this;
    std::swap(inv.net_, inv.net_inv_);
    inv.automaton_ = automaton_.reversed();
    for (auto& e : inv.enriched_) std::swap(e.from, e.to);
    for (auto& r : inv.marked_) std::swap(r.base.from, r.base.to);
    inv.reversed_ = !reversed_;
    return inv;
}

Marking PetriProduct::start(Tokens tokens) const {
    if (tokens.size() != net_.dimension()) throw Error("start marking has the wrong dimension");
    Marking m{std::move(tokens), automaton_.initial(), std::nullopt};
    if (annotate_) m.marker = Marker::top;
    return m;
}

} // namespace resil::petri
