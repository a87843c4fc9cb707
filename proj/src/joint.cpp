#include "resil/joint.hpp"

#include "resil/error.hpp"

#include <algorithm>
#include <map>

namespace resil {

ValidationError::ValidationError(std::vector<Diagnostic> diags)
    : Error([&] {
          std::string msg;
          for (const auto& d : diags) {
              if (!msg.empty()) msg += "; ";
              msg += (d.location.empty() ? std::string("/") : d.location) + ": " + d.message;
          }
          return msg;
      }()),
      diags_(std::move(diags)) {}

std::string_view to_string(Owner o) { return o == Owner::sys ? "sys" : "env"; }

std::string_view to_string(Marker m) {
    switch (m) {
    case Marker::top: return "top";
    case Marker::sys: return "sys";
    case Marker::env: return "env";
    }
    return "?";
}

std::optional<Owner> parse_owner(std::string_view s) {
    if (s == "sys") return Owner::sys;
    if (s == "env") return Owner::env;
    return std::nullopt;
}

std::optional<Marker> parse_marker(std::string_view s) {
    if (s == "top") return Marker::top;
    if (s == "sys") return Marker::sys;
    if (s == "env") return Marker::env;
    return std::nullopt;
}

ControlAutomaton::ControlAutomaton(std::vector<std::string> states, StateId initial, std::vector<Edge> edges)
    : states_(std::move(states)), initial_(initial), edges_(std::move(edges)) {
    std::vector<Diagnostic> diags;
    const auto n = static_cast<StateId>(states_.size());
    if (n == 0) diags.push_back({"/automaton/states", "automaton needs at least one state"});
    if (initial_ < 0 || initial_ >= n) diags.push_back({"/automaton/initial", "initial state out of range"});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
            diags.push_back({"/automaton/edges/" + std::to_string(i), "edge endpoint out of range"});
    }
    auto sorted = states_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        diags.push_back({"/automaton/states", "duplicate state name"});
    if (!diags.empty()) throw ValidationError(std::move(diags));
}

ControlAutomaton ControlAutomaton::universal(const std::vector<std::string>& rule_names) {
    return ControlAutomaton({"q0"}, 0, {Edge{0, 0, rule_names}});
}

std::optional<StateId> ControlAutomaton::find_state(std::string_view name) const {
    auto it = std::find(states_.begin(), states_.end(), name);
    if (it == states_.end()) return std::nullopt;
    return static_cast<StateId>(it - states_.begin());
}

ControlAutomaton ControlAutomaton::reversed() const {
    ControlAutomaton r = *this;
    for (auto& e : r.edges_) std::swap(e.from, e.to);
    return r;
}

std::vector<EnrichedRule> enrich(const std::vector<NamedRule>& rules, const ControlAutomaton& automaton) {
    std::vector<Diagnostic> diags;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (!index.emplace(rules[i].name, i).second)
            diags.push_back({"/rules/" + std::to_string(i),
                             "rule name '" + rules[i].name + "' is not unique across sys and env"});
    }
    std::vector<EnrichedRule> out;
    for (std::size_t ei = 0; ei < automaton.edges().size(); ++ei) {
        const auto& e = automaton.edges()[ei];
        for (std::size_t si = 0; si < e.select.size(); ++si) {
            auto it = index.find(e.select[si]);
            if (it == index.end()) {
                diags.push_back({"/automaton/edges/" + std::to_string(ei) + "/select/" + std::to_string(si),
                                 "unknown rule '" + e.select[si] + "'"});
                continue;
            }
            out.push_back({it->second, e.from, e.to, rules[it->second].owner});
        }
    }
    if (!diags.empty()) throw ValidationError(std::move(diags));
    return out;
}

std::vector<MarkedRule> annotate(const std::vector<EnrichedRule>& enriched) {
    std::vector<MarkedRule> out;
    out.reserve(enriched.size() * 3);
    for (const auto& r : enriched)
        for (Marker m : all_markers) out.push_back({r, m, marker_of(r.owner)});
    return out;
}

std::vector<MarkedRule> unmarked(const std::vector<EnrichedRule>& enriched) {
    std::vector<MarkedRule> out;
    out.reserve(enriched.size());
    for (const auto& r : enriched) out.push_back({r, Marker::top, marker_of(r.owner)});
    return out;
}

} // namespace resil
