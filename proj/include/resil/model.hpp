#pragma once

// Model documents ("format": "resilire/1"): loading with located
// diagnostics, composition of system and environment parts, and JSON
// rendering of states.

#include "resil/constraints.hpp"
#include "resil/gts_backend.hpp"
#include "resil/petri.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace resil {

using Json = nlohmann::json;

inline constexpr const char* format_tag = "resilire/1";

struct Limits {
    std::size_t max_iters = 10'000;
    std::size_t overlap_cap = 0; // 0: |R| + |S|
    std::size_t forward_depth_cap = 1'000;
    std::size_t forward_state_cap = 1'000'000;
};

enum class BadMode { adverse, error, custom };

template <class B>
struct Problem {
    using State = typename B::State;

    B backend;
    State start;
    Constraint<State> safety_constraint;
    Basis<State> safety;
    BadMode bad_mode = BadMode::adverse;
    AntiIdeal<State> bad;
    std::optional<std::vector<State>> b_post;
};

using PetriProblem = Problem<petri::PetriProduct>;
using GtsProblem = Problem<gts::GtsBackend>;

struct Model {
    Json document; // the validated source
    Limits limits;
    std::variant<PetriProblem, GtsProblem> problem;
    std::vector<std::string> labels; // graph label id -> name; "" is unlabeled

    bool is_petri() const noexcept { return std::holds_alternative<PetriProblem>(problem); }
};

/// Parses and validates a document. Throws ValidationError listing every
/// problem found, with JSON-pointer locations.
Model parse_model(const Json& doc);

/// Reads a file, applies RESIL_MAX_ITERS when set, and parses it.
Model load_model(const std::filesystem::path& path);

/// Turns a document whose backend section lists "sys" and "env" parts into
/// a regular owner-tagged document. The result is validated before return.
Json compose_model(const Json& doc);

Json state_to_json(const Model& m, const petri::Marking& s);
Json state_to_json(const Model& m, const gts::GraphState& s);

template <class S>
Json states_to_json(const Model& m, const std::vector<S>& states) {
    Json out = Json::array();
    for (const auto& s : states) out.push_back(state_to_json(m, s));
    return out;
}

} // namespace resil
