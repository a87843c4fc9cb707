#include "resil/cli.hpp"

#include "resil/engine.hpp"
#include "resil/error.hpp"

#include <variant>

namespace resil::cli {

namespace {

EngineOptions engine_options(const Model& m, bool trace) {
    EngineOptions o;
    o.max_iters = m.limits.max_iters;
    o.keep_trace = trace;
    o.forward_state_cap = m.limits.forward_state_cap;
    return o;
}

const char* verdict_name(VerdictKind k) {
    switch (k) {
    case VerdictKind::found: return "found";
    case VerdictKind::unbounded: return "unbounded";
    case VerdictKind::exhausted: return "exhausted";
    }
    return "?";
}

int exit_code(VerdictKind k) {
    switch (k) {
    case VerdictKind::found: return 0;
    case VerdictKind::unbounded: return 1;
    case VerdictKind::exhausted: return 2;
    }
    return 2;
}

template <class S>
Json bad_part(const Model& m, const Basis<S>& b, const AntiIdeal<S>& bad) {
    std::vector<S> in;
    for (const auto& s : b)
        if (bad(s)) in.push_back(s);
    return states_to_json(m, in);
}

// k as a number, or "infinity" / "exhausted"
template <class S>
Json k_value(const Verdict<S>& v) {
    switch (v.kind) {
    case VerdictKind::found: return v.k;
    case VerdictKind::unbounded: return "infinity";
    case VerdictKind::exhausted: return "exhausted";
    }
    return nullptr;
}

template <class B>
Report check_impl(const Model& m, const Problem<B>& p, const CheckOptions& opts) {
    if (!p.b_post)
        throw Error("the model has no \"b_post\" (a basis of the upward closure of the reachable states); "
                    "supply one, or estimate k_min with `resil approx --under L` / `resil approx --over`");
    ResilienceInstance<B> inst{p.backend, *p.b_post, p.bad, p.safety, engine_options(m, opts.trace)};
    auto v = minimal_step(inst);
    Report r;
    r.exit_code = exit_code(v.kind);
    r.body["verdict"] = verdict_name(v.kind);
    r.body["iterations"] = v.iterations;
    if (v.found()) r.body["k_min"] = v.k;
    if (opts.k) {
        if (v.kind == VerdictKind::exhausted)
            r.body["explicit"] = nullptr;
        else
            r.body["explicit"] = v.found() && v.k <= *opts.k;
        r.body["k"] = *opts.k;
    }
    if (opts.trace) {
        Json bases = Json::array(), in_bad = Json::array();
        for (const auto& b : v.trace) {
            bases.push_back(states_to_json(m, b.elements()));
            in_bad.push_back(bad_part(m, b, p.bad));
        }
        r.body["bases"] = std::move(bases);
        r.body["bases_in_bad"] = std::move(in_bad);
    }
    return r;
}

template <class B>
Report approx_impl(const Model& m, const Problem<B>& p, const ApproxOptions& opts) {
    if (!opts.under && !opts.over) throw Error("approx needs --under L or --over");
    const auto eo = engine_options(m, false);
    Report r;
    r.exit_code = 0;
    auto merge = [&](VerdictKind k) { r.exit_code = std::max(r.exit_code, exit_code(k)); };
    if (opts.under) {
        if (*opts.under > m.limits.forward_depth_cap)
            throw Error("depth " + std::to_string(*opts.under) + " exceeds limits.forward_depth_cap");
        auto v = under_approx(p.start, *opts.under, p.bad, p.safety, p.backend, eo);
        r.body["k_under"] = k_value(v);
        r.body["depth"] = *opts.under;
        merge(v.kind);
    }
    if (opts.over) {
        auto v = over_approx(p.start, p.bad, p.safety, p.backend, eo);
        r.body["k_over"] = k_value(v);
        merge(v.kind);
    }
    r.body["guarantee"] = "k_under <= k_min <= k_over";
    return r;
}

template <class B>
Report prestar_impl(const Model& m, const Problem<B>& p) {
    auto eo = engine_options(m, true);
    auto ps = pre_star(p.safety, p.backend, eo);
    Report r;
    r.body["index"] = ps.index;
    r.body["basis"] = states_to_json(m, ps.basis.elements());
    Json steps = Json::array();
    for (std::size_t k = 0; k < ps.trace.size(); ++k)
        steps.push_back({{"k", k}, {"basis", states_to_json(m, ps.trace[k].elements())},
                         {"in_bad", bad_part(m, ps.trace[k], p.bad)}});
    r.body["steps"] = std::move(steps);
    return r;
}

template <class B>
Report post_impl(const Model& m, const Problem<B>& p, std::size_t depth) {
    if (depth > m.limits.forward_depth_cap)
        throw Error("depth " + std::to_string(depth) + " exceeds limits.forward_depth_cap");
    auto fw = forward_states(p.start, depth, p.backend, m.limits.forward_state_cap);
    Report r;
    if (!fw.complete) {
        r.exit_code = 2;
        r.body["error"] = "forward exploration exceeded limits.forward_state_cap";
        return r;
    }
    r.body["depth"] = depth;
    r.body["states"] = fw.states.size();
    r.body["saturated"] = fw.saturated;
    auto basis = minimize(std::move(fw.states), p.backend);
    r.body["basis"] = states_to_json(m, basis.elements());
    return r;
}

} // namespace

Report check(const Model& m, const CheckOptions& opts) {
    return std::visit([&](const auto& p) { return check_impl(m, p, opts); }, m.problem);
}

Report approx(const Model& m, const ApproxOptions& opts) {
    return std::visit([&](const auto& p) { return approx_impl(m, p, opts); }, m.problem);
}

Report prestar(const Model& m) {
    try {
        return std::visit([&](const auto& p) { return prestar_impl(m, p); }, m.problem);
    } catch (const LimitExceeded& e) {
        return {2, Json{{"error", e.what()}}};
    }
}

Report post(const Model& m, std::size_t depth) {
    return std::visit([&](const auto& p) { return post_impl(m, p, depth); }, m.problem);
}

Report compose(const Json& doc) { return {0, compose_model(doc)}; }

} // namespace resil::cli
