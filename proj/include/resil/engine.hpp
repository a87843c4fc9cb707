#pragma once

// Backward ideal saturation and the resilience decision procedure.
//
// With I the safety ideal and I^k = I ∪ pre(I^{k-1}), the least k for which
// every bad state reachable from the start lies in I^k is found by checking
// the bad part of a basis of ↑post*(start) against a basis of I^k. Strong
// compatibility makes each I^k an ideal, so both sides stay finite.

#include "resil/error.hpp"
#include "resil/order.hpp"

#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace resil {

template <class B>
concept Backend = requires(const B& b, const typename B::State& s) {
    requires std::totally_ordered<typename B::State>;
    { b.leq(s, s) } -> std::convertible_to<bool>;
    { b.pre_basis(s) } -> std::convertible_to<std::vector<typename B::State>>;
    { b.post_step(s) } -> std::convertible_to<std::vector<typename B::State>>;
};

template <class B>
concept InvertibleBackend = Backend<B> && requires(const B& b) {
    { b.invertible() } -> std::convertible_to<bool>;
    { b.inverted() } -> std::same_as<B>;
};

/// Decidable downward-closed set, given by its membership test.
template <class S>
using AntiIdeal = std::function<bool(const S&)>;

enum class VerdictKind { found, unbounded, exhausted };

template <class S>
struct Verdict {
    VerdictKind kind = VerdictKind::exhausted;
    std::size_t k = 0;          // meaningful for `found`
    std::size_t iterations = 0; // saturation steps computed
    std::vector<Basis<S>> trace; // B^0, B^1, ... when requested

    bool found() const noexcept { return kind == VerdictKind::found; }
};

struct EngineOptions {
    std::size_t max_iters = 10'000;
    bool keep_trace = false;
    std::size_t forward_state_cap = 1'000'000;
};

template <Backend B>
struct ResilienceInstance {
    using State = typename B::State;

    const B& backend;
    std::vector<State> b_post; // basis of ↑post*(start)
    AntiIdeal<State> bad;
    Basis<State> safety;
    EngineOptions options{};
};

/// Memoizes pre_basis per state across saturation steps.
template <Backend B>
class PreBasisCache {
public:
    using State = typename B::State;

    explicit PreBasisCache(const B& backend) : backend_(backend) {}

    const std::vector<State>& operator()(const State& s) {
        auto it = cache_.find(s);
        if (it == cache_.end()) it = cache_.emplace(s, backend_.pre_basis(s)).first;
        return it->second;
    }

private:
    const B& backend_;
    std::map<State, std::vector<State>> cache_;
};

/// Basis of I ∪ pre(↑Bk) where I = ↑B0.
template <Backend B>
Basis<typename B::State> ideal_step(const Basis<typename B::State>& bk, const Basis<typename B::State>& b0,
                                    const B& backend, PreBasisCache<B>* cache = nullptr) {
    std::vector<typename B::State> gen(b0.begin(), b0.end());
    for (const auto& b : bk) {
        if (cache) {
            const auto& pre = (*cache)(b);
            gen.insert(gen.end(), pre.begin(), pre.end());
        } else {
            auto pre = backend.pre_basis(b);
            gen.insert(gen.end(), std::make_move_iterator(pre.begin()), std::make_move_iterator(pre.end()));
        }
    }
    return minimize(std::move(gen), backend);
}

namespace detail {

/// Least k with target ⊆ I^k; unbounded once I^{k+1} = I^k.
template <Backend B>
Verdict<typename B::State> least_cover(std::span<const typename B::State> target, const Basis<typename B::State>& b0,
                                       const B& backend, const EngineOptions& opts) {
    Verdict<typename B::State> v;
    PreBasisCache<B> cache(backend);
    auto current = minimize(std::vector<typename B::State>(b0.begin(), b0.end()), backend);
    if (opts.keep_trace) v.trace.push_back(current);
    while (true) {
        if (basis_subset(target, current, backend)) {
            v.kind = VerdictKind::found;
            return v;
        }
        if (v.iterations >= opts.max_iters) {
            v.kind = VerdictKind::exhausted;
            return v;
        }
        auto next = ideal_step(current, b0, backend, &cache);
        ++v.iterations;
        if (basis_subset(next, current, backend)) {
            v.kind = VerdictKind::unbounded;
            return v;
        }
        current = std::move(next);
        ++v.k;
        if (opts.keep_trace) v.trace.push_back(current);
    }
}

} // namespace detail

/// The least k such that the instance is k-step resilient, Unbounded when no
/// such k exists, Exhausted when the iteration guard is hit first.
template <Backend B>
Verdict<typename B::State> minimal_step(const ResilienceInstance<B>& inst) {
    std::vector<typename B::State> target;
    for (const auto& b : inst.b_post)
        if (inst.bad(b)) target.push_back(b);
    return detail::least_cover<B>(target, inst.safety, inst.backend, inst.options);
}

/// k-step resilience; nullopt when the guard is hit before deciding.
template <Backend B>
std::optional<bool> explicit_check(const ResilienceInstance<B>& inst, std::size_t k) {
    auto v = minimal_step(inst);
    switch (v.kind) {
    case VerdictKind::found: return v.k <= k;
    case VerdictKind::unbounded: return false;
    case VerdictKind::exhausted: break;
    }
    return std::nullopt;
}

template <class S>
struct PreStar {
    Basis<S> basis;    // basis of pre*(I)
    std::size_t index; // least k0 with I^k = I^k0 for all k >= k0
    std::vector<Basis<S>> trace;
};

/// Saturates to the fixpoint pre*(↑B0). Throws LimitExceeded on the guard.
template <Backend B>
PreStar<typename B::State> pre_star(const Basis<typename B::State>& b0, const B& backend,
                                    const EngineOptions& opts = {}) {
    PreStar<typename B::State> out;
    PreBasisCache<B> cache(backend);
    auto current = minimize(std::vector<typename B::State>(b0.begin(), b0.end()), backend);
    std::size_t k = 0;
    if (opts.keep_trace) out.trace.push_back(current);
    while (true) {
        if (k >= opts.max_iters)
            throw LimitExceeded("backward saturation did not converge within " + std::to_string(opts.max_iters) +
                                " iterations");
        auto next = ideal_step(current, b0, backend, &cache);
        if (basis_subset(next, current, backend)) {
            out.basis = std::move(current);
            out.index = k;
            return out;
        }
        current = std::move(next);
        ++k;
        if (opts.keep_trace) out.trace.push_back(current);
    }
}

/// μ(A): least k with A ∩ J ⊆ I^k; `unbounded` stands for infinity.
template <Backend B>
Verdict<typename B::State> mu(std::span<const typename B::State> a, const AntiIdeal<typename B::State>& bad,
                              const Basis<typename B::State>& b0, const B& backend, const EngineOptions& opts = {}) {
    std::vector<typename B::State> target;
    for (const auto& s : a)
        if (bad(s)) target.push_back(s);
    return detail::least_cover<B>(target, b0, backend, opts);
}

template <class S>
struct ForwardSet {
    std::vector<S> states; // every state reached within the depth, sorted
    bool complete = true;  // false when the state cap stopped the search
    bool saturated = false; // no new states at the last layer
};

/// ⋃_{j ≤ depth} post^j(start) by breadth-first search.
template <Backend B>
ForwardSet<typename B::State> forward_states(const typename B::State& start, std::size_t depth, const B& backend,
                                             std::size_t state_cap) {
    using S = typename B::State;
    ForwardSet<S> out;
    std::set<S> seen{start};
    std::vector<S> frontier{start};
    for (std::size_t d = 0; d < depth && !frontier.empty(); ++d) {
        std::vector<S> next;
        for (const auto& s : frontier)
            for (auto& t : backend.post_step(s))
                if (seen.insert(t).second) {
                    if (seen.size() > state_cap) {
                        out.complete = false;
                        out.states.assign(seen.begin(), seen.end());
                        return out;
                    }
                    next.push_back(std::move(t));
                }
        frontier = std::move(next);
    }
    out.saturated = frontier.empty();
    out.states.assign(seen.begin(), seen.end());
    return out;
}

/// k^ℓ_un = μ(⋃_{j ≤ ℓ} post^j(start)), evaluated on the minimized forward
/// set. Exhausted when the forward state cap is hit.
template <Backend B>
Verdict<typename B::State> under_approx(const typename B::State& start, std::size_t depth,
                                        const AntiIdeal<typename B::State>& bad, const Basis<typename B::State>& b0,
                                        const B& backend, const EngineOptions& opts = {}) {
    auto fw = forward_states(start, depth, backend, opts.forward_state_cap);
    if (!fw.complete) return Verdict<typename B::State>{};
    auto basis = minimize(std::move(fw.states), backend);
    return mu<B>(basis.elements(), bad, b0, backend, opts);
}

/// k_ov = μ(post*(↑{start})), with post*(↑{start}) = pre*(↑{start}) in the
/// inverted system. Throws Error when the backend is not invertible.
template <InvertibleBackend B>
Verdict<typename B::State> over_approx(const typename B::State& start, const AntiIdeal<typename B::State>& bad,
                                       const Basis<typename B::State>& b0, const B& backend,
                                       const EngineOptions& opts = {}) {
    if (!backend.invertible()) throw Error("backend is not weakly invertible");
    const B inv = backend.inverted();
    EngineOptions inner = opts;
    inner.keep_trace = false;
    try {
        auto reach = pre_star(Basis<typename B::State>::from_antichain({start}), inv, inner);
        return mu<B>(reach.basis.elements(), bad, b0, backend, opts);
    } catch (const LimitExceeded&) {
        return Verdict<typename B::State>{};
    }
}

} // namespace resil
