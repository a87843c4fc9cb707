#pragma once

// Antichain bases of upward-closed sets over a well-quasi-order.
//
// States are ordered totally by their canonical encoding (operator<) and
// partially by the wqo supplied as an object with `leq(a, b)`. A Basis is a
// finite antichain sorted by the canonical encoding; it stands for the ideal
// of every state above one of its elements.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace resil {

template <class W, class S>
concept Wqo = requires(const W& w, const S& a, const S& b) {
    { w.leq(a, b) } -> std::convertible_to<bool>;
};

/// Wqo that can also produce a basis of the intersection ↑{a} ∩ ↑{b}.
template <class W, class S>
concept JoinableWqo = Wqo<W, S> && requires(const W& w, const S& a, const S& b) {
    { w.join(a, b) } -> std::convertible_to<std::vector<S>>;
};

template <class S>
class Basis {
public:
    using value_type = S;
    using const_iterator = typename std::vector<S>::const_iterator;

    Basis() = default;

    /// Wraps a list that the caller guarantees to be a sorted antichain.
    static Basis from_antichain(std::vector<S> elems) {
        Basis b;
        b.elems_ = std::move(elems);
        return b;
    }

    const std::vector<S>& elements() const noexcept { return elems_; }
    std::size_t size() const noexcept { return elems_.size(); }
    bool empty() const noexcept { return elems_.empty(); }
    const_iterator begin() const noexcept { return elems_.begin(); }
    const_iterator end() const noexcept { return elems_.end(); }
    const S& operator[](std::size_t i) const { return elems_[i]; }

    friend bool operator==(const Basis&, const Basis&) = default;

private:
    std::vector<S> elems_;
};

/// Minimal elements of `states`, sorted by canonical encoding. Of two
/// mutually comparable elements the one first in canonical order is kept.
template <class S, class W>
    requires Wqo<W, S>
Basis<S> minimize(std::vector<S> states, const W& order) {
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());

    std::vector<S> kept;
    for (auto& s : states) {
        bool dominated = false;
        for (const auto& k : kept) {
            if (order.leq(k, s)) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        std::erase_if(kept, [&](const S& k) { return order.leq(s, k); });
        kept.push_back(std::move(s));
    }
    // kept preserves canonical order since elements were appended in order
    return Basis<S>::from_antichain(std::move(kept));
}

/// Membership test s ∈ ↑B.
template <class S, class W>
    requires Wqo<W, S>
bool covers(const Basis<S>& basis, const S& s, const W& order) {
    return std::any_of(basis.begin(), basis.end(),
                       [&](const S& b) { return order.leq(b, s); });
}

/// A ⊆ ↑B.
template <class S, class W>
    requires Wqo<W, S>
bool basis_subset(std::span<const S> a, const Basis<S>& b, const W& order) {
    return std::all_of(a.begin(), a.end(),
                       [&](const S& s) { return covers(b, s, order); });
}

template <class S, class W>
    requires Wqo<W, S>
bool basis_subset(const Basis<S>& a, const Basis<S>& b, const W& order) {
    return basis_subset(std::span<const S>(a.elements()), b, order);
}

/// ↑B1 = ↑B2, decided by mutual inclusion.
template <class S, class W>
    requires Wqo<W, S>
bool same_ideal(const Basis<S>& a, const Basis<S>& b, const W& order) {
    return basis_subset(a, b, order) && basis_subset(b, a, order);
}

/// Basis of ↑B1 ∩ ↑B2 from pairwise joins.
template <class S, class W>
    requires JoinableWqo<W, S>
Basis<S> ideal_intersection_basis(const Basis<S>& b1, const Basis<S>& b2, const W& order) {
    std::vector<S> gen;
    for (const auto& x : b1) {
        for (const auto& y : b2) {
            auto j = order.join(x, y);
            gen.insert(gen.end(), std::make_move_iterator(j.begin()),
                       std::make_move_iterator(j.end()));
        }
    }
    return minimize(std::move(gen), order);
}

/// Union of two ideals.
template <class S, class W>
    requires Wqo<W, S>
Basis<S> ideal_union_basis(const Basis<S>& b1, const Basis<S>& b2, const W& order) {
    std::vector<S> gen(b1.begin(), b1.end());
    gen.insert(gen.end(), b2.begin(), b2.end());
    return minimize(std::move(gen), order);
}

} // namespace resil
