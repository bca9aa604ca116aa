#pragma once

#include <unordered_set>

#include "qpack/subspace.hpp"

namespace qpack {

namespace detail {

// Matrix in column-encoded form, supporting the action on encoded vectors.
// For q = 2 the action is a bit-sliced XOR of columns; the generic path works
// digit by digit with identical observable behavior.
struct ActionMatrix {
    std::uint32_t q, n;
    std::vector<std::uint64_t> cols;  // column encodings

    static ActionMatrix from(const FqMatrix& m) {
        return ActionMatrix{m.q(), static_cast<std::uint32_t>(m.rows()), m.column_encodings()};
    }

    FqMatrix to_matrix() const {
        return FqMatrix::from_column_encodings(FieldOrder(q), n, cols);
    }

    std::uint64_t apply(std::uint64_t v) const {
        if (q == 2) {
            std::uint64_t w = 0;
            while (v) {
                int j = std::countr_zero(v);
                w ^= cols[static_cast<std::size_t>(j)];
                v &= v - 1;
            }
            return w;
        }
        std::vector<std::uint8_t> digit(n), acc(n, 0);
        decode_digits(v, digit.data(), n, q);
        std::vector<std::uint8_t> bcol(n);
        for (std::uint32_t j = 0; j < n; ++j) {
            if (!digit[j]) continue;
            decode_digits(cols[j], bcol.data(), n, q);
            for (std::uint32_t r = 0; r < n; ++r)
                acc[r] = static_cast<std::uint8_t>((acc[r] + digit[j] * bcol[r]) % q);
        }
        return encode_digits(acc.data(), n, q);
    }

    // this * other (composition: apply other first, then this)
    ActionMatrix mul(const ActionMatrix& other) const {
        ActionMatrix out{q, n, std::vector<std::uint64_t>(n)};
        for (std::uint32_t j = 0; j < n; ++j) out.cols[j] = apply(other.cols[j]);
        return out;
    }

    bool is_identity() const {
        for (std::uint32_t j = 0; j < n; ++j)
            if (cols[j] != pow_u64(q, j)) return false;
        return true;
    }

    bool operator==(const ActionMatrix&) const = default;
};

inline ActionMatrix identity_action(std::uint32_t q, std::uint32_t n) {
    ActionMatrix m{q, n, std::vector<std::uint64_t>(n)};
    for (std::uint32_t j = 0; j < n; ++j) m.cols[j] = pow_u64(q, j);
    return m;
}

// Apply g to every basis column of K and re-canonicalize.
inline std::vector<std::uint64_t> act_cols(const ActionMatrix& g,
                                           const std::vector<std::uint64_t>& cols) {
    std::vector<std::uint64_t> out(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) out[i] = g.apply(cols[i]);
    canonical_basis(g.q, g.n, out);
    return out;
}

inline bool is_invertible(const FqMatrix& m) {
    if (m.rows() != m.cols()) return false;
    std::vector<std::uint64_t> cols = m.column_encodings();
    canonical_basis(m.q(), static_cast<std::uint32_t>(m.rows()), cols);
    return cols.size() == m.rows();
}

}  // namespace detail

/// A finite subgroup of GL(n, q) given by generators. Every generator is
/// checked invertible at construction.
struct GroupGens {
    FieldOrder q;
    std::uint32_t n;
    std::vector<FqMatrix> generators;

    GroupGens(FieldOrder q_, std::uint32_t n_, std::vector<FqMatrix> gens)
        : q(q_), n(n_), generators(std::move(gens)) {
        if (n == 0 || n > max_dimension(q.value()))
            throw std::invalid_argument("ambient dimension out of range");
        for (const auto& g : generators) {
            if (g.rows() != n || g.cols() != n || g.q() != q.value())
                throw std::invalid_argument("generator shape or field mismatch");
            if (!detail::is_invertible(g))
                throw std::invalid_argument("generator is singular over F_q");
        }
    }

    static GroupGens trivial(FieldOrder q_, std::uint32_t n_) {
        return GroupGens(q_, n_, {FqMatrix::identity(q_, n_)});
    }
};

/// g K: the canonical subspace spanned by g applied to K's basis.
inline Subspace act(const FqMatrix& g, const Subspace& k) {
    if (g.rows() != k.n() || g.cols() != k.n() || g.q() != k.q())
        throw std::invalid_argument("matrix/subspace dimension mismatch");
    auto cols = detail::act_cols(detail::ActionMatrix::from(g), k.encoding());
    return Subspace::from_canonical(k.q(), k.n(), std::move(cols));
}

inline constexpr std::uint64_t kDefaultOrderCap = std::uint64_t(1) << 22;

/// The full element set of the generated group, in breadth-first order from
/// the identity.
struct GroupClosure {
    GroupGens gens;
    std::vector<FqMatrix> elements;
    std::uint64_t order() const { return elements.size(); }
};

inline GroupClosure close_group(const GroupGens& gens, std::uint64_t order_cap = kDefaultOrderCap) {
    std::vector<detail::ActionMatrix> gen_actions;
    gen_actions.reserve(gens.generators.size());
    for (const auto& g : gens.generators) gen_actions.push_back(detail::ActionMatrix::from(g));

    std::vector<detail::ActionMatrix> elems{detail::identity_action(gens.q.value(), gens.n)};
    std::unordered_set<std::vector<std::uint64_t>, detail::VecU64Hash> seen{elems[0].cols};
    for (std::size_t head = 0; head < elems.size(); ++head) {
        for (const auto& g : gen_actions) {
            detail::ActionMatrix next = elems[head].mul(g);
            if (seen.insert(next.cols).second) {
                if (elems.size() >= order_cap)
                    throw CapExceededError("group closure exceeds order cap " +
                                           std::to_string(order_cap) + " (found > " +
                                           std::to_string(elems.size()) + " elements)");
                elems.push_back(std::move(next));
            }
        }
    }
    GroupClosure out{gens, {}};
    out.elements.reserve(elems.size());
    for (const auto& e : elems) out.elements.push_back(e.to_matrix());
    return out;
}

/// Multiplicative order of g, by repeated multiplication.
inline std::uint64_t element_order(const FqMatrix& g,
                                   std::uint64_t cap = kDefaultOrderCap) {
    auto a = detail::ActionMatrix::from(g);
    if (!detail::is_invertible(g)) throw std::invalid_argument("singular matrix has no order");
    detail::ActionMatrix p = a;
    std::uint64_t o = 1;
    while (!p.is_identity()) {
        p = p.mul(a);
        if (++o > cap) throw CapExceededError("element order exceeds cap");
    }
    return o;
}

/// Generators of one cyclic subgroup of order m: the first element in closure
/// enumeration order whose order is exactly m.
inline GroupGens cyclic_subgroup_of_order(const GroupClosure& closure, std::uint64_t m) {
    if (m == 0 || closure.order() % m != 0)
        throw std::invalid_argument("requested order does not divide the group order");
    for (const auto& e : closure.elements)
        if (element_order(e) == m)
            return GroupGens(closure.gens.q, closure.gens.n, {e});
    throw std::invalid_argument("group has no element of order " + std::to_string(m));
}

}  // namespace qpack
