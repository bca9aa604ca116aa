#pragma once

#include <algorithm>
#include <bit>
#include <span>

#include "qpack/fq.hpp"

namespace qpack {

namespace detail {

// ---- bit-packed path, q = 2: a column is a bit mask, row r = bit r ----

// Reduce `cols` in place to the canonical basis: every column has a distinct
// pivot (most significant bit), each pivot bit occurs in exactly one column,
// columns sorted ascending. Returns the rank; the basis occupies cols[0..rank).
inline std::size_t canonical_basis_gf2(std::span<std::uint64_t> cols) {
    std::size_t rank = 0;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        std::uint64_t v = cols[i];
        for (std::size_t j = 0; j < rank; ++j) {
            std::uint64_t b = cols[j];
            if (v >> (63 - std::countl_zero(b)) & 1) v ^= b;
        }
        if (v == 0) continue;
        int p = 63 - std::countl_zero(v);
        for (std::size_t j = 0; j < rank; ++j)
            if (cols[j] >> p & 1) cols[j] ^= v;
        cols[rank++] = v;
    }
    std::sort(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(rank));
    return rank;
}

// ---- generic path: columns as digit vectors, any prime q ----
// Identical observable behavior to the packed path; exercised directly by
// tests and used for q > 2.

struct DigitCols {
    std::uint32_t q, n;
    std::vector<std::uint8_t> d;  // d[c * n + r]
    std::size_t count() const { return d.size() / n; }
    std::uint8_t* col(std::size_t c) { return d.data() + c * n; }
    const std::uint8_t* col(std::size_t c) const { return d.data() + c * n; }
};

inline std::uint64_t encode_digits(const std::uint8_t* col, std::uint32_t n, std::uint32_t q) {
    std::uint64_t enc = 0;
    std::uint64_t p = 1;
    for (std::uint32_t r = 0; r < n; ++r, p *= q) enc += p * col[r];
    return enc;
}

inline void decode_digits(std::uint64_t enc, std::uint8_t* col, std::uint32_t n, std::uint32_t q) {
    for (std::uint32_t r = 0; r < n; ++r) {
        col[r] = static_cast<std::uint8_t>(enc % q);
        enc /= q;
    }
}

inline int pivot_row(const std::uint8_t* col, std::uint32_t n) {
    for (int r = static_cast<int>(n) - 1; r >= 0; --r)
        if (col[r]) return r;
    return -1;
}

// c -= f * b (mod q)
inline void submul(std::uint8_t* c, const std::uint8_t* b, std::uint32_t f, std::uint32_t n,
                   std::uint32_t q) {
    for (std::uint32_t r = 0; r < n; ++r)
        c[r] = static_cast<std::uint8_t>((c[r] + (q - f % q) * b[r]) % q);
}

inline std::size_t canonical_basis_generic(DigitCols& cols) {
    const std::uint32_t n = cols.n, q = cols.q;
    std::size_t rank = 0;
    std::vector<int> pivots;
    for (std::size_t i = 0; i < cols.count(); ++i) {
        std::uint8_t* v = cols.col(i);
        for (std::size_t j = 0; j < rank; ++j)
            if (std::uint32_t f = v[pivots[j]])
                submul(v, cols.col(j), f, n, q);
        int p = pivot_row(v, n);
        if (p < 0) continue;
        std::uint32_t inv = mod_inverse(v[p], q);
        for (std::uint32_t r = 0; r < n; ++r)
            v[r] = static_cast<std::uint8_t>(v[r] * inv % q);
        for (std::size_t j = 0; j < rank; ++j)
            if (std::uint32_t f = cols.col(j)[p])
                submul(cols.col(j), v, f, n, q);
        if (i != rank)
            std::copy(v, v + n, cols.col(rank));
        pivots.push_back(p);
        ++rank;
    }
    // sort basis columns by ascending encoding
    std::vector<std::uint64_t> enc(rank);
    for (std::size_t j = 0; j < rank; ++j) enc[j] = encode_digits(cols.col(j), n, q);
    std::vector<std::size_t> order(rank);
    for (std::size_t j = 0; j < rank; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return enc[a] < enc[b]; });
    std::vector<std::uint8_t> sorted(rank * n);
    for (std::size_t j = 0; j < rank; ++j)
        std::copy(cols.col(order[j]), cols.col(order[j]) + n, sorted.data() + j * n);
    std::copy(sorted.begin(), sorted.end(), cols.d.begin());
    cols.d.resize(rank * n);
    return rank;
}

// Canonicalize encoded columns in place for any prime q. cols shrinks to rank.
inline void canonical_basis(std::uint32_t q, std::uint32_t n, std::vector<std::uint64_t>& cols) {
    if (q == 2) {
        std::size_t rank = canonical_basis_gf2(cols);
        cols.resize(rank);
        return;
    }
    DigitCols dc{q, n, std::vector<std::uint8_t>(cols.size() * n)};
    for (std::size_t c = 0; c < cols.size(); ++c) decode_digits(cols[c], dc.col(c), n, q);
    std::size_t rank = canonical_basis_generic(dc);
    cols.resize(rank);
    for (std::size_t c = 0; c < rank; ++c) cols[c] = encode_digits(dc.col(c), n, q);
}

}  // namespace detail

/// A k-dimensional subspace of F_q^n in canonical form: the unique reduced
/// column-echelon basis, stored as the ascending tuple of column encodings.
/// Two Subspace values compare equal iff they are the same point of the
/// Grassmannian.
class Subspace {
public:
    std::uint32_t q() const { return q_; }
    std::uint32_t n() const { return n_; }
    std::uint32_t k() const { return static_cast<std::uint32_t>(cols_.size()); }

    /// Sorted ascending encoding tuple; bijective with canonical subspaces.
    const std::vector<std::uint64_t>& encoding() const { return cols_; }

    FqMatrix basis_matrix() const {
        return FqMatrix::from_column_encodings(FieldOrder(q_), n_, cols_);
    }

    /// Trusted constructor: `cols` must already be canonical.
    static Subspace from_canonical(std::uint32_t q, std::uint32_t n,
                                   std::vector<std::uint64_t> cols) {
        return Subspace(q, n, std::move(cols));
    }

    bool operator==(const Subspace&) const = default;
    auto operator<=>(const Subspace&) const = default;

private:
    Subspace(std::uint32_t q, std::uint32_t n, std::vector<std::uint64_t> cols)
        : q_(q), n_(n), cols_(std::move(cols)) {}

    std::uint32_t q_, n_;
    std::vector<std::uint64_t> cols_;
};

/// Canonical subspace spanned by the columns of `raw`; dependent columns are
/// dropped. The canonical form is a fixed point of this map.
inline Subspace canonicalize(const FqMatrix& raw) {
    if (raw.cols() == 0) throw std::invalid_argument("matrix has no columns");
    if (raw.rows() > max_dimension(raw.q()))
        throw std::invalid_argument("ambient dimension too large for 64-bit encodings");
    std::vector<std::uint64_t> cols = raw.column_encodings();
    detail::canonical_basis(raw.q(), static_cast<std::uint32_t>(raw.rows()), cols);
    if (cols.empty())
        throw std::invalid_argument("empty subspace not representable as a block");
    return Subspace::from_canonical(raw.q(), static_cast<std::uint32_t>(raw.rows()),
                                    std::move(cols));
}

/// Decode an integer tuple into a subspace: digit i of each integer's base-q
/// expansion is row i. The tuple must be a full-rank block.
inline Subspace decode_tuple(const std::vector<std::uint64_t>& ints, std::uint32_t n,
                             FieldOrder q) {
    if (ints.empty()) throw std::invalid_argument("empty tuple");
    if (n == 0 || n > max_dimension(q.value()))
        throw std::invalid_argument("ambient dimension out of range");
    const std::uint64_t bound = pow_u64(q.value(), n);
    for (auto v : ints)
        if (v >= bound)
            throw std::invalid_argument("tuple entry " + std::to_string(v) +
                                        " out of range: not below q^n");
    std::vector<std::uint64_t> cols = ints;
    detail::canonical_basis(q.value(), n, cols);
    if (cols.size() != ints.size())
        throw std::invalid_argument("degenerate block: tuple columns are dependent");
    return Subspace::from_canonical(q.value(), n, std::move(cols));
}

/// Inverse of decode_tuple on canonical subspaces.
inline std::vector<std::uint64_t> encode_tuple(const Subspace& s) { return s.encoding(); }

namespace detail {

inline void require_same_space(const Subspace& a, const Subspace& b) {
    if (a.q() != b.q() || a.n() != b.n())
        throw std::invalid_argument("subspaces live in different ambient spaces");
}

// rank of the concatenation [a | b]
inline std::size_t joint_rank(const Subspace& a, const Subspace& b) {
    std::vector<std::uint64_t> cols;
    cols.reserve(a.k() + b.k());
    cols.insert(cols.end(), a.encoding().begin(), a.encoding().end());
    cols.insert(cols.end(), b.encoding().begin(), b.encoding().end());
    canonical_basis(a.q(), a.n(), cols);
    return cols.size();
}

}  // namespace detail

/// T is contained in K.
inline bool contains(const Subspace& t, const Subspace& k) {
    detail::require_same_space(t, k);
    if (t.k() > k.k()) return false;
    return detail::joint_rank(t, k) == k.k();
}

/// dim(S cap K) via the rank identity dim S + dim K - rank([S|K]).
inline std::uint32_t intersection_dim(const Subspace& s, const Subspace& k) {
    detail::require_same_space(s, k);
    return s.k() + k.k() - static_cast<std::uint32_t>(detail::joint_rank(s, k));
}

/// Subspace distance d(S,K) = dim S + dim K - 2 dim(S cap K).
inline std::uint32_t subspace_distance(const Subspace& s, const Subspace& k) {
    return s.k() + k.k() - 2 * intersection_dim(s, k);
}

}  // namespace qpack
