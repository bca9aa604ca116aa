#pragma once

#include "qpack/gaussian.hpp"
#include "qpack/subspace.hpp"

namespace qpack {

/// Default ceiling on how many subspaces a single enumeration may produce.
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t(1) << 26;

/// All k-subspaces of F_q^n, each exactly once, sorted by ascending encoding.
/// Generation runs over the canonical forms directly: choose the k pivot rows,
/// then fill the free positions (rows below a pivot that are not pivots of
/// other columns) with arbitrary field elements.
inline std::vector<Subspace> enumerate_subspaces(std::uint32_t n, std::uint32_t k, FieldOrder q,
                                                 std::uint64_t cap = kDefaultEnumerationCap) {
    if (k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
    if (n > max_dimension(q.value()))
        throw std::invalid_argument("ambient dimension too large for 64-bit encodings");
    BigInt total = gaussian_binomial(n, k, q.value());
    if (total > cap)
        throw CapExceededError("enumeration of " + total.str() + " subspaces exceeds cap " +
                               std::to_string(cap));

    std::vector<std::uint64_t> qpow(n);
    for (std::uint32_t r = 0; r < n; ++r) qpow[r] = pow_u64(q.value(), r);

    std::vector<Subspace> out;
    out.reserve(static_cast<std::size_t>(total));

    std::vector<std::uint32_t> pivots(k);
    for (std::uint32_t i = 0; i < k; ++i) pivots[i] = i;

    auto emit_for_pivots = [&] {
        // free positions per column, flattened
        std::vector<std::pair<std::uint32_t, std::uint32_t>> free_pos;  // (col, row)
        for (std::uint32_t c = 0; c < k; ++c)
            for (std::uint32_t r = 0; r < pivots[c]; ++r)
                if (std::find(pivots.begin(), pivots.end(), r) == pivots.end())
                    free_pos.emplace_back(c, r);
        std::vector<std::uint8_t> digits(free_pos.size(), 0);
        std::vector<std::uint64_t> cols(k);
        while (true) {
            for (std::uint32_t c = 0; c < k; ++c) cols[c] = qpow[pivots[c]];
            for (std::size_t i = 0; i < free_pos.size(); ++i)
                cols[free_pos[i].first] += digits[i] * qpow[free_pos[i].second];
            out.push_back(Subspace::from_canonical(q.value(), n, cols));
            // mixed-radix increment
            std::size_t i = 0;
            for (; i < digits.size(); ++i) {
                if (++digits[i] < q.value()) break;
                digits[i] = 0;
            }
            if (i == digits.size()) break;
        }
    };

    // iterate over ascending pivot-row combinations
    while (true) {
        emit_for_pivots();
        std::int32_t i = static_cast<std::int32_t>(k) - 1;
        while (i >= 0 && pivots[static_cast<std::size_t>(i)] ==
                             n - k + static_cast<std::uint32_t>(i))
            --i;
        if (i < 0) break;
        ++pivots[static_cast<std::size_t>(i)];
        for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < k; ++j)
            pivots[j] = pivots[j - 1] + 1;
    }

    std::sort(out.begin(), out.end(),
              [](const Subspace& a, const Subspace& b) { return a.encoding() < b.encoding(); });
    return out;
}

/// Enumerates the t-subspaces of a k-dimensional block. The [k t]_q
/// t-subspaces of the coordinate space F_q^k are precomputed once; each is
/// mapped through the block's basis and re-canonicalized in the ambient space.
class BlockTEnumerator {
public:
    BlockTEnumerator(std::uint32_t q, std::uint32_t n, std::uint32_t k, std::uint32_t t)
        : q_(q), n_(n), k_(k), t_(t) {
        if (t > k) throw std::invalid_argument("t must not exceed k");
        for (const auto& s : enumerate_subspaces(k, t, FieldOrder(q)))
            small_flat_.insert(small_flat_.end(), s.encoding().begin(), s.encoding().end());
    }

    std::size_t count_per_block() const { return small_flat_.size() / t_; }

    /// Appends count_per_block() canonical tuples (t words each) to `out`.
    void enumerate(const std::uint64_t* block_cols, std::vector<std::uint64_t>& out) const {
        std::vector<std::uint64_t> cols(t_);
        if (q_ == 2) {
            for (std::size_t s = 0; s < small_flat_.size(); s += t_) {
                for (std::uint32_t i = 0; i < t_; ++i) {
                    std::uint64_t mask = small_flat_[s + i], w = 0;
                    while (mask) {
                        w ^= block_cols[std::countr_zero(mask)];
                        mask &= mask - 1;
                    }
                    cols[i] = w;
                }
                detail::canonical_basis_gf2({cols.data(), t_});
                out.insert(out.end(), cols.begin(), cols.end());
            }
            return;
        }
        // generic path: decode the block once, combine digit-wise
        std::vector<std::uint8_t> block_digits(k_ * n_);
        for (std::uint32_t c = 0; c < k_; ++c)
            detail::decode_digits(block_cols[c], block_digits.data() + c * n_, n_, q_);
        std::vector<std::uint8_t> coeff(k_), acc(n_);
        for (std::size_t s = 0; s < small_flat_.size(); s += t_) {
            for (std::uint32_t i = 0; i < t_; ++i) {
                detail::decode_digits(small_flat_[s + i], coeff.data(), k_, q_);
                std::fill(acc.begin(), acc.end(), 0);
                for (std::uint32_t c = 0; c < k_; ++c)
                    if (coeff[c])
                        for (std::uint32_t r = 0; r < n_; ++r)
                            acc[r] = static_cast<std::uint8_t>(
                                (acc[r] + coeff[c] * block_digits[c * n_ + r]) % q_);
                cols[i] = detail::encode_digits(acc.data(), n_, q_);
            }
            detail::canonical_basis(q_, n_, cols);
            cols.resize(t_);
            out.insert(out.end(), cols.begin(), cols.end());
        }
    }

private:
    std::uint32_t q_, n_, k_, t_;
    std::vector<std::uint64_t> small_flat_;  // t-strided encodings in F_q^k
};

}  // namespace qpack
