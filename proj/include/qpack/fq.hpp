#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpack {

class CapExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool is_prime(std::uint32_t q) {
    if (q < 2) return false;
    for (std::uint64_t d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

// a^-1 mod q for prime q; q is tiny so a linear scan is fine
inline std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t q) {
    a %= q;
    for (std::uint32_t i = 1; i < q; ++i)
        if (a * i % q == 1) return i;
    throw std::logic_error("mod_inverse of 0");
}

}  // namespace detail

/// Prime field order. Construction validates primality.
class FieldOrder {
public:
    explicit FieldOrder(std::uint32_t q) : q_(q) {
        if (!detail::is_prime(q))
            throw std::invalid_argument("field order must be prime, got " + std::to_string(q));
        if (q > 251)
            throw std::invalid_argument("field order above 251 not supported");
    }

    std::uint32_t value() const { return q_; }
    bool operator==(const FieldOrder&) const = default;

private:
    std::uint32_t q_;
};

// Columns are encoded as integers: digit r of the base-q expansion is the
// entry in row r (row 0 least significant). All encodings must fit in 64 bits,
// which bounds n by 63 for q = 2 and by floor(63/log2(q)) otherwise.
inline std::uint32_t max_dimension(std::uint32_t q) {
    std::uint32_t n = 0;
    std::uint64_t p = 1;
    while (p <= (std::uint64_t(1) << 62) / q) {
        p *= q;
        ++n;
    }
    return n;
}

inline std::uint64_t pow_u64(std::uint32_t q, std::uint32_t n) {
    std::uint64_t p = 1;
    while (n--) p *= q;
    return p;
}

/// Dense matrix over F_q. Entries are stored row-major, reduced mod q.
class FqMatrix {
public:
    FqMatrix(FieldOrder q, std::size_t rows, std::size_t cols)
        : q_(q), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    FqMatrix(FieldOrder q, std::size_t rows, std::size_t cols, std::vector<std::uint8_t> entries)
        : q_(q), rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != rows * cols)
            throw std::invalid_argument("entry count does not match matrix shape");
        for (auto& e : a_) e = static_cast<std::uint8_t>(e % q.value());
    }

    static FqMatrix identity(FieldOrder q, std::size_t n) {
        FqMatrix m(q, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::uint32_t q() const { return q_.value(); }
    FieldOrder field() const { return q_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint8_t& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    std::uint8_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    /// Column c encoded as sum of entry(r,c) * q^r.
    std::uint64_t column_encoding(std::size_t c) const {
        std::uint64_t enc = 0;
        std::uint64_t p = 1;
        for (std::size_t r = 0; r < rows_; ++r, p *= q_.value())
            enc += p * at(r, c);
        return enc;
    }

    std::vector<std::uint64_t> column_encodings() const {
        std::vector<std::uint64_t> out(cols_);
        for (std::size_t c = 0; c < cols_; ++c) out[c] = column_encoding(c);
        return out;
    }

    static FqMatrix from_column_encodings(FieldOrder q, std::size_t n,
                                          const std::vector<std::uint64_t>& cols) {
        FqMatrix m(q, n, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            std::uint64_t v = cols[c];
            for (std::size_t r = 0; r < n; ++r) {
                m.at(r, c) = static_cast<std::uint8_t>(v % q.value());
                v /= q.value();
            }
            if (v != 0) throw std::invalid_argument("column encoding out of range");
        }
        return m;
    }

    bool operator==(const FqMatrix&) const = default;

private:
    FieldOrder q_;
    std::size_t rows_, cols_;
    std::vector<std::uint8_t> a_;
};

namespace detail {

// Hash for small tuples of 64-bit values (subspace encodings, matrix columns).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct VecU64Hash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const {
        std::uint64_t h = 0x2545f4914f6cdd1dull;
        for (auto x : v) h = mix64(h ^ x);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

}  // namespace qpack
