#include <catch2/catch_amalgamated.hpp>
#include <optional>
#include <random>

#include "qpack/subspace.hpp"

using namespace qpack;

namespace {

FqMatrix cols_matrix(std::uint32_t q, std::uint32_t n,
                     const std::vector<std::vector<std::uint8_t>>& cols) {
    FqMatrix m(FieldOrder(q), n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < n; ++r) m.at(r, c) = cols[c][r];
    return m;
}

FqMatrix random_matrix(std::mt19937_64& rng, std::uint32_t q, std::uint32_t n,
                       std::uint32_t cols) {
    FqMatrix m(FieldOrder(q), n, cols);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m.at(r, c) = static_cast<std::uint8_t>(rng() % q);
    return m;
}

// test-local naive mod-q matrix-vector product, the oracle for the packed path
std::uint64_t naive_apply(const FqMatrix& g, std::uint64_t venc) {
    const std::uint32_t q = g.q(), n = static_cast<std::uint32_t>(g.rows());
    std::vector<std::uint32_t> v(n), out(n, 0);
    for (std::uint32_t r = 0; r < n; ++r) {
        v[r] = venc % q;
        venc /= q;
    }
    for (std::uint32_t r = 0; r < n; ++r)
        for (std::uint32_t c = 0; c < n; ++c) out[r] = (out[r] + g.at(r, c) * v[c]) % q;
    std::uint64_t enc = 0, p = 1;
    for (std::uint32_t r = 0; r < n; ++r, p *= q) enc += p * out[r];
    return enc;
}

}  // namespace

TEST_CASE("canonicalize forces span equality") {
    // {e0+e1, e1} spans the same plane as {e0, e1}
    auto s = canonicalize(cols_matrix(2, 4, {{1, 1, 0, 0}, {0, 1, 0, 0}}));
    CHECK(s.encoding() == std::vector<std::uint64_t>{1, 2});
    CHECK(s.k() == 2);
}

TEST_CASE("canonicalize keeps the published triple form") {
    // {e5, e6, e0+e1+e2} in F_2^7 is already reduced; sorted encoding (7,32,64)
    auto s = canonicalize(cols_matrix(2, 7,
                                      {{0, 0, 0, 0, 0, 1, 0},
                                       {0, 0, 0, 0, 0, 0, 1},
                                       {1, 1, 1, 0, 0, 0, 0}}));
    CHECK(s.encoding() == std::vector<std::uint64_t>{7, 32, 64});
}

TEST_CASE("canonicalize drops dependent columns and rejects the zero span") {
    auto s = canonicalize(cols_matrix(2, 3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}));
    CHECK(s.k() == 2);
    CHECK_THROWS_AS(canonicalize(cols_matrix(2, 3, {{0, 0, 0}})), std::invalid_argument);
}

TEST_CASE("canonicalize is idempotent on random input") {
    std::mt19937_64 rng(7);
    for (std::uint32_t q : {2u, 3u, 5u}) {
        for (int trial = 0; trial < 200; ++trial) {
            std::uint32_t n = 2 + rng() % 5;
            std::uint32_t c = 1 + rng() % n;
            FqMatrix m = random_matrix(rng, q, n, c);
            std::optional<Subspace> s1;
            try {
                s1 = canonicalize(m);
            } catch (const std::invalid_argument&) {
                continue;  // zero span
            }
            Subspace s2 = canonicalize(s1->basis_matrix());
            CHECK(*s1 == s2);
        }
    }
}

TEST_CASE("decode_tuple round trips and validates") {
    auto s = decode_tuple({7, 32, 64}, 7, FieldOrder(2));
    CHECK(s.k() == 3);
    CHECK(encode_tuple(s) == std::vector<std::uint64_t>{7, 32, 64});

    CHECK(decode_tuple({1}, 4, FieldOrder(2)).encoding() == std::vector<std::uint64_t>{1});

    CHECK_THROWS_WITH(decode_tuple({3, 1, 2}, 4, FieldOrder(2)),
                      Catch::Matchers::ContainsSubstring("degenerate block"));
    CHECK_THROWS_WITH(decode_tuple({16}, 4, FieldOrder(2)),
                      Catch::Matchers::ContainsSubstring("out of range"));
    CHECK_THROWS_AS(decode_tuple({}, 4, FieldOrder(2)), std::invalid_argument);
}

TEST_CASE("containment") {
    auto line0 = decode_tuple({1}, 4, FieldOrder(2));
    auto line2 = decode_tuple({4}, 4, FieldOrder(2));
    auto plane = decode_tuple({1, 2}, 4, FieldOrder(2));
    CHECK(contains(line0, plane));
    CHECK_FALSE(contains(line2, plane));
    CHECK_THROWS_AS(contains(line0, decode_tuple({1}, 5, FieldOrder(2))),
                    std::invalid_argument);
}

TEST_CASE("intersection dimension and subspace distance") {
    auto a = decode_tuple({1, 2}, 4, FieldOrder(2));  // span{e0,e1}
    auto b = decode_tuple({2, 4}, 4, FieldOrder(2));  // span{e1,e2}
    CHECK(intersection_dim(a, b) == 1);
    CHECK(intersection_dim(a, a) == a.k());
    CHECK(subspace_distance(a, a) == 0);
    CHECK(subspace_distance(a, b) == 2);

    auto l1 = decode_tuple({1}, 2, FieldOrder(2));
    auto l2 = decode_tuple({2}, 2, FieldOrder(2));
    CHECK(subspace_distance(l1, l2) == 2);

    // dim-3 blocks meeting in a line
    auto s = decode_tuple({1, 2, 4}, 6, FieldOrder(2));
    auto t = decode_tuple({1, 8, 16}, 6, FieldOrder(2));
    CHECK(intersection_dim(s, t) == 1);
    CHECK(subspace_distance(s, t) == 4);
}

TEST_CASE("subspace distance is a metric on random triples") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        std::uint32_t q = (trial % 2) ? 2 : 3;
        std::uint32_t n = 3 + rng() % 3;
        auto rand_sub = [&] {
            while (true) {
                try {
                    return canonicalize(random_matrix(rng, q, n, 1 + rng() % n));
                } catch (const std::invalid_argument&) {
                }
            }
        };
        Subspace a = rand_sub(), b = rand_sub(), c = rand_sub();
        CHECK(subspace_distance(a, b) == subspace_distance(b, a));
        CHECK((subspace_distance(a, b) == 0) == (a == b));
        CHECK(subspace_distance(a, c) <= subspace_distance(a, b) + subspace_distance(b, c));
    }
}

TEST_CASE("rank identity holds on random pairs") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        std::uint32_t q = (trial % 3 == 0) ? 3 : 2;
        std::uint32_t n = 3 + rng() % 4;
        auto rand_sub = [&] {
            while (true) {
                try {
                    return canonicalize(random_matrix(rng, q, n, 1 + rng() % n));
                } catch (const std::invalid_argument&) {
                }
            }
        };
        Subspace s = rand_sub(), k = rand_sub();
        CHECK(intersection_dim(s, k) + detail::joint_rank(s, k) == s.k() + k.k());
    }
}

TEST_CASE("packed and generic reduction paths agree at q = 2") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        std::uint32_t n = 2 + rng() % 9;
        std::uint32_t c = 1 + rng() % n;
        FqMatrix m = random_matrix(rng, 2, n, c);
        std::vector<std::uint64_t> packed = m.column_encodings();
        std::size_t rank = detail::canonical_basis_gf2(packed);
        packed.resize(rank);

        detail::DigitCols dc{2, n, {}};
        dc.d.resize(c * n);
        for (std::size_t j = 0; j < c; ++j)
            for (std::size_t r = 0; r < n; ++r) dc.col(j)[r] = m.at(r, j);
        detail::canonical_basis_generic(dc);
        std::vector<std::uint64_t> generic(dc.count());
        for (std::size_t j = 0; j < dc.count(); ++j)
            generic[j] = detail::encode_digits(dc.col(j), n, 2);

        CHECK(packed == generic);
    }
}

TEST_CASE("packed action agrees with a naive mod-q product") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 300; ++trial) {
        std::uint32_t n = 2 + rng() % 10;
        FqMatrix g = random_matrix(rng, 2, n, n);
        auto am = detail::ActionMatrix::from(g);
        std::uint64_t v = rng() & ((std::uint64_t(1) << n) - 1);
        CHECK(am.apply(v) == naive_apply(g, v));
    }
}
