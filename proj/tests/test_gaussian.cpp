#include <catch2/catch_amalgamated.hpp>
#include <limits>
#include <set>

#include "qpack/enumerate.hpp"

using namespace qpack;

namespace {

// independent evaluation of the product formula, numerator-first with exact
// big-int division at the end
BigInt product_formula(std::uint32_t n, std::uint32_t k, std::uint32_t q) {
    BigInt num = 1, den = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        num *= boost::multiprecision::pow(BigInt(q), n - i) - 1;
        den *= boost::multiprecision::pow(BigInt(q), i + 1) - 1;
    }
    return num / den;
}

}  // namespace

TEST_CASE("gaussian binomial reference values") {
    CHECK(gaussian_binomial(4, 2, 2) == 35);  // (15*7)/(3*1)
    CHECK(gaussian_binomial(6, 3, 2) == 1395);
    CHECK(gaussian_binomial(6, 2, 2) == 651);
    CHECK(gaussian_binomial(5, 0, 2) == 1);
    CHECK(gaussian_binomial(3, 5, 2) == 0);  // k > n by convention
    CHECK(gaussian_binomial(4, 2, 3) == 130);
    // stays exact far beyond 64 bits
    CHECK(gaussian_binomial(64, 32, 2) > BigInt(std::numeric_limits<std::uint64_t>::max()));
}

TEST_CASE("gaussian binomial matches the alternative product arrangement") {
    for (std::uint32_t q : {2u, 3u, 5u})
        for (std::uint32_t n = 0; n <= 8; ++n)
            for (std::uint32_t k = 0; k <= n; ++k)
                CHECK(gaussian_binomial(n, k, q) == product_formula(n, k, q));
}

TEST_CASE("enumeration counts match gaussian binomials for n <= 6, q in {2,3}") {
    for (std::uint32_t q : {2u, 3u})
        for (std::uint32_t n = 1; n <= 6; ++n)
            for (std::uint32_t k = 1; k <= n; ++k) {
                if (gaussian_binomial(n, k, q) > 100000) continue;
                auto subs = enumerate_subspaces(n, k, FieldOrder(q));
                CHECK(BigInt(subs.size()) == gaussian_binomial(n, k, q));
            }
}

TEST_CASE("enumeration reference counts") {
    CHECK(enumerate_subspaces(4, 1, FieldOrder(2)).size() == 15);
    CHECK(enumerate_subspaces(4, 2, FieldOrder(2)).size() == 35);
    auto full = enumerate_subspaces(2, 2, FieldOrder(2));
    REQUIRE(full.size() == 1);
    CHECK(full[0].encoding() == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("enumeration is ascending, canonical, and bijective under encode/decode") {
    for (std::uint32_t q : {2u, 3u}) {
        auto subs = enumerate_subspaces(5, 2, FieldOrder(q));
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (i) CHECK(subs[i - 1].encoding() < subs[i].encoding());
            CHECK(canonicalize(subs[i].basis_matrix()) == subs[i]);
            CHECK(decode_tuple(encode_tuple(subs[i]), 5, FieldOrder(q)) == subs[i]);
        }
    }
}

TEST_CASE("enumeration cap errors with the count") {
    CHECK_THROWS_AS(enumerate_subspaces(10, 5, FieldOrder(2), 1000), CapExceededError);
    CHECK_THROWS_WITH(enumerate_subspaces(4, 2, FieldOrder(2), 10),
                      Catch::Matchers::ContainsSubstring("35"));
}

TEST_CASE("incidence duality by brute force for n <= 6") {
    // every t-subspace lies in exactly [n-t, k-t]_q subspaces of dimension k
    for (std::uint32_t q : {2u, 3u})
        for (std::uint32_t n = 2; n <= (q == 2 ? 6u : 4u); ++n)
            for (std::uint32_t t = 1; t < n; ++t)
                for (std::uint32_t k = t; k <= n; ++k) {
                    if (gaussian_binomial(n, k, q) > 2000) continue;
                    auto ts = enumerate_subspaces(n, t, FieldOrder(q));
                    auto ks = enumerate_subspaces(n, k, FieldOrder(q));
                    BigInt expect = gaussian_binomial(n - t, k - t, q);
                    for (std::size_t i = 0; i < ts.size(); i += std::max<std::size_t>(1, ts.size() / 8)) {
                        std::uint64_t cnt = 0;
                        for (const auto& kk : ks) cnt += contains(ts[i], kk);
                        CHECK(BigInt(cnt) == expect);
                    }
                }
}

TEST_CASE("block t-subspace enumerator agrees with direct containment") {
    for (std::uint32_t q : {2u, 3u}) {
        auto blocks = enumerate_subspaces(4, 3, FieldOrder(q));
        auto ts = enumerate_subspaces(4, 2, FieldOrder(q));
        BlockTEnumerator ben(q, 4, 3, 2);
        for (const auto& b : blocks) {
            std::vector<std::uint64_t> flat;
            ben.enumerate(b.encoding().data(), flat);
            REQUIRE(flat.size() % 2 == 0);
            std::set<std::vector<std::uint64_t>> got;
            for (std::size_t p = 0; p < flat.size(); p += 2)
                got.insert({flat[p], flat[p + 1]});
            CHECK(BigInt(got.size()) == gaussian_binomial(3, 2, q));
            std::set<std::vector<std::uint64_t>> expect;
            for (const auto& t : ts)
                if (contains(t, b)) expect.insert(t.encoding());
            CHECK(got == expect);
        }
    }
}
