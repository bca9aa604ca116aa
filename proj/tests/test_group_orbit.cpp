#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <set>

#include "qpack/fixtures.hpp"
#include "qpack/orbit.hpp"

using namespace qpack;

namespace {

FqMatrix from_rows(std::uint32_t q, const std::vector<std::vector<std::uint8_t>>& rows) {
    FqMatrix m(FieldOrder(q), rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = rows[r][c];
    return m;
}

// the section-3 example group of order 6 in GL(4,2)
GroupGens example_g4() {
    return load_fixture_generators("example_g4").gens;
}

FqMatrix random_invertible(std::mt19937_64& rng, std::uint32_t q, std::uint32_t n) {
    while (true) {
        FqMatrix m(FieldOrder(q), n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                m.at(r, c) = static_cast<std::uint8_t>(rng() % q);
        if (detail::is_invertible(m)) return m;
    }
}

Subspace random_subspace(std::mt19937_64& rng, std::uint32_t q, std::uint32_t n,
                         std::uint32_t k) {
    while (true) {
        FqMatrix m(FieldOrder(q), n, k);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < k; ++c)
                m.at(r, c) = static_cast<std::uint8_t>(rng() % q);
        try {
            Subspace s = canonicalize(m);
            if (s.k() == k) return s;
        } catch (const std::invalid_argument&) {
        }
    }
}

}  // namespace

TEST_CASE("group construction validates generators") {
    CHECK_THROWS_WITH(GroupGens(FieldOrder(2), 2, {from_rows(2, {{1, 1}, {1, 1}})}),
                      Catch::Matchers::ContainsSubstring("singular"));
    CHECK_NOTHROW(GroupGens(FieldOrder(2), 2, {from_rows(2, {{0, 1}, {1, 0}})}));
}

TEST_CASE("closure orders of the small fixture groups") {
    CHECK(close_group(GroupGens::trivial(FieldOrder(2), 4)).order() == 1);
    CHECK(close_group(example_g4()).order() == 6);

    // GL(2,2) from a transposition and a shear
    GroupGens gl22(FieldOrder(2), 2,
                   {from_rows(2, {{0, 1}, {1, 0}}), from_rows(2, {{1, 1}, {0, 1}})});
    CHECK(close_group(gl22).order() == 6);

    CHECK(close_group(load_fixture_generators("gen_n7").gens).order() == 15);
}

TEST_CASE("closure cap is enforced") {
    CHECK_THROWS_AS(close_group(load_fixture_generators("gen_n7").gens, 10), CapExceededError);
}

TEST_CASE("action basics") {
    auto g4 = example_g4();
    std::mt19937_64 rng(23);
    FqMatrix id = FqMatrix::identity(FieldOrder(2), 4);
    for (int trial = 0; trial < 50; ++trial) {
        Subspace s = random_subspace(rng, 2, 4, 1 + rng() % 4);
        CHECK(act(id, s) == s);
        Subspace gs = act(g4.generators[0], s);
        CHECK(gs.k() == s.k());
    }
}

TEST_CASE("action preserves incidence and composes") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        std::uint32_t q = (trial % 2) ? 2 : 3;
        std::uint32_t n = 3 + rng() % 2;
        FqMatrix g = random_invertible(rng, q, n);
        FqMatrix h = random_invertible(rng, q, n);
        std::uint32_t kt = 1 + rng() % (n - 1);
        Subspace t = random_subspace(rng, q, n, kt);
        Subspace k = random_subspace(rng, q, n, kt + rng() % (n - kt));

        CHECK(contains(t, k) == contains(act(g, t), act(g, k)));

        // act(g*h, K) = act(g, act(h, K))
        auto gh = detail::ActionMatrix::from(g).mul(detail::ActionMatrix::from(h));
        CHECK(act(gh.to_matrix(), k) == act(g, act(h, k)));
    }
}

TEST_CASE("orbit of a line under GL(2,2) covers all three lines") {
    GroupGens gl22(FieldOrder(2), 2,
                   {from_rows(2, {{0, 1}, {1, 0}}), from_rows(2, {{1, 1}, {0, 1}})});
    Orbit o = orbit_of(gl22, decode_tuple({1}, 2, FieldOrder(2)));
    CHECK(o.size == 3);
    CHECK(o.representative.encoding() == std::vector<std::uint64_t>{1});
}

TEST_CASE("orbit under the trivial group is a singleton") {
    auto s = decode_tuple({1, 2}, 4, FieldOrder(2));
    Orbit o = orbit_of(GroupGens::trivial(FieldOrder(2), 4), s);
    CHECK(o.size == 1);
    CHECK(o.representative == s);
}

TEST_CASE("orbit representative is minimal and sizes divide the group order") {
    auto g4 = example_g4();
    std::uint64_t order = close_group(g4).order();
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        Subspace s = random_subspace(rng, 2, 4, 1 + rng() % 3);
        Orbit o = orbit_of(g4, s);
        CHECK(order % o.size == 0);
        REQUIRE(o.materialized());
        for (std::size_t e = 0; e < o.element_count(); ++e)
            CHECK(!(o.element_subspace(e).encoding() < o.representative.encoding()));
    }
}

TEST_CASE("orbit partition of the example groups has the published shape") {
    auto g = example_g4();
    GroupClosure gc = close_group(g);
    GroupGens h = cyclic_subgroup_of_order(gc, 3);

    OrbitPartition h1 = orbit_partition(h, 1);
    OrbitPartition h2 = orbit_partition(h, 2);
    OrbitPartition g1 = orbit_partition(g, 1);
    OrbitPartition g2 = orbit_partition(g, 2);

    CHECK(h1.orbits.size() == 7);
    CHECK(h2.orbits.size() == 13);
    CHECK(g1.orbits.size() == 5);
    CHECK(g2.orbits.size() == 9);
    CHECK(h2.total_size() == 35);
    CHECK(g2.total_size() == 35);

    // the published orbit-size row of A^H: eleven 3s and two 1s
    std::multiset<std::uint64_t> sizes;
    for (const auto& o : h2.orbits) sizes.insert(o.size);
    CHECK(sizes == std::multiset<std::uint64_t>{1, 1, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3});

    // partition property: orbits disjoint (count distinct elements)
    std::set<std::vector<std::uint64_t>> all;
    for (const auto& o : h2.orbits)
        for (std::size_t e = 0; e < o.element_count(); ++e)
            all.insert({o.element(e), o.element(e) + o.k});
    CHECK(all.size() == 35);
}

TEST_CASE("fusion of the example subgroup pair") {
    auto g = example_g4();
    GroupGens h = cyclic_subgroup_of_order(close_group(g), 3);

    FusionMap fk = fuse(h, g, 2);
    CHECK(fk.fine.orbits.size() == 13);
    CHECK(fk.coarse.orbits.size() == 9);
    CHECK(fk.assignment ==
          std::vector<std::uint32_t>{0, 1, 2, 2, 1, 3, 4, 5, 6, 7, 6, 8, 5});

    FusionMap ft = fuse(h, g, 1);
    CHECK(ft.assignment == std::vector<std::uint32_t>{0, 1, 2, 2, 1, 3, 4});

    // part-size multisets match the published vertical/horizontal partitions
    auto part_sizes = [](const FusionMap& f) {
        std::multiset<std::size_t> out;
        for (const auto& p : f.parts()) out.insert(p.size());
        return out;
    };
    CHECK(part_sizes(fk) == std::multiset<std::size_t>{1, 1, 1, 1, 1, 2, 2, 2, 2});
    CHECK(part_sizes(ft) == std::multiset<std::size_t>{1, 1, 1, 2, 2});

    // identity fusion
    FusionMap fid = fuse(g, g, 2);
    for (std::uint32_t i = 0; i < fid.assignment.size(); ++i)
        CHECK(fid.assignment[i] == i);

    // H not a subgroup of G
    GroupGens stranger(FieldOrder(2), 4, {from_rows(2, {{1, 0, 0, 0},
                                                        {1, 1, 0, 0},
                                                        {0, 0, 1, 0},
                                                        {0, 0, 0, 1}})});
    CHECK_THROWS_WITH(fuse(stranger, g, 2),
                      Catch::Matchers::ContainsSubstring("not a subgroup"));
}

TEST_CASE("cyclic subgroups by element order") {
    GroupClosure c15 = close_group(load_fixture_generators("gen_n7").gens);
    REQUIRE(c15.order() == 15);
    for (std::uint64_t m : {1ull, 3ull, 5ull, 15ull}) {
        GroupGens sub = cyclic_subgroup_of_order(c15, m);
        CHECK(close_group(sub).order() == m);
    }
    CHECK_THROWS_AS(cyclic_subgroup_of_order(c15, 4), std::invalid_argument);
}
