#include <random>

#include "doctest.h"
#include "eqsm/group.hpp"
#include "eqsm/gset.hpp"

using namespace eqsm;

namespace {

Subgroup sub_by_label(const FiniteGroup& g, const std::string& label) {
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    int idx = lat.find_subgroup_label(label);
    REQUIRE(idx >= 0);
    return Subgroup{g, lat.subgroups[idx]};
}

// random H-set with orbits drawn from the subgroup lattice of the level
GSet random_gset(const Subgroup& level, int max_orbits, int max_size, std::mt19937_64& rng) {
    const SubgroupLattice& lat = level.group.lattice(level.mask);
    std::vector<std::pair<std::uint64_t, int>> orbits;
    std::uniform_int_distribution<int> count(0, max_orbits);
    std::uniform_int_distribution<size_t> pick(0, lat.subgroups.size() - 1);
    int size = 0;
    for (int i = count(rng); i > 0; --i) {
        std::uint64_t stab = lat.subgroups[pick(rng)];
        int osize = level.order() / Subgroup{level.group, stab}.order();
        if (size + osize > max_size) continue;
        size += osize;
        orbits.push_back({stab, 1});
    }
    return from_orbits(level, orbits);
}

}  // namespace

TEST_CASE("orbits") {
    FiniteGroup c4 = make_group("catalog:C4");
    SUBCASE("G/G is a point") {
        GSet t = orbit(c4.full_subgroup(), c4.full_subgroup());
        CHECK(t.size() == 1);
        CHECK(fixed_points(t, c4.full_subgroup()).size() == 1);
    }
    SUBCASE("C4/C2 has two points swapped by the generator, fixed by C2") {
        Subgroup c2 = sub_by_label(c4, "2.1");
        GSet t = orbit(c4.full_subgroup(), c2);
        REQUIRE(t.size() == 2);
        CHECK(t.act(1, 0) == 1);
        CHECK(t.act(1, 1) == 0);
        CHECK(fixed_points(t, c2).size() == 2);
    }
    SUBCASE("S3/<(12)> has three points") {
        FiniteGroup s3 = make_group("catalog:S3");
        GSet t = orbit(s3.full_subgroup(), sub_by_label(s3, "2.1"));
        CHECK(t.size() == 3);
        CHECK(decompose(t).total_size() == 3);
    }
    SUBCASE("K must be a subgroup of the level") {
        FiniteGroup s3 = make_group("catalog:S3");
        Subgroup a3 = sub_by_label(s3, "3.1");
        Subgroup tau = sub_by_label(s3, "2.1");
        CHECK_THROWS_AS(orbit(tau, a3), Error);
    }
}

TEST_CASE("decompose normal forms from the spec") {
    SUBCASE("one point at level G") {
        FiniteGroup g = make_group("catalog:S3");
        auto d = decompose(point_gset(g.full_subgroup()));
        REQUIRE(d.entries.size() == 1);
        CHECK(d.entries[0].first == g.full_subgroup().mask);
        CHECK(d.entries[0].second == 1);
    }
    SUBCASE("two free C4 orbits") {
        FiniteGroup c4 = make_group("catalog:C4");
        GSet t = disjoint_union(orbit(c4.full_subgroup(), c4.trivial_subgroup()),
                                orbit(c4.full_subgroup(), c4.trivial_subgroup()));
        auto d = decompose(t);
        REQUIRE(d.entries.size() == 1);
        CHECK(d.entries[0].first == c4.trivial_subgroup().mask);
        CHECK(d.entries[0].second == 2);
    }
    SUBCASE("square of S3/<(12)> is one copy of it plus a free orbit") {
        FiniteGroup s3 = make_group("catalog:S3");
        Subgroup tau = sub_by_label(s3, "2.1");
        GSet t = product(orbit(s3.full_subgroup(), tau), orbit(s3.full_subgroup(), tau));
        REQUIRE(t.size() == 9);
        auto d = decompose(t);
        REQUIRE(d.entries.size() == 2);
        CHECK(d.entries[0].first == tau.mask);
        CHECK(d.entries[0].second == 1);
        CHECK(d.entries[1].first == s3.trivial_subgroup().mask);
        CHECK(d.entries[1].second == 1);
    }
    SUBCASE("empty set decomposes to nothing") {
        FiniteGroup g = make_group("catalog:C2");
        CHECK(decompose(empty_gset(g.full_subgroup())).entries.empty());
    }
}

TEST_CASE("restriction") {
    SUBCASE("a point restricts to a fixed point") {
        FiniteGroup g = make_group("catalog:S3");
        GSet r = restrict_gset(point_gset(g.full_subgroup()), sub_by_label(g, "2.1"));
        CHECK(r.size() == 1);
        CHECK(fixed_points(r, sub_by_label(g, "2.1")).size() == 1);
    }
    SUBCASE("S3/<(12)> restricted to <(12)> is a fixed point plus a free orbit") {
        FiniteGroup s3 = make_group("catalog:S3");
        Subgroup tau = sub_by_label(s3, "2.1");
        GSet r = restrict_gset(orbit(s3.full_subgroup(), tau), tau);
        auto d = decompose(r);
        REQUIRE(d.entries.size() == 2);
        CHECK(d.entries[0].first == tau.mask);
        CHECK(d.entries[0].second == 1);
        CHECK(d.entries[1].first == s3.trivial_subgroup().mask);
        CHECK(d.entries[1].second == 1);
    }
    SUBCASE("C4/C2 restricted to C2 is two fixed points") {
        FiniteGroup c4 = make_group("catalog:C4");
        Subgroup c2 = sub_by_label(c4, "2.1");
        GSet r = restrict_gset(orbit(c4.full_subgroup(), c2), c2);
        CHECK(fixed_points(r, c2).size() == 2);
    }
    SUBCASE("restriction matches the double coset decomposition") {
        for (const char* spec : {"catalog:S3", "catalog:D8", "catalog:Q8"}) {
            FiniteGroup g = make_group(spec);
            const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
            for (std::uint64_t km : lat.subgroups)
                for (std::uint64_t hm : lat.subgroups) {
                    Subgroup k = g.subgroup(km), h = g.subgroup(hm);
                    GSet lhs = restrict_gset(orbit(g.full_subgroup(), h), k);
                    auto dc = double_cosets(k, h);
                    std::vector<std::pair<std::uint64_t, int>> orbits;
                    for (const auto& s : dc.stabilizers) orbits.push_back({s.mask, 1});
                    CHECK(is_isomorphic(lhs, from_orbits(k, orbits)));
                }
        }
    }
}

TEST_CASE("induction") {
    FiniteGroup c4 = make_group("catalog:C4");
    Subgroup c2 = sub_by_label(c4, "2.1");
    SUBCASE("induction of the empty set is empty") {
        CHECK(induce(c4.full_subgroup(), empty_gset(c2)).size() == 0);
    }
    SUBCASE("transitivity: inducing a free C2-orbit gives the free C4-orbit") {
        GSet t = induce(c4.full_subgroup(), orbit(c2, c4.trivial_subgroup()));
        CHECK(is_isomorphic(t, orbit(c4.full_subgroup(), c4.trivial_subgroup())));
    }
    SUBCASE("inducing a point gives the orbit") {
        FiniteGroup s3 = make_group("catalog:S3");
        Subgroup tau = sub_by_label(s3, "2.1");
        GSet t = induce(s3.full_subgroup(), point_gset(tau));
        CHECK(is_isomorphic(t, orbit(s3.full_subgroup(), tau)));
    }
    SUBCASE("cardinality is the index times the size") {
        std::mt19937_64 rng(11);
        FiniteGroup d8 = make_group("catalog:D8");
        const SubgroupLattice& lat = d8.lattice(d8.full_subgroup().mask);
        for (int trial = 0; trial < 30; ++trial) {
            std::uniform_int_distribution<size_t> pick(0, lat.subgroups.size() - 1);
            Subgroup k = d8.subgroup(lat.subgroups[pick(rng)]);
            GSet t = random_gset(k, 3, 8, rng);
            GSet ind = induce(d8.full_subgroup(), t);
            CHECK(ind.size() == (d8.order() / k.order()) * t.size());
        }
    }
}

TEST_CASE("coinduction") {
    SUBCASE("coinduction of a point is a fixed point") {
        FiniteGroup s3 = make_group("catalog:S3");
        GSet t = coinduce(s3.full_subgroup(), point_gset(sub_by_label(s3, "2.1")));
        CHECK(t.size() == 1);
        CHECK(fixed_points(t, s3.full_subgroup()).size() == 1);
    }
    SUBCASE("coinduce(C2, two trivial points) is two fixed points and a free orbit") {
        FiniteGroup c2 = make_group("catalog:C2");
        GSet two = from_orbits(c2.trivial_subgroup(),
                               {{c2.trivial_subgroup().mask, 2}});
        GSet t = coinduce(c2.full_subgroup(), two);
        REQUIRE(t.size() == 4);
        auto d = decompose(t);
        REQUIRE(d.entries.size() == 2);
        CHECK(d.entries[0].first == c2.full_subgroup().mask);
        CHECK(d.entries[0].second == 2);
        CHECK(d.entries[1].first == c2.trivial_subgroup().mask);
        CHECK(d.entries[1].second == 1);
    }
    SUBCASE("coinduce(C4, free C2-orbit) is the free C4-orbit") {
        FiniteGroup c4 = make_group("catalog:C4");
        Subgroup c2 = sub_by_label(c4, "2.1");
        GSet t = coinduce(c4.full_subgroup(), orbit(c2, c4.trivial_subgroup()));
        REQUIRE(t.size() == 4);
        CHECK(is_isomorphic(t, orbit(c4.full_subgroup(), c4.trivial_subgroup())));
        CHECK(fixed_points(t, c2).empty());
    }
    SUBCASE("cardinality and fixed-point laws") {
        std::mt19937_64 rng(13);
        FiniteGroup d8 = make_group("catalog:D8");
        const SubgroupLattice& lat = d8.lattice(d8.full_subgroup().mask);
        std::uniform_int_distribution<size_t> pick(0, lat.subgroups.size() - 1);
        for (int trial = 0; trial < 40; ++trial) {
            std::uint64_t km = lat.subgroups[pick(rng)];
            std::uint64_t hm = lat.subgroups[pick(rng)];
            if ((km & ~hm) != 0) continue;
            Subgroup k = d8.subgroup(km), h = d8.subgroup(hm);
            GSet t = random_gset(k, 2, 3, rng);
            int index = h.order() / k.order();
            long long expect = 1;
            for (int i = 0; i < index; ++i) expect *= t.size();
            if (expect > 100000) continue;
            GSet c = coinduce(h, t);
            CHECK(c.size() == expect);
            // H-fixed points of the coinduction match K-fixed points of T
            CHECK(fixed_points(c, h).empty() == fixed_points(t, k).empty());
        }
    }
    SUBCASE("the function-space cap is enforced") {
        FiniteGroup c32 = make_group("catalog:C32");
        GSet t = from_orbits(c32.trivial_subgroup(), {{c32.trivial_subgroup().mask, 3}});
        CHECK_THROWS_AS(coinduce(c32.full_subgroup(), t), Error);
    }
}

TEST_CASE("products and disjoint unions") {
    FiniteGroup c2 = make_group("catalog:C2");
    Subgroup top = c2.full_subgroup(), e = c2.trivial_subgroup();
    SUBCASE("product with a point is the identity up to isomorphism") {
        GSet t = disjoint_union(orbit(top, e), point_gset(top));
        CHECK(is_isomorphic(product(t, point_gset(top)), t));
    }
    SUBCASE("square of the free C2-orbit is two free orbits") {
        GSet f = orbit(top, e);
        auto d = decompose(product(f, f));
        REQUIRE(d.entries.size() == 1);
        CHECK(d.entries[0].first == e.mask);
        CHECK(d.entries[0].second == 2);
    }
    SUBCASE("empty set is the unit for disjoint union") {
        GSet t = orbit(top, e);
        CHECK(is_isomorphic(disjoint_union(empty_gset(top), t), t));
    }
    SUBCASE("commutativity and associativity up to isomorphism") {
        std::mt19937_64 rng(17);
        FiniteGroup s3 = make_group("catalog:S3");
        for (int trial = 0; trial < 25; ++trial) {
            GSet a = random_gset(s3.full_subgroup(), 2, 6, rng);
            GSet b = random_gset(s3.full_subgroup(), 2, 6, rng);
            GSet c = random_gset(s3.full_subgroup(), 2, 6, rng);
            CHECK(is_isomorphic(product(a, b), product(b, a)));
            CHECK(is_isomorphic(product(product(a, b), c), product(a, product(b, c))));
            CHECK(is_isomorphic(disjoint_union(a, b), disjoint_union(b, a)));
        }
    }
}

TEST_CASE("fixed points") {
    FiniteGroup c4 = make_group("catalog:C4");
    CHECK(fixed_points(orbit(c4.full_subgroup(), c4.trivial_subgroup()),
                       sub_by_label(c4, "2.1"))
              .empty());
    SUBCASE("coinduction of a set with a fixed point has one") {
        FiniteGroup c2 = make_group("catalog:C2");
        GSet base = disjoint_union(orbit(c2.full_subgroup(), c2.full_subgroup()),
                                   orbit(c2.full_subgroup(), c2.trivial_subgroup()));
        GSet t = coinduce(c2.full_subgroup(), restrict_gset(base, c2.trivial_subgroup()));
        CHECK_FALSE(fixed_points(t, c2.full_subgroup()).empty());
    }
}

TEST_CASE("isomorphism is decided by the orbit normal form") {
    FiniteGroup c2 = make_group("catalog:C2");
    GSet free = orbit(c2.full_subgroup(), c2.trivial_subgroup());
    GSet two_fixed = from_orbits(c2.full_subgroup(), {{c2.full_subgroup().mask, 2}});
    CHECK(is_isomorphic(free, free));
    CHECK_FALSE(is_isomorphic(free, two_fixed));
}

TEST_CASE("frobenius reciprocity on random small sets") {
    std::mt19937_64 rng(23);
    for (const char* spec : {"catalog:C4", "catalog:S3", "catalog:D8"}) {
        FiniteGroup g = make_group(spec);
        const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
        std::uniform_int_distribution<size_t> pick(0, lat.subgroups.size() - 1);
        for (int trial = 0; trial < 20; ++trial) {
            Subgroup h = g.subgroup(lat.subgroups[pick(rng)]);
            GSet s = random_gset(h, 2, 6, rng);
            GSet t = random_gset(g.full_subgroup(), 2, 6, rng);
            GSet lhs = product(induce(g.full_subgroup(), s), t);
            GSet rhs = induce(g.full_subgroup(), product(s, restrict_gset(t, h)));
            CHECK(is_isomorphic(lhs, rhs));
        }
    }
}
