#include <random>

#include "doctest.h"
#include "eqsm/matrix.hpp"

using namespace eqsm;

TEST_CASE("matrix arithmetic basics") {
    IntMatrix a(2, 3, {1, 2, 3, 4, 5, 6});
    IntMatrix b(3, 2, {1, 0, 0, 1, 1, 1});
    IntMatrix p = a * b;
    CHECK(p == IntMatrix(2, 2, {4, 5, 10, 11}));
    CHECK(IntMatrix::identity(3) * b == b);
    CHECK((a - a).is_zero());
    CHECK_THROWS_AS(a * a, Error);
}

TEST_CASE("smith normal form invariants on random matrices") {
    std::mt19937_64 rng(20240911);
    std::uniform_int_distribution<int> dim(1, 6), entry(-4, 4);
    for (int trial = 0; trial < 300; ++trial) {
        int r = dim(rng), c = dim(rng);
        IntMatrix a(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) a.at(i, j) = entry(rng);

        SmithForm s = smith_normal_form(a);
        CHECK((s.u * s.u_inv).is_identity());
        CHECK((s.v * s.v_inv).is_identity());
        CHECK(s.u * a * s.v == s.d);
        // diagonal, nonnegative, divisibility chain
        for (int i = 0; i < s.d.rows(); ++i)
            for (int j = 0; j < s.d.cols(); ++j)
                if (i != j) CHECK(s.d.at(i, j) == 0);
        for (size_t i = 0; i + 1 < s.divisors.size(); ++i) {
            CHECK(s.divisors[i] > 0);
            CHECK(s.divisors[i + 1] % s.divisors[i] == 0);
        }
    }
}

TEST_CASE("free quotient of a relation lattice") {
    // Z^3 / <(2,0,0)> has torsion
    IntMatrix r1(3, 1, {2, 0, 0});
    FreeQuotient q1 = free_quotient(r1);
    CHECK_FALSE(q1.free);
    CHECK(q1.torsion == std::vector<long long>{2});

    // Z^3 / <(1,0,0)> is free of rank 2
    IntMatrix r2(3, 1, {1, 0, 0});
    FreeQuotient q2 = free_quotient(r2);
    CHECK(q2.free);
    CHECK(q2.rank == 2);
    CHECK((q2.proj * q2.sect).is_identity());
    CHECK((q2.proj * r2).is_zero());

    // no relations: identity quotient
    FreeQuotient q3 = free_quotient(IntMatrix(4, 0));
    CHECK(q3.free);
    CHECK(q3.rank == 4);

    // full-rank relations: rank 0
    FreeQuotient q4 = free_quotient(IntMatrix::identity(3));
    CHECK(q4.free);
    CHECK(q4.rank == 0);
}

TEST_CASE("free quotient projection kills the relation lattice") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dim(1, 5), entry(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        int n = dim(rng), m = dim(rng);
        IntMatrix rel(n, m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) rel.at(i, j) = entry(rng);
        FreeQuotient q = free_quotient(rel);
        if (!q.free) continue;
        CHECK((q.proj * rel).is_zero());
        CHECK((q.proj * q.sect).is_identity());
        CHECK(q.proj.rows() == q.rank);
    }
}
