#include <catch2/catch_amalgamated.hpp>

#include <latbound/lattice.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

#include <algorithm>

using namespace latbound;
using fixtures::a2;
using fixtures::lat;
using fixtures::minus_e8;

TEST_CASE("Gram matrices must be square and symmetric") {
    IntMat rect(2, 3);
    CHECK_THROWS_AS(Lattice{rect}, BadInput);
    IntMat skew(2, 2);
    skew(0, 1) = 1;
    skew(1, 0) = -1;
    skew(0, 0) = skew(1, 1) = -2;
    CHECK_THROWS_AS(Lattice{skew}, BadInput);
}

TEST_CASE("determinant of small lattices") {
    CHECK(determinant(Lattice::empty()) == 1);
    CHECK(determinant(Lattice::standard_diagonal(2)) == 1);
    CHECK(determinant(minus_e8()) == 1);
    CHECK(determinant(a2()) == 3);
    CHECK(determinant(lat({{-2, 1}, {1, -1}})) == 1);
}

TEST_CASE("determinant agrees with cofactor expansion") {
    oracle::TestRng rng(901101);
    for (int trial = 0; trial < 40; ++trial) {
        int rank = rng.pick(1, 5);
        Lattice L = oracle::random_congruence(rng, oracle::random_negdef(rng, rank));
        CHECK(determinant(L) == oracle::cofactor_det(L.gram));
    }
}

TEST_CASE("negative definiteness by leading minors") {
    CHECK(is_negative_definite(Lattice::empty()));
    CHECK(is_negative_definite(Lattice::standard_diagonal(3)));
    CHECK(is_negative_definite(minus_e8()));
    CHECK(is_negative_definite(a2()));
    CHECK_FALSE(is_negative_definite(lat({{-1, 0}, {0, 1}})));
    CHECK_FALSE(is_negative_definite(lat({{0}})));
    CHECK_FALSE(is_negative_definite(lat({{1}})));
    CHECK_FALSE(is_negative_definite(lat({{-2, 3}, {3, -2}})));

    oracle::TestRng rng(901102);
    for (int trial = 0; trial < 30; ++trial)
        CHECK(is_negative_definite(oracle::random_negdef(rng, rng.pick(1, 5))));
}

TEST_CASE("direct sums stack blocks") {
    Lattice one = Lattice::standard_diagonal(1);
    CHECK(direct_sum(one, one) == Lattice::standard_diagonal(2));

    Lattice L = a2();
    CHECK(direct_sum(Lattice::empty(), L) == L);
    CHECK(direct_sum(L, Lattice::empty()) == L);

    Lattice two = Lattice::diagonal({-2});
    CHECK(determinant(direct_sum(two, two)) == 4);

    oracle::TestRng rng(901103);
    for (int trial = 0; trial < 20; ++trial) {
        Lattice A = oracle::random_negdef(rng, rng.pick(1, 4));
        Lattice B = oracle::random_negdef(rng, rng.pick(1, 4));
        Lattice S = direct_sum(A, B);
        CHECK(S.rank() == A.rank() + B.rank());
        CHECK(determinant(S) == determinant(A) * determinant(B));
    }
}

TEST_CASE("dual gram is the exact inverse") {
    RatMat d = dual_gram(Lattice::diagonal({-2}));
    CHECK(d(0, 0) == Rat(-1, 2));

    RatMat d2 = dual_gram(Lattice::standard_diagonal(2));
    CHECK(d2(0, 0) == -1);
    CHECK(d2(0, 1) == 0);
    CHECK(d2(1, 1) == -1);

    // index-3 sublattice of <-1>^3 on basis 3e1, e2+e1, e3+e1
    Lattice Q = oracle::index_p_sublattice(3, {1, 1});
    RatMat dq = dual_gram(Q);
    CHECK(dq(0, 0) == Rat(-1, 3));
    CHECK(dq(0, 1) == Rat(1, 3));
    CHECK(dq(0, 2) == Rat(1, 3));

    CHECK_THROWS_AS(dual_gram(lat({{0}})), SingularGram);

    oracle::TestRng rng(901104);
    for (int trial = 0; trial < 20; ++trial) {
        Lattice L = oracle::random_negdef(rng, rng.pick(1, 4));
        RatMat inv = dual_gram(L);
        CHECK(inv == oracle::adjugate_inverse(L.gram));
        CHECK(mat_mul(to_rat(L.gram), inv) == RatMat::identity(L.rank()));
    }
}

TEST_CASE("orthogonal complements restrict the pairing") {
    Lattice C1 = orthogonal_complement(Lattice::standard_diagonal(2), {{1, 0}});
    CHECK(C1 == Lattice::diagonal({-1}));

    Lattice C2 = orthogonal_complement(Lattice::standard_diagonal(4), {{1, 1, 1, 1}});
    CHECK(C2.rank() == 3);
    CHECK(determinant(C2) == -4);

    Lattice e8 = minus_e8();
    Lattice C3 = orthogonal_complement(e8, {{1, 0, 0, 0, 0, 0, 0, 0}});
    CHECK(C3.rank() == 7);
    CHECK(determinant(C3) == -2);
    CHECK(is_negative_definite(C3));

    CHECK_THROWS_AS(orthogonal_complement(Lattice::standard_diagonal(2), {{1, 0}, {1, 0}}),
                    DegenerateSublattice);
}

TEST_CASE("stable reduction splits off unit summands") {
    StableReduction r1 = reduce_stable(Lattice::standard_diagonal(2));
    CHECK(r1.core.rank() == 0);
    CHECK(r1.split_count == 2);

    StableReduction r2 = reduce_stable(lat({{-2, 1}, {1, -1}}));
    CHECK(r2.core.rank() == 0);
    CHECK(r2.split_count == 2);

    Lattice A = a2();
    StableReduction r3 = reduce_stable(A);
    CHECK(r3.core == A);
    CHECK(r3.split_count == 0);

    CHECK_THROWS_AS(reduce_stable(lat({{1}})), NotDefinite);
}

TEST_CASE("stable reduction is idempotent and preserves the class") {
    oracle::TestRng rng(901105);
    for (int trial = 0; trial < 15; ++trial) {
        Lattice L = oracle::random_negdef(rng, rng.pick(1, 4));
        StableReduction r = reduce_stable(L);
        CHECK(shortest_vectors(r.core, 1).empty());
        CHECK(reduce_stable(r.core).split_count == 0);
        Lattice back = direct_sum(r.core, Lattice::standard_diagonal(r.split_count));
        CHECK(is_isometric(back, L).has_value());
    }
}

TEST_CASE("short vector lists") {
    auto sv = shortest_vectors(Lattice::standard_diagonal(2), 1);
    REQUIRE(sv.size() == 2);
    for (const auto& v : sv) CHECK(v.norm == -1);

    CHECK(shortest_vectors(a2(), 2).size() == 3);
    CHECK(shortest_vectors(minus_e8(), 2).size() == 120);

    CHECK_THROWS_AS(shortest_vectors(lat({{-1, 0}, {0, 1}}), 1), NotDefinite);
}

TEST_CASE("short vector lists match a box search") {
    oracle::TestRng rng(901106);
    for (int trial = 0; trial < 15; ++trial) {
        Lattice L = oracle::random_negdef(rng, rng.pick(1, 3));
        Int bound = rng.pick(1, 6);
        auto got = shortest_vectors(L, bound);
        auto want = oracle::box_short_vectors(L, bound);
        REQUIRE(got.size() == want.size());
        for (const auto& v : got) {
            CHECK(v.norm == pairing(L, v.coords, v.coords));
            CHECK(-v.norm <= bound);
        }
    }
}

TEST_CASE("isometry witnesses") {
    auto w1 = is_isometric(Lattice::diagonal({-1, -4}), Lattice::diagonal({-4, -1}));
    REQUIRE(w1.has_value());

    CHECK_FALSE(is_isometric(Lattice::diagonal({-2, -2}), a2()).has_value());

    auto w2 = is_isometric(lat({{-2, 1}, {1, -1}}), Lattice::standard_diagonal(2));
    REQUIRE(w2.has_value());

    CHECK(is_isometric(fixtures::minus_e8(), fixtures::minus_e8()).has_value());
    CHECK_THROWS_AS(is_isometric(lat({{-1, 0}, {0, 1}}), lat({{-1, 0}, {0, 1}})),
                    NotDefinite);
}

TEST_CASE("isometry witnesses change basis exactly") {
    oracle::TestRng rng(901107);
    for (int trial = 0; trial < 15; ++trial) {
        Lattice L = oracle::random_negdef(rng, rng.pick(1, 4));
        Lattice M = oracle::random_congruence(rng, L);
        auto w = is_isometric(L, M);
        REQUIRE(w.has_value());
        CHECK(mat_mul(mat_mul(w->transposed(), M.gram), *w) == L.gram);
        CHECK(abs_int(det_int(*w)) == 1);
        CHECK(is_isometric(M, L).has_value());
    }
}

TEST_CASE("lattices that merely share determinants are told apart") {
    // same rank and determinant, different minimal norms
    CHECK_FALSE(is_isometric(Lattice::diagonal({-1, -4}), Lattice::diagonal({-2, -2})).has_value());
}
