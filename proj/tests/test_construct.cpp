#include "doctest.h"

#include <random>
#include <stdexcept>

#include "sums4/arith.hpp"
#include "sums4/construct.hpp"

using namespace sums4;

TEST_CASE("euler_compose: frozen fixtures and the norm identity") {
    const EulerWeights W1{1, 2, 2, 0};
    const auto s1 = euler_compose(W1, {1, 2, -6, 2});
    CHECK(s1 == StuvVector{-7, 4, -12, -14});
    CHECK(i128(s1.s) * s1.s + i128(s1.t) * s1.t + i128(s1.u) * s1.u + i128(s1.v) * s1.v ==
          i128(9) * 45);

    const EulerWeights W2{1, 2, 3, 0};
    const auto s2 = euler_compose(W2, {4, 1, -4, 3});
    CHECK(s2 == StuvVector{-6, 2, -22, -8});
    CHECK(i128(s2.s) * s2.s + i128(s2.t) * s2.t + i128(s2.u) * s2.u + i128(s2.v) * s2.v ==
          i128(14) * 42);
}

TEST_CASE("back_solve: exact inverse on random quadruples, none on bad numerators") {
    const EulerWeights weights[] = {{1, 2, 2, 0}, {1, 2, 3, 0}, {1, 1, 1, 1}, {3, 1, 0, 2}};
    std::mt19937_64 rng(20201005);
    std::uniform_int_distribution<i64> coord(-1000, 1000);
    u64 bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const EulerWeights& W = weights[i % 4];
        const SignedDecomposition q{coord(rng), coord(rng), coord(rng), coord(rng)};
        const auto stuv = euler_compose(W, q);
        const i128 lhs = i128(stuv.s) * stuv.s + i128(stuv.t) * stuv.t + i128(stuv.u) * stuv.u +
                         i128(stuv.v) * stuv.v;
        if (lhs != i128(W.norm()) * q.norm()) ++bad;
        const auto back = back_solve(W, stuv);
        if (!back || !(*back == q)) ++bad;
    }
    CHECK(bad == 0);

    // numerator 1 is not divisible by N = 9
    CHECK(!back_solve({1, 2, 2, 0}, {1, 0, 0, 0}).has_value());
}

TEST_CASE("nonneg_criterion: exact threshold") {
    const EulerWeights W{1, 2, 2, 0};
    CHECK(W.slack() == 8); // 9 minus the smallest nonzero weight square
    CHECK(W.s_min(100) == 29);
    CHECK(nonneg_criterion(W, 100, 29));
    CHECK(!nonneg_criterion(W, 100, 28));
    CHECK(!nonneg_criterion(W, 100, -29));

    const EulerWeights W3{1, 2, 3, 0};
    CHECK(W3.slack() == 13);
    CHECK(W3.s_min(100) == 37); // 36^2 = 1296 < 1300 <= 1369
    CHECK(nonneg_criterion(W3, 100, 37));
    CHECK(!nonneg_criterion(W3, 100, 36));
}

TEST_CASE("nonneg_criterion forces the weighted coordinates nonnegative (exhaustive small m)") {
    // For every integer quadruple of m with s = ax+by+cz+dw >= s_min, each of
    // ax, by, cz, dw must be nonnegative. Checked by full enumeration.
    const EulerWeights weights[] = {{1, 2, 2, 0}, {1, 2, 3, 0}, {1, 1, 2, 3}};
    u64 confirming = 0, violations = 0;
    for (const auto& W : weights) {
        for (u64 m = 1; m <= 60; ++m) {
            const i64 r = i64(isqrt(m));
            for (i64 x = -r; x <= r; ++x)
                for (i64 y = -r; y <= r; ++y)
                    for (i64 z = -r; z <= r; ++z)
                        for (i64 w = -r; w <= r; ++w) {
                            if (u64(x * x + y * y + z * z + w * w) != m) continue;
                            const i64 s = i64(W.a) * x + i64(W.b) * y + i64(W.c) * z + i64(W.d) * w;
                            if (!nonneg_criterion(W, m, s)) continue;
                            ++confirming;
                            if (i64(W.a) * x < 0 || i64(W.b) * y < 0 || i64(W.c) * z < 0 ||
                                i64(W.d) * w < 0)
                                ++violations;
                        }
        }
    }
    CHECK(violations == 0);
    CHECK(confirming > 100); // the property was not vacuously true
}

TEST_CASE("lemma22_construct: frozen fixtures with intermediate steps") {
    Lemma22Steps st;
    const auto r51 = lemma22_construct(5, 1, &st);
    REQUIRE(r51.has_value());
    CHECK(*r51 == SignedDecomposition{1, 0, 0, 2});
    CHECK(st.residual == 44); // 9*5 - 1
    CHECK(st.triple == ThreeSquares{6, 2, 2});
    CHECK(st.a == 2);
    CHECK(st.b == -2);
    CHECK(st.c == 6);
    CHECK(st.u == 0);
    CHECK(st.v == 0);

    const auto r52 = lemma22_construct(5, 2, &st);
    REQUIRE(r52.has_value());
    CHECK(*r52 == SignedDecomposition{2, 0, 1, 0});
    CHECK(st.residual == 29);
    CHECK(st.triple == ThreeSquares{5, 2, 0});
    CHECK(st.a == 5);
    CHECK(st.b == -2);
    CHECK(st.c == 0);
    CHECK(st.u == -1);
    CHECK(st.v == 2);
}

TEST_CASE("lemma22_construct: precondition rejections") {
    CHECK(!lemma22_construct(8, 1).has_value()); // 9*8-1 = 71 is 8t+7
    CHECK(!lemma22_construct(5, 3).has_value()); // 3 | n
    CHECK(!lemma22_construct(1, 2).has_value()); // n^4 > 9m
    CHECK(!lemma22_construct(0, 1).has_value());
    CHECK(!lemma22_construct(5, 0).has_value());
}

TEST_CASE("lemma22_construct: output identities for all valid m <= 400, n <= 6") {
    u64 cases = 0, bad = 0;
    for (u64 m = 1; m <= 400; ++m)
        for (u64 n = 1; n <= 6; ++n) {
            const auto r = lemma22_construct(m, n);
            if (!r) continue;
            ++cases;
            if (r->norm() != m) ++bad;
            if (r->x + 2 * r->y + 2 * r->z != i64(n * n)) ++bad;
        }
    CHECK(bad == 0);
    CHECK(cases > 500);
}

TEST_CASE("lemma23_find: fixtures, rejections, identities") {
    const auto r32 = lemma23_find(3, 2);
    REQUIRE(r32.has_value());
    CHECK(*r32 == SignedDecomposition{1, 0, 1, 1});
    const auto r11 = lemma23_find(1, 1);
    REQUIRE(r11.has_value());
    CHECK(*r11 == SignedDecomposition{1, 0, 0, 0});

    CHECK(!lemma23_find(8, 3).has_value()); // 14*8 - 81 = 31 is 8t+7
    CHECK(!lemma23_find(1, 2).has_value()); // n^4 > 14m
    CHECK(!lemma23_find(0, 1).has_value());

    u64 cases = 0, bad = 0;
    for (u64 m = 1; m <= 200; ++m)
        for (u64 n = 1; n <= 6; ++n) {
            const auto r = lemma23_find(m, n);
            if (!r) continue;
            ++cases;
            if (r->norm() != m) ++bad;
            if (r->x + 2 * r->y + 3 * r->z != i64(n * n)) ++bad;
        }
    CHECK(bad == 0);
    CHECK(cases > 300);
}

TEST_CASE("is_pow4_times_4b1") {
    CHECK(is_pow4_times_4b1(1));
    CHECK(is_pow4_times_4b1(5));
    CHECK(is_pow4_times_4b1(4));   // 4 * 1
    CHECK(is_pow4_times_4b1(80));  // 16 * 5
    CHECK(!is_pow4_times_4b1(0));
    CHECK(!is_pow4_times_4b1(2));
    CHECK(!is_pow4_times_4b1(3));
    CHECK(!is_pow4_times_4b1(12)); // 4 * 3
}

TEST_CASE("theorem11_decompose: frozen small fixtures") {
    const auto r5 = theorem11_decompose(5, 2);
    CHECK(r5.witness == Decomposition{0, 0, 2, 1});
    CHECK(r5.value == 4);

    const auto r13 = theorem11_decompose(13, 3);
    CHECK(r13.witness == Decomposition{0, 0, 3, 2});
    CHECK(r13.value == 9);

    // 80 = 16 * 5: the witness of 5 with coordinates scaled by 4
    const auto r80 = theorem11_decompose(80, 2);
    CHECK(r80.witness == Decomposition{0, 0, 8, 4});
    CHECK(r80.value == 16);
}

TEST_CASE("theorem11_decompose: totality for m <= 2000, both lambdas") {
    u64 cases = 0, bad = 0;
    for (u64 m = 1; m <= 2000; ++m) {
        if (!is_pow4_times_4b1(m)) continue;
        for (int lam : {2, 3}) {
            const auto r = theorem11_decompose(m, lam);
            ++cases;
            if (r.witness.norm() != m) ++bad;
            const u64 v = r.witness.x + 2 * r.witness.y + u64(lam) * r.witness.z;
            if (v != r.value) ++bad;
            if (r.value == 0 || !is_square(r.value)) ++bad;
        }
    }
    CHECK(bad == 0);
    CHECK(cases == 2 * 668); // 668 values of 4^a(4b+1) do not exceed 2000
}

TEST_CASE("theorem11_decompose: first values at the constructive cutoffs") {
    const auto big2 = theorem11_decompose(40125457, 2);
    CHECK(big2.witness.norm() == 40125457);
    CHECK(big2.value == 17956); // 134^2, n^4 inside [8m, 9m]

    const auto big3 = theorem11_decompose(10065601, 3);
    CHECK(big3.witness.norm() == 10065601);
    CHECK(big3.value == 11664); // 108^2, n^4 inside [13m, 14m]
}

TEST_CASE("theorem11_decompose: rejections") {
    CHECK_THROWS_AS(theorem11_decompose(3, 2), std::invalid_argument);  // 3 = 4b+3
    CHECK_THROWS_AS(theorem11_decompose(12, 2), std::invalid_argument); // 4 * 3
    CHECK_THROWS_AS(theorem11_decompose(5, 4), std::invalid_argument);  // lambda out of range
    CHECK_THROWS_AS(theorem11_decompose(0, 2), std::invalid_argument);
}

TEST_CASE("theorem12_decompose: base cases and the scaled family") {
    const auto r16 = theorem12_decompose(16);
    CHECK(r16.witness == SignedDecomposition{4, 0, 0, 0});
    CHECK(r16.exponent == 1);

    const auto r160 = theorem12_decompose(160);
    CHECK(r160.witness == SignedDecomposition{4, 0, 0, 12});
    CHECK(r160.exponent == 1);

    // 32 = 16 * 2: witness of 2 = (1,0,1,0) scaled by 4, exponent bumped
    const auto r32 = theorem12_decompose(32);
    CHECK(r32.witness == SignedDecomposition{4, 0, 4, 0});
    CHECK(r32.exponent == 2);
}

TEST_CASE("theorem12_decompose: frozen small-m table") {
    struct Row {
        u64 m;
        SignedDecomposition q;
    };
    const Row rows[] = {
        {2, {1, 0, 1, 0}},   {3, {1, 0, 1, 1}},   {4, {-1, 1, 1, 1}},  {5, {0, -1, 2, 0}},
        {6, {0, -1, 2, 1}},  {7, {-1, 1, 1, 2}},  {8, {-2, 0, 2, 0}},  {9, {0, -1, 2, 2}},
        {11, {3, -1, 1, 0}}, {12, {2, -2, 2, 0}}, {13, {2, -2, 2, 1}}, {14, {-1, -2, 3, 0}},
        {15, {-1, -2, 3, 1}}, {17, {4, 0, 0, 1}}, {18, {-1, -2, 3, 2}},
    };
    for (const auto& row : rows) {
        const auto r = theorem12_decompose(row.m);
        CHECK(r.witness == row.q);
        CHECK(r.exponent == 1);
    }
}

TEST_CASE("theorem12_decompose: residue-driven exponent choices") {
    CHECK(theorem12_decompose(19).exponent == 1); // odd
    CHECK(theorem12_decompose(22).exponent == 2); // 14m/4 = 77 = 5 (mod 8)
    CHECK(theorem12_decompose(34).exponent == 1); // 14m/4 = 119 = 7 (mod 8)
    CHECK(theorem12_decompose(20).exponent == 1); // m = 4 (mod 8)
    CHECK(theorem12_decompose(24).exponent == 2); // 14m/16 = 21 = 5 (mod 8)
    CHECK(theorem12_decompose(72).exponent == 1); // 14m/16 = 63 = 7 (mod 8)
}

TEST_CASE("theorem12_decompose: totality for 1 < m <= 500 except 10") {
    u64 bad = 0;
    for (u64 m = 2; m <= 500; ++m) {
        if (m == 10) continue;
        const auto r = theorem12_decompose(m);
        if (r.witness.norm() != m) ++bad;
        if (r.exponent < 1) ++bad;
        const i64 v = r.witness.x + 2 * r.witness.y + 3 * r.witness.z;
        if (v != i64(u64(1) << (2 * r.exponent))) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("theorem12_decompose: rejections") {
    CHECK_THROWS_AS(theorem12_decompose(0), std::invalid_argument);
    CHECK_THROWS_AS(theorem12_decompose(1), std::invalid_argument);
    CHECK_THROWS_AS(theorem12_decompose(10), std::invalid_argument);
}
