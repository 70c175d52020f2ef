#include "doctest.h"

#include <stdexcept>

#include "sums4/arith.hpp"
#include "test_oracles.hpp"

using namespace sums4;

TEST_CASE("isqrt: small values, perfect-square edges, and the top of u64") {
    CHECK(isqrt(0) == 0);
    CHECK(isqrt(1) == 1);
    CHECK(isqrt(2) == 1);
    CHECK(isqrt(3) == 1);
    CHECK(isqrt(4) == 2);
    CHECK(isqrt(8) == 2);
    CHECK(isqrt(9) == 3);
    CHECK(isqrt(152399025ull) == 12345); // 12345^2
    CHECK(isqrt(152399024ull) == 12344);

    const u64 top = 0xFFFFFFFFull; // 2^32 - 1, the largest root
    CHECK(isqrt(top * top) == top);
    CHECK(isqrt(top * top - 1) == top - 1);
    CHECK(isqrt(top * top + 1) == top);
    CHECK(isqrt(~u64(0)) == top);

    for (u64 k = 1; k <= 4000; k += 7) {
        CHECK(isqrt(k * k) == k);
        CHECK(isqrt(k * k - 1) == k - 1);
        CHECK(isqrt(k * k + 1) == k);
    }
}

TEST_CASE("is_square: root recovery and rejections") {
    REQUIRE(is_square(0).has_value());
    CHECK(*is_square(0) == 0);
    CHECK(*is_square(1) == 1);
    CHECK(*is_square(4) == 2);
    CHECK(*is_square(16384) == 128); // 2^14 = 128^2
    CHECK(*is_square(6642739009ull) == 81503);
    CHECK(!is_square(2).has_value());
    CHECK(!is_square(3).has_value());
    CHECK(!is_square(152399024ull).has_value());
    CHECK(!is_square(6642739010ull).has_value());
    CHECK(!is_square(~u64(0)).has_value());
}

TEST_CASE("pow2_membership: the six power-of-two target kinds") {
    // 1 = 2^0 = 4^0 is in the "any" sets but not the "positive" ones.
    CHECK(pow2_membership(1, TargetKind::Pow2Any));
    CHECK(!pow2_membership(1, TargetKind::Pow2Positive));
    CHECK(pow2_membership(1, TargetKind::Pow4Any));
    CHECK(!pow2_membership(1, TargetKind::Pow4Positive));
    CHECK(pow2_membership(1, TargetKind::Pow2EvenExp));
    CHECK(!pow2_membership(1, TargetKind::Pow2OddExp));

    CHECK(pow2_membership(2, TargetKind::Pow2Any));
    CHECK(pow2_membership(2, TargetKind::Pow2Positive));
    CHECK(!pow2_membership(2, TargetKind::Pow4Any));
    CHECK(pow2_membership(2, TargetKind::Pow2OddExp));
    CHECK(!pow2_membership(2, TargetKind::Pow2EvenExp));

    CHECK(pow2_membership(4, TargetKind::Pow4Positive));
    CHECK(pow2_membership(4, TargetKind::Pow2EvenExp));
    CHECK(pow2_membership(16384, TargetKind::Pow4Positive)); // 2^14 = 4^7
    CHECK(!pow2_membership(8192, TargetKind::Pow4Any));      // 2^13, odd exponent
    CHECK(pow2_membership(8192, TargetKind::Pow2OddExp));
    CHECK(pow2_membership(u64(1) << 62, TargetKind::Pow4Positive));
    CHECK(pow2_membership(u64(1) << 63, TargetKind::Pow2OddExp));

    CHECK(!pow2_membership(0, TargetKind::Pow2Any));
    CHECK(!pow2_membership(3, TargetKind::Pow2Any));
    CHECK(!pow2_membership(6, TargetKind::Pow2Any));

    CHECK_THROWS_AS(pow2_membership(4, TargetKind::Square), std::invalid_argument);
    CHECK_THROWS_AS(pow2_membership(4, TargetKind::PositiveSquare), std::invalid_argument);
}

TEST_CASE("val2: dyadic valuation") {
    CHECK(val2(1) == 0);
    CHECK(val2(2) == 1);
    CHECK(val2(12) == 2);
    CHECK(val2(96) == 5);
    CHECK(val2(u64(1) << 63) == 63);
    CHECK_THROWS_AS(val2(0), std::invalid_argument);
}

TEST_CASE("in_E: fixtures for the no-three-squares core") {
    CHECK(in_E(7));
    CHECK(in_E(15));
    CHECK(in_E(23));
    CHECK(in_E(28));   // 4 * 7
    CHECK(in_E(112));  // 16 * 7
    CHECK(in_E(448));  // 4^3 * 7
    CHECK(!in_E(0));
    CHECK(!in_E(480)); // 4^2 * 30, and 30 = 25+4+1
    CHECK(!in_E(1));
    CHECK(!in_E(3));
    CHECK(!in_E(14)); // 9 + 4 + 1
    CHECK(!in_E(56)); // 2 * 28: odd power of 2 times 7 is fine (36+16+4)
}

TEST_CASE("in_E agrees with the three-square sieve up to 2*10^4") {
    const u64 bound = 20000;
    const auto sieve = oracle::three_square_sieve(bound);
    u64 mismatches = 0;
    for (u64 n = 0; n <= bound; ++n)
        if (in_E(n) == bool(sieve[n])) ++mismatches;
    CHECK(mismatches == 0);
}

TEST_CASE("checked arithmetic surfaces overflow") {
    CHECK(checked_add(2, 3) == 5);
    CHECK(checked_mul(u64(1) << 31, u64(1) << 31) == (u64(1) << 62));
    CHECK_THROWS_AS(checked_add(~u64(0), 1), std::overflow_error);
    CHECK_THROWS_AS(checked_mul(u64(1) << 32, u64(1) << 32), std::overflow_error);
    CHECK(narrow_i64(i128(-5)) == -5);
    CHECK_THROWS_AS(narrow_i64(i128(1) << 90), std::overflow_error);
}
