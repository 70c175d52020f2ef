#include "doctest.h"

#include <set>
#include <stdexcept>

#include "sums4/constraints.hpp"

using namespace sums4;

TEST_CASE("LinearForm4 and QuadFormXY evaluate in wide arithmetic") {
    const LinearForm4 f{1, 2, 3, 0};
    CHECK(f.value(1, 0, 1, 5) == 4);
    CHECK(f.value(-1, -2, 3, 0) == 4);
    const LinearForm4 g{16, -15, 0, 0};
    CHECK(g.value(1, 1, 0, 0) == 1);
    const i64 big = i64(3) << 61;
    CHECK(LinearForm4{4, 0, 0, 0}.value(big, 0, 0, 0) == i128(4) * big); // no i64 wrap

    const QuadFormXY q{2, 4, -7};
    CHECK(q.value(1, 1) == -1);
    CHECK(q.value(3, 1) == 1); // 18 + 4 - 21
    CHECK(q.value(0, 0) == 0);
}

TEST_CASE("TargetSet membership, absolute flag, and out-of-range values") {
    const TargetSet sq{TargetKind::Square, false};
    CHECK(sq.contains(0));
    CHECK(sq.contains(1));
    CHECK(sq.contains(4));
    CHECK(!sq.contains(-4));
    CHECK(!sq.contains(5));

    const TargetSet sq_pos{TargetKind::PositiveSquare, false};
    CHECK(!sq_pos.contains(0));
    CHECK(sq_pos.contains(9));

    const TargetSet abs_sq{TargetKind::Square, true};
    CHECK(abs_sq.contains(-4));
    CHECK(abs_sq.contains(4));
    CHECK(!abs_sq.contains(-5));

    const TargetSet pow4_pos{TargetKind::Pow4Positive, false};
    CHECK(!pow4_pos.contains(1));
    CHECK(pow4_pos.contains(4));
    CHECK(pow4_pos.contains(16384));
    CHECK(!pow4_pos.contains(8192));

    // Values beyond u64 can never be members.
    CHECK(!sq.contains(i128(1) << 100));
    CHECK(!abs_sq.contains(-(i128(1) << 100)));
}

TEST_CASE("named predicates: the published witness for the x+3y family") {
    // 81503^2 = 16372^2 + 4^2 + 52372^2 + 60265^2 with x+3y = 16384 = 2^14.
    const auto c46_0 = named_spec("C4.6:d=0");
    CHECK(c46_0.matches(16372, 4, 52372, 60265));
    const auto c46_1 = named_spec("C4.6:d=1");
    CHECK(!c46_1.matches(16372, 4, 52372, 60265)); // 2^14 has even exponent

    const auto c48b_0 = named_spec("C4.8b:d=0");
    CHECK(c48b_0.matches(1, 1, 0, 0)); // 16 - 15 = 1 = 2^0
    const auto c48b_1 = named_spec("C4.8b:d=1");
    CHECK(!c48b_1.matches(1, 1, 0, 0));
    CHECK(c48b_1.matches(2, 0, 0, 0)); // 32 = 2^5

    const auto c47 = named_spec("C4.7:l=2,d=0");
    CHECK(c47.matches(1, 0, 3, 7)); // x = 1 = 2^0 and x+2y = 1 = 2^0
    CHECK(!c47.matches(3, 0, 1, 1)); // neither 3 nor 0 is a power of two

    const auto c49 = named_spec("C4.9");
    CHECK(c49.matches(2, 0, 0, 0));  // x+63y = 2 = 2^1, 2x = 4 = 4^1
    CHECK(!c49.matches(1, 0, 0, 0)); // x+63y = 1 is not an odd power of two
}

TEST_CASE("named predicate registry: unique ids, lookup round trip") {
    const auto& all = named_predicates();
    CHECK(all.size() == 11);
    std::set<std::string> ids;
    for (const auto& p : all) {
        CHECK(p.fn != nullptr);
        CHECK(!p.statement.empty());
        ids.insert(p.id);
    }
    CHECK(ids.size() == all.size());
    for (const auto& p : all) {
        const auto* found = find_named_predicate(p.id);
        REQUIRE(found != nullptr);
        CHECK(found->id == p.id);
    }
    CHECK(find_named_predicate("no-such-predicate") == nullptr);
}

TEST_CASE("parse_spec round trips and rejections") {
    const auto lin = parse_spec("1,2,3,0", "pow2+", false);
    REQUIRE(lin.is_linear());
    CHECK(lin.linear()->a == 1);
    CHECK(lin.linear()->b == 2);
    CHECK(lin.linear()->c == 3);
    CHECK(lin.linear()->d == 0);
    CHECK(lin.target.kind == TargetKind::Pow2Positive);
    CHECK(!lin.target.absolute);
    CHECK(lin.matches(2, 1, 0, 1)); // 2+2 = 4

    const auto neg = parse_spec("16,-15,0,0", "pow2even", false);
    REQUIRE(neg.is_linear());
    CHECK(neg.linear()->b == -15);
    CHECK(neg.matches(1, 1, 0, 0));

    const auto qd = parse_spec("quad:2,4,-7", "pow2", false);
    CHECK(!qd.is_linear());
    CHECK(qd.matches(3, 1, 0, 0)); // value 1 = 2^0

    const auto abs_spec = parse_spec("1,2,-3,0", "pow4", true);
    CHECK(abs_spec.target.absolute);
    CHECK(abs_spec.matches(2, 0, 2, 0));  // value -4, |.| = 4^1
    CHECK(abs_spec.matches(0, 2, 0, 0));  // value 4
    CHECK(!abs_spec.matches(1, 0, 1, 1)); // value -2
    CHECK(!abs_spec.matches(0, 0, 0, 0)); // 0 is not a power of four
    const auto no_abs = parse_spec("1,2,-3,0", "pow4", false);
    CHECK(!no_abs.matches(2, 0, 2, 0)); // -4 without the absolute flag

    CHECK_THROWS_AS(parse_spec("0,0,0,0", "sq", false), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec("1,2", "sq", false), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec("quad:0,0,0", "sq", false), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec("1,2,3,0", "nope", false), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec("a,b,c,d", "sq", false), std::invalid_argument);
    CHECK_THROWS_AS(named_spec("C9.9"), std::invalid_argument);

    CHECK(parse_target("sq+", false).kind == TargetKind::PositiveSquare);
    CHECK(parse_target("pow2odd", false).kind == TargetKind::Pow2OddExp);
    CHECK(parse_target("sq", true).absolute);
}

TEST_CASE("target_values_up_to: ascending members") {
    const auto squares = target_values_up_to({TargetKind::Square, false}, 10);
    CHECK(squares == std::vector<u64>{0, 1, 4, 9});
    const auto pos_squares = target_values_up_to({TargetKind::PositiveSquare, false}, 10);
    CHECK(pos_squares == std::vector<u64>{1, 4, 9});
    const auto pow2_pos = target_values_up_to({TargetKind::Pow2Positive, false}, 16);
    CHECK(pow2_pos == std::vector<u64>{2, 4, 8, 16});
    const auto pow4 = target_values_up_to({TargetKind::Pow4Any, false}, 100);
    CHECK(pow4 == std::vector<u64>{1, 4, 16, 64});
    const auto odd = target_values_up_to({TargetKind::Pow2OddExp, false}, 40);
    CHECK(odd == std::vector<u64>{2, 8, 32});
    // the full-range power list stays finite and in order
    const auto all_pow2 = target_values_up_to({TargetKind::Pow2Any, false}, ~u64(0));
    CHECK(all_pow2.size() == 64);
    CHECK(all_pow2.front() == 1);
    CHECK(all_pow2.back() == (u64(1) << 63));
    CHECK(target_values_up_to({TargetKind::Pow2Positive, false}, 1).empty());
}

TEST_CASE("spec keys identify the constraint") {
    const auto a = parse_spec("1,2,3,0", "pow2+", false);
    const auto b = parse_spec("1,2,3,0", "pow4+", false);
    const auto c = parse_spec("1,2,2,0", "pow2+", false);
    CHECK(a.key() != b.key());
    CHECK(a.key() != c.key());
    CHECK(a.key() == parse_spec("1,2,3,0", "pow2+", false).key());
    CHECK(named_spec("C4.9").key() != named_spec("C4.6:d=0").key());
}
