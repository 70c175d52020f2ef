#include "sums4/arith.hpp"

#include <bit>
#include <cassert>
#include <limits>

namespace sums4 {

u64 checked_add(u64 a, u64 b) {
    u64 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("u64 addition overflow");
    return r;
}

u64 checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("u64 multiplication overflow");
    return r;
}

i64 narrow_i64(i128 v) {
    if (v > i128(std::numeric_limits<i64>::max()) || v < i128(std::numeric_limits<i64>::min()))
        throw std::overflow_error("i64 narrowing overflow");
    return i64(v);
}

u64 isqrt(u64 n) {
    if (n < 2) return n;
    // Start from a power of two strictly above sqrt(n); the Newton iteration
    // x <- (x + n/x)/2 then decreases monotonically and stops exactly at
    // floor(sqrt(n)).
    u64 x = u64(1) << ((std::bit_width(n) + 1) / 2);
    while (true) {
        u64 y = (x + n / x) / 2;
        if (y >= x) break;
        x = y;
    }
    assert(u128(x) * x <= n && u128(x + 1) * (x + 1) > n);
    return x;
}

std::optional<u64> is_square(u64 n) {
    // Squares mod 16 lie in {0,1,4,9}; reject the other residues cheaply.
    static constexpr u64 kMask = (1u << 0) | (1u << 1) | (1u << 4) | (1u << 9);
    if (((kMask >> (n & 15)) & 1) == 0) return std::nullopt;
    u64 r = isqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

bool pow2_membership(u64 n, TargetKind kind) {
    if (n == 0 || (n & (n - 1)) != 0) return false;
    int e = std::countr_zero(n);
    switch (kind) {
        case TargetKind::Pow2Any: return true;
        case TargetKind::Pow2Positive: return e >= 1;
        case TargetKind::Pow4Any:
        case TargetKind::Pow2EvenExp: return e % 2 == 0;
        case TargetKind::Pow4Positive: return e >= 2 && e % 2 == 0;
        case TargetKind::Pow2OddExp: return e % 2 == 1;
        case TargetKind::Square:
        case TargetKind::PositiveSquare:
            throw std::invalid_argument("pow2_membership: kind is a square set, not a power set");
    }
    return false; // unreachable
}

int val2(u64 n) {
    if (n == 0) throw std::invalid_argument("val2(0) is undefined");
    return std::countr_zero(n);
}

bool in_E(u64 n) {
    if (n == 0) return false;
    // Strip factors of 4 (an even number of twos), keep a possible lone 2.
    n >>= (val2(n) & ~1);
    return (n & 7) == 7;
}

} // namespace sums4
