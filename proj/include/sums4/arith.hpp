#pragma once
// Exact integer primitives shared by every layer: integer square roots,
// power-of-two target sets, and the classifier for naturals that are not a
// sum of three squares (n = 4^s(8t+7)).
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace sums4 {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// Vocabulary of target sets a constraint value can be tested against.
// The square kinds are decided by is_square, the rest by pow2_membership.
// Pow2EvenExp is the same set as Pow4Any; both names exist because the
// conjecture statements use both notations.
enum class TargetKind {
    Square,         // {k^2 : k >= 0}
    PositiveSquare, // {k^2 : k >= 1}
    Pow2Any,        // {2^a : a >= 0}
    Pow2Positive,   // {2^a : a >= 1}
    Pow4Any,        // {4^a : a >= 0}
    Pow4Positive,   // {4^a : a >= 1}
    Pow2EvenExp,    // {2^(2a) : a >= 0}
    Pow2OddExp,     // {2^(2a+1) : a >= 0}
};

// floor(sqrt(n)), exact for the full u64 range. Integer Newton iteration;
// never floating point.
u64 isqrt(u64 n);

// The root when n is a perfect square, nullopt otherwise.
std::optional<u64> is_square(u64 n);

// Membership of n in one of the power-of-two kinds above. Passing a square
// kind is a caller bug and throws.
bool pow2_membership(u64 n, TargetKind kind);

// 2-adic valuation of n > 0.
int val2(u64 n);

// True iff n = 4^s(8t+7) for some s,t >= 0, i.e. n is not a sum of three
// integer squares. in_E(0) is false (0 = 0^2+0^2+0^2).
bool in_E(u64 n);

// Overflow-checked helpers; overflow is a programming error and throws.
u64 checked_add(u64 a, u64 b);
u64 checked_mul(u64 a, u64 b);

// Narrow a 128-bit intermediate back to i64, throwing on overflow.
i64 narrow_i64(i128 v);

} // namespace sums4
