#pragma once
// Representations of naturals as sums of squares: the three-square
// decomposer, the deterministic four-square enumerator, and constrained
// first-witness searches over natural and integer quadruples.
#include "sums4/constraints.hpp"

#include <cassert>
#include <optional>

namespace sums4 {

struct Decomposition {
    u64 x = 0, y = 0, z = 0, w = 0;

    u64 norm() const { return x * x + y * y + z * z + w * w; }
    bool operator==(const Decomposition&) const = default;
};

struct SignedDecomposition {
    i64 x = 0, y = 0, z = 0, w = 0;

    u64 norm() const {
        u128 s = u128(i128(x) * x) + u128(i128(y) * y) + u128(i128(z) * z) + u128(i128(w) * w);
        return u64(s);
    }
    bool operator==(const SignedDecomposition&) const = default;
};

struct ThreeSquares {
    u64 a = 0, b = 0, c = 0; // a >= b >= c, a^2+b^2+c^2 = n

    bool operator==(const ThreeSquares&) const = default;
};

// First triple (a,b,c), a >= b >= c, with a^2+b^2+c^2 = n, under the fixed
// iteration order: a descending from isqrt(n), b descending, c tested by
// is_square. nullopt exactly when n = 4^s(8t+7).
std::optional<ThreeSquares> three_square_decompose(u64 n);

// Visits every ordered quadruple (x,y,z,w) in N^4 with x^2+y^2+z^2+w^2 = m
// exactly once: x ascending, then y, then z, with w = isqrt(remainder)
// accepted when exact. z values whose remainder is a non-residue mod 8 are
// skipped (squares are 0,1,4 mod 8); this never changes the visit sequence.
// The visitor returns false to stop early.
template <class F>
void enumerate_four_square(u64 m, F&& visit) {
    const u64 rx = isqrt(m);
    for (u64 x = 0; x <= rx; ++x) {
        const u64 rem_x = m - x * x;
        const u64 ry = isqrt(rem_x);
        for (u64 y = 0; y <= ry; ++y) {
            const u64 rem_y = rem_x - y * y;
            const u64 rz = isqrt(rem_y);
            for (u64 z = 0; z <= rz; ++z) {
                const u64 rem = rem_y - z * z;
                if (((0x13u >> (rem & 7)) & 1) == 0) continue; // rem mod 8 not in {0,1,4}
                if (auto w = is_square(rem)) {
                    Decomposition q{x, y, z, *w};
                    assert(q.norm() == m);
                    if (!visit(static_cast<const Decomposition&>(q))) return;
                }
            }
        }
    }
}

// First quadruple in the enumeration order above that satisfies the constraint.
// Deterministic: repeated calls return the identical witness.
std::optional<Decomposition> find_constrained(u64 m, const ConstraintSpec& spec);

// First integer quadruple with x^2+y^2+z^2+w^2 = m, |x|,|y|,|z|,|w| <= isqrt(m)
// and w canonicalized >= 0, whose (linear) form value lies in the target set.
// Order: target values ascending (for an absolute target, +v before -v), then
// the non-pivot coordinates ascending from -isqrt(m), the pivot coordinate
// solved from the form, and w recovered from the norm. Requires a linear form.
std::optional<SignedDecomposition> find_constrained_signed(u64 m, const ConstraintSpec& spec);

// Same search restricted to one exact form value.
std::optional<SignedDecomposition> find_signed_with_linear_value(u64 m, const LinearForm4& f, i64 value);

} // namespace sums4
