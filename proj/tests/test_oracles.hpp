#pragma once
// Independent brute-force oracles the unit and acceptance suites diff the
// library against. Deliberately dumb: no pruning, no shared search code with
// src/, w scanned explicitly instead of solved from the norm.
#include "sums4/constraints.hpp"

#include <optional>
#include <vector>

namespace oracle {

using sums4::i64;
using sums4::u64;

// sieve[n] true iff n is a sum of three natural squares, for n <= bound.
inline std::vector<char> three_square_sieve(u64 bound) {
    std::vector<char> ok(bound + 1, 0);
    for (u64 a = 0; a * a <= bound; ++a)
        for (u64 b = a; a * a + b * b <= bound; ++b)
            for (u64 c = b; a * a + b * b + c * c <= bound; ++c)
                ok[a * a + b * b + c * c] = 1;
    return ok;
}

struct Quad {
    u64 x = 0, y = 0, z = 0, w = 0;
};

// First natural quadruple of m satisfying the constraint, scanning x, y, z, w all
// ascending from zero. For fixed (x,y,z) at most one w completes the norm,
// so this visits candidates in the same sequence as the library enumerator.
inline std::optional<Quad> first_constrained(u64 m, const sums4::ConstraintSpec& spec) {
    for (u64 x = 0; x * x <= m; ++x)
        for (u64 y = 0; x * x + y * y <= m; ++y)
            for (u64 z = 0; x * x + y * y + z * z <= m; ++z)
                for (u64 w = 0; x * x + y * y + z * z + w * w <= m; ++w)
                    if (x * x + y * y + z * z + w * w == m &&
                        spec.matches(i64(x), i64(y), i64(z), i64(w)))
                        return Quad{x, y, z, w};
    return std::nullopt;
}

// Existence of an integer quadruple of m satisfying the constraint, w >= 0 taken
// as the canonical sign (the constraint is also tried on -w to match the library's
// two-sided w handling). Any-order sweep: existence only, no order contract.
inline bool signed_exists(u64 m, const sums4::ConstraintSpec& spec) {
    const i64 r = i64(sums4::isqrt(m));
    for (i64 x = -r; x <= r; ++x)
        for (i64 y = -r; y <= r; ++y)
            for (i64 z = -r; z <= r; ++z) {
                const i64 used = x * x + y * y + z * z;
                if (used > i64(m)) continue;
                const u64 rest = m - u64(used);
                const u64 w = sums4::isqrt(rest);
                if (w * w != rest) continue;
                if (spec.matches(x, y, z, i64(w))) return true;
                if (w > 0 && spec.matches(x, y, z, -i64(w))) return true;
            }
    return false;
}

} // namespace oracle
