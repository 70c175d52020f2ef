#include "sums4/represent.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

namespace {

// Signed searches square i64 coordinates; cap m so x^2 stays in range.
void require_signed_range(sums4::u64 m) {
    if (m > (sums4::u64(1) << 62))
        throw std::invalid_argument("m too large for the signed quadruple search");
}

} // namespace

namespace sums4 {

std::optional<ThreeSquares> three_square_decompose(u64 n) {
    u64 a = isqrt(n);
    while (true) {
        if (u128(3) * a * a < n) break; // a >= b >= c forces 3a^2 >= n
        const u64 rem = n - a * a;
        u64 b = std::min(a, isqrt(rem));
        while (u128(2) * b * b >= rem) {
            if (auto c = is_square(rem - b * b)) {
                assert(*c <= b);
                return ThreeSquares{a, b, *c};
            }
            if (b == 0) break;
            --b;
        }
        if (a == 0) break;
        --a;
    }
    return std::nullopt;
}

std::optional<Decomposition> find_constrained(u64 m, const ConstraintSpec& spec) {
    std::optional<Decomposition> hit;
    enumerate_four_square(m, [&](const Decomposition& q) {
        if (evaluate(spec, q)) {
            hit = q;
            return false;
        }
        return true;
    });
    return hit;
}

namespace {

// Plain ascending sweep over x,y,z in [-r,r]^3 with w recovered from the
// norm. Used when the form involves w (then both w signs are tried, +w
// first) or has no x/y/z coefficient to pivot on.
std::optional<SignedDecomposition> signed_sweep(u64 m, const ConstraintSpec& spec) {
    const i64 r = i64(isqrt(m));
    for (i64 x = -r; x <= r; ++x) {
        const u64 xx = u64(x * x);
        if (xx > m) continue;
        for (i64 y = -r; y <= r; ++y) {
            if (u64(y * y) > m - xx) continue;
            const u64 yy = xx + u64(y * y);
            for (i64 z = -r; z <= r; ++z) {
                if (u64(z * z) > m - yy) continue;
                const u64 rem = m - yy - u64(z * z);
                if (((0x13u >> (rem & 7)) & 1) == 0) continue;
                if (auto w = is_square(rem)) {
                    if (spec.matches(x, y, z, i64(*w))) return SignedDecomposition{x, y, z, i64(*w)};
                    if (*w != 0 && spec.matches(x, y, z, -i64(*w)))
                        return SignedDecomposition{x, y, z, -i64(*w)};
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<SignedDecomposition> find_signed_with_linear_value(u64 m, const LinearForm4& f, i64 target) {
    require_signed_range(m);
    const i64 r = i64(isqrt(m));
    const i64 coef[3] = {f.a, f.b, f.c};
    int pivot = f.a != 0 ? 0 : f.b != 0 ? 1 : f.c != 0 ? 2 : -1;
    if (pivot < 0 || f.d != 0) {
        // w-involved or degenerate form: no pivot shortcut available.
        for (i64 x = -r; x <= r; ++x) {
            const u64 xx = u64(x * x);
            if (xx > m) continue;
            for (i64 y = -r; y <= r; ++y) {
                if (u64(y * y) > m - xx) continue;
                const u64 yy = xx + u64(y * y);
                for (i64 z = -r; z <= r; ++z) {
                    if (u64(z * z) > m - yy) continue;
                    if (auto w = is_square(m - yy - u64(z * z))) {
                        if (f.value(x, y, z, i64(*w)) == target) return SignedDecomposition{x, y, z, i64(*w)};
                        if (*w != 0 && f.value(x, y, z, -i64(*w)) == target)
                            return SignedDecomposition{x, y, z, -i64(*w)};
                    }
                }
            }
        }
        return std::nullopt;
    }
    const int f1 = pivot == 0 ? 1 : 0;
    const int f2 = pivot == 2 ? 1 : 2;
    for (i64 t1 = -r; t1 <= r; ++t1) {
        const u64 s1 = u64(t1 * t1);
        if (s1 > m) continue;
        for (i64 t2 = -r; t2 <= r; ++t2) {
            if (u64(t2 * t2) > m - s1) continue;
            const u64 s2 = s1 + u64(t2 * t2);
            const i128 rest = i128(target) - i128(coef[f1]) * t1 - i128(coef[f2]) * t2;
            if (rest % coef[pivot] != 0) continue;
            const i128 tp = rest / coef[pivot];
            if (tp < -r || tp > r) continue;
            i64 v[3];
            v[f1] = t1;
            v[f2] = t2;
            v[pivot] = i64(tp);
            if (u64(v[pivot] * v[pivot]) > m - s2) continue;
            const u64 rem = m - s2 - u64(v[pivot] * v[pivot]);
            if (((0x13u >> (rem & 7)) & 1) == 0) continue;
            if (auto w = is_square(rem)) return SignedDecomposition{v[0], v[1], v[2], i64(*w)};
        }
    }
    return std::nullopt;
}

std::optional<SignedDecomposition> find_constrained_signed(u64 m, const ConstraintSpec& spec) {
    const LinearForm4* f = spec.linear();
    if (!f) throw std::invalid_argument("signed search requires a linear form");
    require_signed_range(m);
    const u64 r = isqrt(m);
    const u128 reach = (u128(std::llabs(f->a)) + u128(std::llabs(f->b)) + u128(std::llabs(f->c)) +
                        u128(std::llabs(f->d))) *
                       r;
    const u64 cap = reach > u128(~u64(0)) ? ~u64(0) : u64(reach);
    if (f->d == 0) {
        for (u64 v : target_values_up_to(spec.target, cap)) {
            if (v > u64(std::numeric_limits<i64>::max())) break;
            if (auto q = find_signed_with_linear_value(m, *f, i64(v))) return q;
            if (spec.target.absolute && v > 0)
                if (auto q = find_signed_with_linear_value(m, *f, -i64(v))) return q;
        }
        return std::nullopt;
    }
    return signed_sweep(m, spec);
}

} // namespace sums4
