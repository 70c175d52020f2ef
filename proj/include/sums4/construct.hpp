#pragma once
// Constructive decompositions: the four-square composition identity and its
// exact inverse, the nonnegativity criterion for weighted witnesses, the
// congruence construction for x+2y+2z = n^2, the bounded search realizing
// x+2y+3z = n^2, and the two top-level decomposition procedures built on
// them.
#include "sums4/represent.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sums4 {

struct EulerWeights {
    u64 a = 0, b = 0, c = 0, d = 0; // not all zero

    u64 norm() const { return a * a + b * b + c * c + d * d; }
    // norm() minus the smallest nonzero weight square.
    u64 slack() const;
    // Smallest s >= 0 with s^2 >= m * slack(); the nonnegativity threshold.
    u64 s_min(u64 m) const;
};

struct StuvVector {
    i64 s = 0, t = 0, u = 0, v = 0;

    bool operator==(const StuvVector&) const = default;
};

// Composition: with N = a^2+b^2+c^2+d^2 and m = x^2+y^2+z^2+w^2,
//   s^2+t^2+u^2+v^2 = N*m, where
//   s = ax+by+cz+dw,  t = ay-bx+cw-dz,
//   u = az-bw-cx+dy,  v = aw+bz-cy-dx.
StuvVector euler_compose(const EulerWeights& W, const SignedDecomposition& q);

// Exact inverse of euler_compose: recovers (x,y,z,w) from (s,t,u,v) when all
// four numerators are divisible by N = W.norm(), nullopt otherwise.
std::optional<SignedDecomposition> back_solve(const EulerWeights& W, const StuvVector& stuv);

// s >= 0 and s^2 >= m * slack(W) force a*x, b*y, c*z, d*w >= 0 for any
// integer quadruple of m with ax+by+cz+dw = s.
bool nonneg_criterion(const EulerWeights& W, u64 m, i64 s);

// Intermediates of the congruence construction, for traces and tests.
struct Lemma22Steps {
    u64 residual = 0;     // 9m - n^4
    ThreeSquares triple;  // natural decomposition of residual
    i64 a = 0, b = 0, c = 0; // signed: a = 2 (mod 3), b = 1 (mod 3), 3 | c
    i64 u = 0, v = 0;     // u = (a-2n^2)/3, v = (b+2n^2)/3
};

// Integer quadruple of m with x + 2y + 2z = n^2, built by congruence
// adjustment from a three-square decomposition of 9m - n^4.
// Preconditions (nullopt when violated): m,n >= 1, 3 does not divide n,
// 9m - n^4 >= 0 and not of the form 4^s(8t+7).
std::optional<SignedDecomposition> lemma22_construct(u64 m, u64 n, Lemma22Steps* steps = nullptr);

// Integer quadruple of m with x + 2y + 3z = n^2, found by the bounded
// signed search (complete for this problem: every solution coordinate is
// at most isqrt(m) in magnitude).
// Preconditions (nullopt when violated): m,n >= 1, 14m - n^4 >= 0 and not
// of the form 4^s(8t+7). Exhaustion under valid preconditions throws.
std::optional<SignedDecomposition> lemma23_find(u64 m, u64 n);

// Verified search cutoffs for the two decomposition families: below these,
// the plain constrained search is guaranteed to succeed; at or above them,
// the constructive interval route applies.
// (4/(9^{1/4}-8^{1/4}))^4 ~= 40125453.161 and (2/(14^{1/4}-13^{1/4}))^4
// ~= 10065600.518.
constexpr u64 kConstructiveCutoffLambda2 = 40125454;
constexpr u64 kConstructiveCutoffLambda3 = 10065601;

// True iff m = 4^a(4b+1) for some a,b >= 0.
bool is_pow4_times_4b1(u64 m);

struct Theorem11Result {
    Decomposition witness;           // natural quadruple of m
    u64 value = 0;                   // x + 2y + lambda*z, a positive square
    std::vector<std::string> trace;  // human-checkable derivation
};

// Natural quadruple of m = 4^a(4b+1) with x + 2y + lambda*z a positive
// square, lambda in {2,3}. Throws std::invalid_argument when m is not of
// that form or lambda is out of range.
Theorem11Result theorem11_decompose(u64 m, int lambda);

struct Theorem12Result {
    SignedDecomposition witness;     // integer quadruple of m
    u64 exponent = 0;                // x + 2y + 3z = 4^exponent, exponent >= 1
    std::vector<std::string> trace;
};

// Integer quadruple of m with x + 2y + 3z = 4^a for some a >= 1, defined for
// every m > 1 except m = 10. Throws std::invalid_argument on m in {0,1,10}.
Theorem12Result theorem12_decompose(u64 m);

} // namespace sums4
