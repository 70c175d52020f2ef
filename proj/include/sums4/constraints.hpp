#pragma once
// Constraint language placed on four-square decompositions: linear forms in
// (x,y,z,w), binary quadratic forms in (x,y), target sets (squares and
// power-of-two families), and the registry of named compound predicates used
// by the conjecture battery.
#include "sums4/arith.hpp"

#include <string>
#include <variant>
#include <vector>

namespace sums4 {

struct LinearForm4 {
    i64 a = 0, b = 0, c = 0, d = 0; // a*x + b*y + c*z + d*w; not all zero

    i128 value(i64 x, i64 y, i64 z, i64 w) const {
        return i128(a) * x + i128(b) * y + i128(c) * z + i128(d) * w;
    }
    bool operator==(const LinearForm4&) const = default;
    std::string pretty() const;   // "x+2y+3z", "16x-15y", ...
    std::string key() const;      // canonical "linear(a,b,c,d)"
};

struct QuadFormXY {
    i64 p = 0, q = 0, r = 0; // p*x^2 + q*y^2 + r*x*y; not all zero

    i128 value(i64 x, i64 y) const {
        return i128(p) * x * x + i128(q) * y * y + i128(r) * x * y;
    }
    bool operator==(const QuadFormXY&) const = default;
    std::string pretty() const;
    std::string key() const;
};

struct TargetSet {
    TargetKind kind = TargetKind::Square;
    bool absolute = false; // test |value| instead of value

    bool contains(i128 value) const;
    bool operator==(const TargetSet&) const = default;
    std::string name() const; // "sq", "sq+", "pow2", "pow4+", ...
};

using NamedFn = bool (*)(i64 x, i64 y, i64 z, i64 w);

// A self-contained predicate over a quadruple, addressable by id from the
// CLI and the conjecture registry.
struct NamedPredicate {
    std::string id;        // e.g. "C4.6:d=1"
    std::string statement; // human-readable description
    NamedFn fn = nullptr;

    bool operator==(const NamedPredicate& o) const { return id == o.id; }
};

const std::vector<NamedPredicate>& named_predicates();
const NamedPredicate* find_named_predicate(const std::string& id);

struct ConstraintSpec {
    std::variant<LinearForm4, QuadFormXY, NamedPredicate> form;
    TargetSet target; // unused when form is a NamedPredicate

    bool matches(i64 x, i64 y, i64 z, i64 w) const;
    bool is_linear() const { return std::holds_alternative<LinearForm4>(form); }
    const LinearForm4* linear() const { return std::get_if<LinearForm4>(&form); }
    std::string key() const;    // canonical form used for hashing/reports
    std::string pretty() const; // for human output
};

template <class Quad>
bool evaluate(const ConstraintSpec& spec, const Quad& q) {
    return spec.matches(i64(q.x), i64(q.y), i64(q.z), i64(q.w));
}

// Ascending list of the nonnegative members of a target set that are <= cap.
// (The absolute flag is the caller's business: members are sign-free.)
std::vector<u64> target_values_up_to(const TargetSet& t, u64 cap);

// Text syntax (also documented in the CLI help):
//   forms:   "1,2,3,0"  (linear a,b,c,d)   |   "quad:2,4,-7"  (p,q,r)
//   targets: sq sq+ pow2 pow2+ pow4 pow4+ pow2even pow2odd
//   named:   "C4.6:d=1", "C4.7:l=2,d=0", "C4.8a:d=0", "C4.8b:d=1", "C4.9"
// Bad syntax throws std::invalid_argument.
ConstraintSpec parse_spec(const std::string& form, const std::string& target, bool absolute);
ConstraintSpec named_spec(const std::string& id);
TargetSet parse_target(const std::string& name, bool absolute);

} // namespace sums4
