#include "sums4/constraints.hpp"

#include <cstdlib>
#include <sstream>

namespace sums4 {

namespace {

// Render one monomial of a linear form ("x", "-2y", "+3z", ...).
void append_term(std::ostringstream& os, bool& first, i64 coef, const char* var) {
    if (coef == 0) return;
    if (first) {
        if (coef == -1) os << '-';
        else if (coef != 1) os << coef;
    } else {
        os << (coef < 0 ? '-' : '+');
        i64 mag = coef < 0 ? -coef : coef;
        if (mag != 1) os << mag;
    }
    os << var;
    first = false;
}

bool in_pow_set(i64 v, TargetKind k) { return v >= 0 && pow2_membership(u64(v), k); }

// C4.6(d): S = {2^(2a+d)} contains x+3y, and also x or y.
template <TargetKind K>
bool pred_x_plus_3y(i64 x, i64 y, i64, i64) {
    return in_pow_set(x + 3 * y, K) && (in_pow_set(x, K) || in_pow_set(y, K));
}

// C4.7(l,d): x or y is a power of two, and x+l*y lies in {2^(2a+d)}.
template <i64 L, TargetKind K>
bool pred_pow2_and_x_ly(i64 x, i64 y, i64, i64) {
    return (in_pow_set(x, TargetKind::Pow2Any) || in_pow_set(y, TargetKind::Pow2Any)) &&
           in_pow_set(x + L * y, K);
}

// C4.8a(d): S = {2^(2a+d)} contains x+15y, and also x or 2y.
template <TargetKind K>
bool pred_x_plus_15y(i64 x, i64 y, i64, i64) {
    return in_pow_set(x + 15 * y, K) && (in_pow_set(x, K) || in_pow_set(2 * y, K));
}

// C4.8b(d): 16x-15y lies in {2^(2a+d)}.
template <TargetKind K>
bool pred_16x_minus_15y(i64 x, i64 y, i64, i64) {
    return in_pow_set(16 * x - 15 * y, K);
}

// C4.9: x+63y lies in {2^(2a+1)}, and 2x or y is a power of four.
bool pred_x_plus_63y(i64 x, i64 y, i64, i64) {
    return in_pow_set(x + 63 * y, TargetKind::Pow2OddExp) &&
           (in_pow_set(2 * x, TargetKind::Pow4Any) || in_pow_set(y, TargetKind::Pow4Any));
}

constexpr TargetKind kEven = TargetKind::Pow2EvenExp;
constexpr TargetKind kOdd = TargetKind::Pow2OddExp;

} // namespace

std::string LinearForm4::pretty() const {
    std::ostringstream os;
    bool first = true;
    append_term(os, first, a, "x");
    append_term(os, first, b, "y");
    append_term(os, first, c, "z");
    append_term(os, first, d, "w");
    if (first) os << '0';
    return os.str();
}

std::string LinearForm4::key() const {
    std::ostringstream os;
    os << "linear(" << a << ',' << b << ',' << c << ',' << d << ')';
    return os.str();
}

std::string QuadFormXY::pretty() const {
    std::ostringstream os;
    bool first = true;
    append_term(os, first, p, "x^2");
    append_term(os, first, q, "y^2");
    append_term(os, first, r, "xy");
    if (first) os << '0';
    return os.str();
}

std::string QuadFormXY::key() const {
    std::ostringstream os;
    os << "quad(" << p << ',' << q << ',' << r << ')';
    return os.str();
}

bool TargetSet::contains(i128 value) const {
    if (absolute && value < 0) value = -value;
    if (value < 0) return false;
    if (value > i128(~u64(0))) return false;
    u64 n = u64(value);
    switch (kind) {
        case TargetKind::Square: return is_square(n).has_value();
        case TargetKind::PositiveSquare: return n > 0 && is_square(n).has_value();
        default: return pow2_membership(n, kind);
    }
}

std::string TargetSet::name() const {
    const char* base = nullptr;
    switch (kind) {
        case TargetKind::Square: base = "sq"; break;
        case TargetKind::PositiveSquare: base = "sq+"; break;
        case TargetKind::Pow2Any: base = "pow2"; break;
        case TargetKind::Pow2Positive: base = "pow2+"; break;
        case TargetKind::Pow4Any: base = "pow4"; break;
        case TargetKind::Pow4Positive: base = "pow4+"; break;
        case TargetKind::Pow2EvenExp: base = "pow2even"; break;
        case TargetKind::Pow2OddExp: base = "pow2odd"; break;
    }
    std::string s = base;
    if (absolute) s = "abs:" + s;
    return s;
}

bool ConstraintSpec::matches(i64 x, i64 y, i64 z, i64 w) const {
    if (const auto* lf = std::get_if<LinearForm4>(&form)) return target.contains(lf->value(x, y, z, w));
    if (const auto* qf = std::get_if<QuadFormXY>(&form)) return target.contains(qf->value(x, y));
    const auto& np = std::get<NamedPredicate>(form);
    return np.fn(x, y, z, w);
}

std::string ConstraintSpec::key() const {
    if (const auto* lf = std::get_if<LinearForm4>(&form)) return lf->key() + "@" + target.name();
    if (const auto* qf = std::get_if<QuadFormXY>(&form)) return qf->key() + "@" + target.name();
    return "named(" + std::get<NamedPredicate>(form).id + ")";
}

std::string ConstraintSpec::pretty() const {
    if (const auto* lf = std::get_if<LinearForm4>(&form)) return lf->pretty() + " in " + target.name();
    if (const auto* qf = std::get_if<QuadFormXY>(&form)) return qf->pretty() + " in " + target.name();
    return std::get<NamedPredicate>(form).id;
}

const std::vector<NamedPredicate>& named_predicates() {
    static const std::vector<NamedPredicate> kRegistry = {
        {"C4.6:d=0", "{4^a} contains x+3y, and also x or y", pred_x_plus_3y<kEven>},
        {"C4.6:d=1", "{2^(2a+1)} contains x+3y, and also x or y", pred_x_plus_3y<kOdd>},
        {"C4.7:l=2,d=0", "x or y is a power of two, and x+2y in {4^a}", pred_pow2_and_x_ly<2, kEven>},
        {"C4.7:l=2,d=1", "x or y is a power of two, and x+2y in {2^(2a+1)}", pred_pow2_and_x_ly<2, kOdd>},
        {"C4.7:l=8,d=0", "x or y is a power of two, and x+8y in {4^a}", pred_pow2_and_x_ly<8, kEven>},
        {"C4.7:l=8,d=1", "x or y is a power of two, and x+8y in {2^(2a+1)}", pred_pow2_and_x_ly<8, kOdd>},
        {"C4.8a:d=0", "{4^a} contains x+15y, and also x or 2y", pred_x_plus_15y<kEven>},
        {"C4.8a:d=1", "{2^(2a+1)} contains x+15y, and also x or 2y", pred_x_plus_15y<kOdd>},
        {"C4.8b:d=0", "16x-15y in {4^a}", pred_16x_minus_15y<kEven>},
        {"C4.8b:d=1", "16x-15y in {2^(2a+1)}", pred_16x_minus_15y<kOdd>},
        {"C4.9", "x+63y in {2^(2a+1)}, and 2x or y is a power of four", pred_x_plus_63y},
    };
    return kRegistry;
}

const NamedPredicate* find_named_predicate(const std::string& id) {
    for (const auto& p : named_predicates())
        if (p.id == id) return &p;
    return nullptr;
}

std::vector<u64> target_values_up_to(const TargetSet& t, u64 cap) {
    std::vector<u64> out;
    switch (t.kind) {
        case TargetKind::Square:
        case TargetKind::PositiveSquare: {
            u64 r = isqrt(cap);
            for (u64 k = (t.kind == TargetKind::Square) ? 0 : 1; k <= r; ++k) out.push_back(k * k);
            break;
        }
        default: {
            u64 start = 0, step = 0;
            switch (t.kind) {
                case TargetKind::Pow2Any: start = 1; step = 1; break;
                case TargetKind::Pow2Positive: start = 2; step = 1; break;
                case TargetKind::Pow4Any:
                case TargetKind::Pow2EvenExp: start = 1; step = 2; break;
                case TargetKind::Pow4Positive: start = 4; step = 2; break;
                case TargetKind::Pow2OddExp: start = 2; step = 2; break;
                default: break;
            }
            for (u64 v = start; v <= cap; v <<= step) {
                out.push_back(v);
                if (v > (~u64(0)) >> step) break; // next shift would overflow
            }
            break;
        }
    }
    return out;
}

namespace {

std::vector<i64> parse_int_list(const std::string& s, size_t expected, const char* what) {
    std::vector<i64> vals;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        size_t pos = 0;
        long long v;
        try {
            v = std::stoll(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("bad integer '") + item + "' in " + what);
        }
        if (pos != item.size())
            throw std::invalid_argument(std::string("bad integer '") + item + "' in " + what);
        vals.push_back(v);
    }
    if (vals.size() != expected)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(expected) +
                                    " comma-separated integers, got " + std::to_string(vals.size()));
    return vals;
}

} // namespace

TargetSet parse_target(const std::string& name, bool absolute) {
    TargetSet t;
    t.absolute = absolute;
    if (name == "sq") t.kind = TargetKind::Square;
    else if (name == "sq+") t.kind = TargetKind::PositiveSquare;
    else if (name == "pow2") t.kind = TargetKind::Pow2Any;
    else if (name == "pow2+") t.kind = TargetKind::Pow2Positive;
    else if (name == "pow4") t.kind = TargetKind::Pow4Any;
    else if (name == "pow4+") t.kind = TargetKind::Pow4Positive;
    else if (name == "pow2even") t.kind = TargetKind::Pow2EvenExp;
    else if (name == "pow2odd") t.kind = TargetKind::Pow2OddExp;
    else throw std::invalid_argument("unknown target set '" + name + "'");
    return t;
}

ConstraintSpec parse_spec(const std::string& form, const std::string& target, bool absolute) {
    ConstraintSpec spec;
    spec.target = parse_target(target, absolute);
    if (form.rfind("quad:", 0) == 0) {
        auto v = parse_int_list(form.substr(5), 3, "quadratic form");
        QuadFormXY qf{v[0], v[1], v[2]};
        if (qf.p == 0 && qf.q == 0 && qf.r == 0) throw std::invalid_argument("quadratic form is identically zero");
        spec.form = qf;
    } else {
        auto v = parse_int_list(form, 4, "linear form");
        LinearForm4 lf{v[0], v[1], v[2], v[3]};
        if (lf.a == 0 && lf.b == 0 && lf.c == 0 && lf.d == 0)
            throw std::invalid_argument("linear form is identically zero");
        spec.form = lf;
    }
    return spec;
}

ConstraintSpec named_spec(const std::string& id) {
    const NamedPredicate* p = find_named_predicate(id);
    if (!p) throw std::invalid_argument("unknown named predicate '" + id + "'");
    ConstraintSpec spec;
    spec.form = *p;
    return spec;
}

} // namespace sums4
