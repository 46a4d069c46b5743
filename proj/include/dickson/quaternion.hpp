#pragma once

// Quaternion algebras (a,b)_Q over the rationals: basis 1, i, j, k with
// i^2 = a, j^2 = b, ij = k = -ji. Exact coordinates via boost cpp_rational.
// Inner automorphisms carry an invertible witness; composing them multiplies
// witnesses, matching conjugation order x -> (wg*wh) x (wg*wh)^-1 for
// "apply h first, then g".

#include <array>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "dickson/linalg.hpp"

namespace dickson {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rational& x) { return numerator(x); }
inline BigInt rat_den(const Rational& x) { return denominator(x); }

inline bool is_perfect_square(const BigInt& n) {
    if (n < 0) return false;
    const BigInt root = boost::multiprecision::sqrt(n);
    return root * root == n;
}

// x a square in Q: lowest terms with both numerator and denominator perfect
// squares (cpp_rational keeps a canonical positive denominator).
inline bool rational_is_square(const Rational& x) {
    if (x < 0) return false;
    return is_perfect_square(rat_num(x)) && is_perfect_square(rat_den(x));
}

inline std::string format_rational(const Rational& x) {
    std::ostringstream out;
    out << rat_num(x);
    if (rat_den(x) != 1) out << '/' << rat_den(x);
    return out.str();
}

inline Rational parse_rational(const std::string& text) {
    std::string stripped;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) stripped += c;
    if (stripped.empty()) throw std::invalid_argument("empty rational literal");
    const std::size_t slash = stripped.find('/');
    auto parse_int = [](const std::string& s) -> BigInt {
        std::size_t start = (s.size() > 0 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (start == s.size() || s.find_first_not_of("0123456789", start) != std::string::npos)
            throw std::invalid_argument("malformed rational literal '" + s + "'");
        return BigInt(s);
    };
    if (slash == std::string::npos) return Rational(parse_int(stripped));
    const BigInt num = parse_int(stripped.substr(0, slash));
    const BigInt den = parse_int(stripped.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational literal with zero denominator");
    return Rational(num) / Rational(den);
}

// linalg policy over Q
struct RatOps {
    using Value = Rational;
    Value zero() const { return Rational(0); }
    Value one() const { return Rational(1); }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value inv(const Value& a) const {
        if (a == 0) throw std::domain_error("cannot invert zero");
        return Rational(1) / a;
    }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    bool is_zero(const Value& a) const { return a == 0; }
};

class QuatAlgebra;
using QuatPtr = std::shared_ptr<const QuatAlgebra>;

struct Quaternion {
    const QuatAlgebra* alg = nullptr;
    std::array<Rational, 4> co{};  // coordinates on 1, i, j, k

    bool is_zero() const { return co[0] == 0 && co[1] == 0 && co[2] == 0 && co[3] == 0; }
};

// Whether the norm form of the algebra lets us decide membership in
// N(D^x)^2. Only the definite case ships a decision procedure.
class NormGroupRule {
  public:
    virtual ~NormGroupRule() = default;
    virtual std::string name() const = 0;
    // is x an element of { N(d)^2 : d invertible }?
    virtual bool contains_square(const Rational& x) const = 0;
};

// For a, b < 0 the norm form is positive definite and N(D^x) is the full
// group of positive rationals (Hasse-Schilling-Maass), so the squares of
// norms are exactly the positive rational squares.
class DefiniteNormGroupRule final : public NormGroupRule {
  public:
    std::string name() const override { return "definite"; }
    bool contains_square(const Rational& x) const override {
        return x > 0 && rational_is_square(x);
    }
};

class QuatAlgebra {
  public:
    static QuatPtr make(const Rational& a, const Rational& b) {
        return QuatPtr(new QuatAlgebra(a, b));
    }

    QuatAlgebra(const QuatAlgebra&) = delete;
    QuatAlgebra& operator=(const QuatAlgebra&) = delete;

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    bool definite() const { return a_ < 0 && b_ < 0; }

    const NormGroupRule* norm_group_rule() const { return rule_.get(); }

    Quaternion zero() const { return {this, {}}; }
    Quaternion one() const { return element(1, 0, 0, 0); }
    Quaternion i() const { return element(0, 1, 0, 0); }
    Quaternion j() const { return element(0, 0, 1, 0); }
    Quaternion k() const { return element(0, 0, 0, 1); }

    Quaternion element(Rational t, Rational x, Rational y, Rational z) const {
        return {this, {std::move(t), std::move(x), std::move(y), std::move(z)}};
    }

    Quaternion scalar(const Rational& t) const { return element(t, 0, 0, 0); }

    std::array<Quaternion, 4> basis() const { return {one(), i(), j(), k()}; }

    Quaternion add(const Quaternion& u, const Quaternion& v) const {
        check2(u, v);
        return {this, {u.co[0] + v.co[0], u.co[1] + v.co[1], u.co[2] + v.co[2], u.co[3] + v.co[3]}};
    }
    Quaternion sub(const Quaternion& u, const Quaternion& v) const {
        check2(u, v);
        return {this, {u.co[0] - v.co[0], u.co[1] - v.co[1], u.co[2] - v.co[2], u.co[3] - v.co[3]}};
    }
    Quaternion neg(const Quaternion& u) const {
        check(u);
        return {this, {-u.co[0], -u.co[1], -u.co[2], -u.co[3]}};
    }
    Quaternion scale(const Rational& f, const Quaternion& u) const {
        check(u);
        return {this, {f * u.co[0], f * u.co[1], f * u.co[2], f * u.co[3]}};
    }

    Quaternion mul(const Quaternion& u, const Quaternion& v) const {
        check2(u, v);
        const Rational &t1 = u.co[0], &x1 = u.co[1], &y1 = u.co[2], &z1 = u.co[3];
        const Rational &t2 = v.co[0], &x2 = v.co[1], &y2 = v.co[2], &z2 = v.co[3];
        return {this,
                {t1 * t2 + a_ * x1 * x2 + b_ * y1 * y2 - a_ * b_ * z1 * z2,
                 t1 * x2 + x1 * t2 - b_ * y1 * z2 + b_ * z1 * y2,
                 t1 * y2 + y1 * t2 + a_ * x1 * z2 - a_ * z1 * x2,
                 t1 * z2 + z1 * t2 + x1 * y2 - y1 * x2}};
    }

    Quaternion conj(const Quaternion& u) const {
        check(u);
        return {this, {u.co[0], -u.co[1], -u.co[2], -u.co[3]}};
    }

    // reduced norm t^2 - a x^2 - b y^2 + ab z^2 = u * conj(u)
    Rational norm(const Quaternion& u) const {
        check(u);
        return u.co[0] * u.co[0] - a_ * u.co[1] * u.co[1] - b_ * u.co[2] * u.co[2] +
               a_ * b_ * u.co[3] * u.co[3];
    }

    Quaternion inv(const Quaternion& u) const {
        const Rational n = norm(u);
        if (n == 0)
            throw std::domain_error("cannot invert: reduced norm is zero (zero divisor)");
        return scale(Rational(1) / n, conj(u));
    }

    bool eq(const Quaternion& u, const Quaternion& v) const {
        check2(u, v);
        return u.co == v.co;
    }

    bool is_central(const Quaternion& u) const {
        check(u);
        return u.co[1] == 0 && u.co[2] == 0 && u.co[3] == 0;
    }

    std::string to_string(const Quaternion& u) const {
        check(u);
        static const char* names[4] = {"", "i", "j", "k"};
        std::string out;
        for (int c = 0; c < 4; ++c) {
            if (!out.empty()) out += '+';
            out += format_rational(u.co[c]);
            out += names[c];
        }
        return out;
    }

    // "t+xi+yj+zk" with rational coordinates; all four terms required, in order
    Quaternion parse(const std::string& text) const {
        std::string stripped;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) stripped += c;
        std::array<Rational, 4> co{};
        static const char suffix[4] = {'\0', 'i', 'j', 'k'};
        std::size_t pos = 0;
        for (int c = 0; c < 4; ++c) {
            // a term extends to the next '+' that is not a sign right after
            // '/', digits or at the start
            std::size_t end = pos;
            while (end < stripped.size()) {
                if (stripped[end] == '+' && end != pos) break;
                ++end;
            }
            if (pos >= stripped.size()) throw std::invalid_argument("quaternion literal needs four terms");
            std::string term = stripped.substr(pos, end - pos);
            pos = end + 1;
            if (c > 0) {
                if (term.empty() || term.back() != suffix[c])
                    throw std::invalid_argument(std::string("expected term ending in '") + suffix[c] + "'");
                term.pop_back();
            }
            co[c] = parse_rational(term);
        }
        if (pos <= stripped.size() && pos != stripped.size() + 1)
            throw std::invalid_argument("trailing characters in quaternion literal");
        return {this, co};
    }

  private:
    QuatAlgebra(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
        if (a_ == 0 || b_ == 0) throw std::invalid_argument("witness squares a, b must be nonzero");
        if (definite()) rule_ = std::make_unique<DefiniteNormGroupRule>();
    }

    void check(const Quaternion& u) const {
        if (u.alg != this) throw std::invalid_argument("mixed-algebra operands");
    }
    void check2(const Quaternion& u, const Quaternion& v) const { check(u); check(v); }

    Rational a_, b_;
    std::unique_ptr<const NormGroupRule> rule_;
};

namespace detail {
inline const QuatAlgebra& same_alg(const Quaternion& u, const Quaternion& v) {
    if (u.alg == nullptr || u.alg != v.alg) throw std::invalid_argument("mixed-algebra operands");
    return *u.alg;
}
}  // namespace detail

inline Quaternion operator+(const Quaternion& u, const Quaternion& v) {
    return detail::same_alg(u, v).add(u, v);
}
inline Quaternion operator-(const Quaternion& u, const Quaternion& v) {
    return detail::same_alg(u, v).sub(u, v);
}
inline Quaternion operator-(const Quaternion& u) { return u.alg->neg(u); }
inline Quaternion operator*(const Quaternion& u, const Quaternion& v) {
    return detail::same_alg(u, v).mul(u, v);
}
inline bool operator==(const Quaternion& u, const Quaternion& v) {
    return detail::same_alg(u, v).eq(u, v);
}
inline bool operator!=(const Quaternion& u, const Quaternion& v) { return !(u == v); }
inline Quaternion inv(const Quaternion& u) { return u.alg->inv(u); }
inline Quaternion conj(const Quaternion& u) { return u.alg->conj(u); }
inline Rational reduced_norm(const Quaternion& u) { return u.alg->norm(u); }

// Conjugation x -> w x w^-1 by an invertible witness.
struct InnerAut {
    const QuatAlgebra* alg = nullptr;
    Quaternion witness;

    bool is_identity() const { return alg->is_central(witness); }
};

inline InnerAut make_inner(const Quaternion& w) {
    if (w.alg == nullptr) throw std::invalid_argument("witness has no algebra");
    if (w.alg->norm(w) == 0)
        throw std::invalid_argument("inner automorphism witness must be invertible");
    return {w.alg, w};
}

inline Quaternion apply(const InnerAut& g, const Quaternion& x) {
    if (g.alg != x.alg) throw std::invalid_argument("mixed-algebra operands");
    return g.witness * x * inv(g.witness);
}

inline InnerAut compose(const InnerAut& g, const InnerAut& h) {  // g after h
    if (g.alg != h.alg) throw std::invalid_argument("mixed-algebra operands");
    return {g.alg, g.witness * h.witness};
}

inline InnerAut inverse(const InnerAut& g) { return {g.alg, inv(g.witness)}; }

// Witnesses act the same iff they agree up to a central factor.
inline bool same_inner(const InnerAut& g, const InnerAut& h) {
    if (g.alg != h.alg) throw std::invalid_argument("mixed-algebra operands");
    const Quaternion ratio = g.witness * inv(h.witness);
    return g.alg->is_central(ratio);
}

// Scale the witness so coordinates are coprime integers with the first
// nonzero one positive; stable form for reports.
inline Quaternion canonical_witness(const InnerAut& g) {
    BigInt den_lcm = 1;
    for (const auto& c : g.witness.co) {
        const BigInt d = rat_den(c);
        den_lcm = den_lcm / gcd(den_lcm, d) * d;
    }
    std::array<BigInt, 4> ints;
    BigInt g_all = 0;
    for (int c = 0; c < 4; ++c) {
        ints[c] = rat_num(g.witness.co[c]) * (den_lcm / rat_den(g.witness.co[c]));
        g_all = gcd(g_all, ints[c]);
    }
    if (g_all == 0) g_all = 1;
    int sign = 0;
    for (int c = 0; c < 4 && sign == 0; ++c)
        if (ints[c] != 0) sign = ints[c] > 0 ? 1 : -1;
    if (sign < 0) g_all = -g_all;
    return g.alg->element(Rational(ints[0] / g_all), Rational(ints[1] / g_all),
                          Rational(ints[2] / g_all), Rational(ints[3] / g_all));
}

}  // namespace dickson
