#pragma once

// Exact arithmetic in towers of finite fields F = GF(p^s) <= K = GF(p^r),
// p an odd prime and s | r. K is realized as GF(p)[x]/(modulus) and an
// element is stored as a packed index in [0, p^r): base-p digit i of the
// index is the coefficient of w^i, where w denotes the class of x.
//
// Small fields (q <= 2^16) get discrete log/antilog tables keyed to a fixed
// primitive element; larger fields fall back to polynomial arithmetic. Both
// paths implement the same operations, which the tests play against each
// other.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dickson {

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

struct FqElem {
    const FieldTower* tower = nullptr;
    std::uint64_t idx = 0;

    bool is_zero() const { return idx == 0; }
};

// An F-automorphism of K, i.e. a power of x -> x^(p^s). exp is normalized
// modulo r/s, so exp == 0 is the identity.
struct AutMap {
    const FieldTower* tower = nullptr;
    std::uint32_t exp = 0;

    bool is_identity() const { return exp == 0; }
};

namespace gfpoly {

// Dense polynomials over GF(p), coefficients lowest degree first. These
// routines also serve as the independent slow path the unit tests pit
// against the table-driven field arithmetic.

using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mul_mod(const Poly& a, const Poly& b, const Poly& modulus, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += std::uint64_t(a[i]) * b[j];
    }
    // reduce by the monic modulus of degree d
    const std::size_t d = modulus.size() - 1;
    for (std::size_t k = acc.size(); k-- > d;) {
        const std::uint64_t coef = acc[k] % p;
        if (coef == 0) continue;
        // x^k = x^(k-d) * (x^d) and x^d = -(low part of modulus)
        for (std::size_t i = 0; i < d; ++i) {
            const std::uint64_t m = modulus[i] % p;
            if (m) acc[k - d + i] += coef * (p - m);
        }
        acc[k] = 0;
    }
    Poly out(d, 0);
    for (std::size_t i = 0; i < d && i < acc.size(); ++i)
        out[i] = static_cast<std::uint32_t>(acc[i] % p);
    trim(out);
    return out;
}

inline Poly pow_mod(Poly base, std::uint64_t e, const Poly& modulus, std::uint32_t p) {
    Poly result{1};
    while (e) {
        if (e & 1) result = mul_mod(result, base, modulus, p);
        base = mul_mod(base, base, modulus, p);
        e >>= 1;
    }
    return result;
}

inline Poly mod(Poly a, const Poly& m, std::uint32_t p) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    const std::uint64_t lead_inv = [&] {
        // inverse of the leading coefficient of m mod p
        std::uint64_t base = m.back() % p, acc = 1, e = p - 2;
        while (e) {
            if (e & 1) acc = acc * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return acc;
    }();
    while (a.size() > dm) {
        const std::uint64_t factor = a.back() % p * lead_inv % p;
        const std::size_t shift = a.size() - 1 - dm;
        if (factor) {
            for (std::size_t i = 0; i <= dm; ++i) {
                std::uint64_t sub = factor * m[i] % p;
                a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
            }
        }
        trim(a);
        if (a.empty()) break;
    }
    return a;
}

inline Poly gcd(Poly a, Poly b, std::uint32_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        // normalize monic
        std::uint64_t lead = a.back(), inv = 1, e = p - 2;
        while (e) {
            if (e & 1) inv = inv * lead % p;
            lead = lead * lead % p;
            e >>= 1;
        }
        for (auto& c : a) c = static_cast<std::uint32_t>(c * inv % p);
    }
    return a;
}

inline std::vector<std::uint32_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint32_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(static_cast<std::uint32_t>(d));
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(static_cast<std::uint32_t>(n));
    return out;
}

// Rabin test: f of degree d is irreducible over GF(p) iff x^(p^d) == x mod f
// and gcd(x^(p^(d/l)) - x, f) = 1 for every prime l | d.
inline bool is_irreducible(const Poly& f, std::uint32_t p) {
    if (f.size() < 2 || f.back() != 1) return false;
    const std::size_t d = f.size() - 1;
    if (d == 1) return true;
    const auto prime_divisors = prime_factors(d);
    Poly h{0, 1};  // x
    std::size_t step = 0;
    for (std::size_t i = 1; i <= d; ++i) {
        h = pow_mod(std::move(h), p, f, p);  // h := h^p, so h = x^(p^i)
        ++step;
        for (auto l : prime_divisors) {
            if (step != d / l) continue;
            Poly diff = h;
            if (diff.size() < 2) diff.resize(2, 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(diff);
            Poly g = gcd(diff, f, p);
            if (!(g.size() == 1 && g[0] == 1)) return false;
        }
    }
    // h now equals x^(p^d) mod f
    Poly x{0, 1};
    trim(h);
    return h == x;
}

}  // namespace gfpoly

namespace detail {
inline bool is_prime_u32(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}
}  // namespace detail

class FieldTower {
  public:
    static TowerPtr make(std::uint32_t p, std::uint32_t s, std::uint32_t r) {
        return TowerPtr(new FieldTower(p, s, r, {}, true));
    }
    static TowerPtr make(std::uint32_t p, std::uint32_t s, std::uint32_t r,
                         std::vector<std::uint32_t> modulus) {
        return TowerPtr(new FieldTower(p, s, r, std::move(modulus), true));
    }
    // use_tables = false forces the polynomial slow path everywhere; the
    // tests exercise both paths against each other.
    static TowerPtr make_opts(std::uint32_t p, std::uint32_t s, std::uint32_t r,
                              std::vector<std::uint32_t> modulus, bool use_tables) {
        return TowerPtr(new FieldTower(p, s, r, std::move(modulus), use_tables));
    }

    FieldTower(const FieldTower&) = delete;
    FieldTower& operator=(const FieldTower&) = delete;

    std::uint32_t p() const { return p_; }
    std::uint32_t s() const { return s_; }
    std::uint32_t r() const { return r_; }
    std::uint64_t q() const { return q_; }
    std::uint64_t f_size() const { return fq_; }
    // [K:F], which is also the order of the cyclic group Aut_F(K)
    std::uint32_t ext_degree() const { return r_ / s_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    bool has_tables() const { return tables_; }

    // ---- element construction ----

    FqElem zero() const { return {this, 0}; }
    FqElem one() const { return {this, one_idx_}; }

    FqElem from_index(std::uint64_t idx) const {
        if (idx >= q_) throw std::invalid_argument("element index out of range");
        return {this, idx};
    }

    FqElem from_int(std::uint64_t n) const { return {this, reduce_const(n % p_)}; }

    FqElem from_coeffs(const std::vector<std::uint32_t>& c) const {
        if (c.size() > r_) throw std::invalid_argument("too many coefficients for this field");
        std::uint64_t idx = 0, scale = 1;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] >= p_) throw std::invalid_argument("coefficient out of range [0, p)");
            idx += scale * c[i];
            scale *= p_;
        }
        return {this, idx};
    }

    std::vector<std::uint32_t> coeffs(FqElem x) const {
        check(x);
        std::vector<std::uint32_t> out(r_, 0);
        std::uint64_t v = x.idx;
        for (std::uint32_t i = 0; i < r_; ++i) {
            out[i] = static_cast<std::uint32_t>(v % p_);
            v /= p_;
        }
        return out;
    }

    FqElem w() const { return {this, r_ == 1 ? 0 : p_}; }  // class of x (zero when K = GF(p))

    // ---- index-level arithmetic (no ownership checks; hot loops) ----

    std::uint64_t add_idx(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t out = 0, scale = 1;
        for (std::uint32_t i = 0; i < r_; ++i) {
            const std::uint64_t da = a % p_, db = b % p_;
            std::uint64_t d = da + db;
            if (d >= p_) d -= p_;
            out += scale * d;
            a /= p_;
            b /= p_;
            scale *= p_;
        }
        return out;
    }

    std::uint64_t neg_idx(std::uint64_t a) const {
        std::uint64_t out = 0, scale = 1;
        for (std::uint32_t i = 0; i < r_; ++i) {
            const std::uint64_t da = a % p_;
            out += scale * (da ? p_ - da : 0);
            a /= p_;
            scale *= p_;
        }
        return out;
    }

    std::uint64_t sub_idx(std::uint64_t a, std::uint64_t b) const { return add_idx(a, neg_idx(b)); }

    std::uint64_t mul_idx(std::uint64_t a, std::uint64_t b) const {
        if (a == 0 || b == 0) return 0;
        if (tables_) {
            std::uint64_t e = log_[a] + log_[b];
            if (e >= q_ - 1) e -= q_ - 1;
            return exp_[e];
        }
        return pack(gfpoly::mul_mod(unpack(a), unpack(b), modulus_, p_));
    }

    std::uint64_t inv_idx(std::uint64_t a) const {
        if (a == 0) throw std::domain_error("cannot invert zero");
        if (tables_) {
            const std::uint64_t e = log_[a];
            return exp_[e == 0 ? 0 : q_ - 1 - e];
        }
        return pack(gfpoly::pow_mod(unpack(a), q_ - 2, modulus_, p_));
    }

    std::uint64_t pow_idx(std::uint64_t a, long long e) const {
        if (a == 0) {
            if (e > 0) return 0;
            if (e == 0) return one_idx_;
            throw std::domain_error("cannot invert zero");
        }
        const std::uint64_t ord = q_ - 1;
        std::uint64_t e_red = static_cast<std::uint64_t>(((e % (long long)ord) + (long long)ord) %
                                                         (long long)ord);
        if (tables_) return exp_[mulmod_ord(log_[a], e_red)];
        return pack(gfpoly::pow_mod(unpack(a), e_red, modulus_, p_));
    }

    // phi^(s*j) with phi the p-power Frobenius; j is reduced mod r/s.
    std::uint64_t frob_idx(std::uint64_t a, std::uint32_t j) const {
        if (a == 0) return 0;
        j %= ext_degree();
        if (j == 0) return a;
        if (tables_) return exp_[mulmod_ord(log_[a], frob_exp_[j])];
        return pack(gfpoly::pow_mod(unpack(a), frob_pow_[j], modulus_, p_));
    }

    // N_{K/F}(a) = a^((q-1)/(|F|-1))
    std::uint64_t norm_idx(std::uint64_t a) const {
        if (a == 0) return 0;
        if (tables_) return exp_[mulmod_ord(log_[a], norm_exp_)];
        return pack(gfpoly::pow_mod(unpack(a), norm_exp_, modulus_, p_));
    }

    bool is_square_idx(std::uint64_t a) const {
        if (a == 0) return true;
        if (tables_) return (log_[a] & 1) == 0;
        return pack(gfpoly::pow_mod(unpack(a), (q_ - 1) / 2, modulus_, p_)) == one_idx_;
    }

    bool in_F_idx(std::uint64_t a) const {
        if (a == 0) return true;
        if (tables_) return log_[a] % norm_exp_ == 0;  // F^x is the subgroup of index (q-1)/(|F|-1)
        return fixed_by_f_frobenius(a);
    }

    // whether a (assumed to lie in F) is a square of an element of F
    bool is_square_in_F_idx(std::uint64_t a) const {
        if (!in_F_idx(a)) throw std::invalid_argument("element does not lie in the base field F");
        if (a == 0) return true;
        if (tables_) return ((log_[a] / norm_exp_) & 1) == 0;
        return pow_idx(a, static_cast<long long>((fq_ - 1) / 2)) == one_idx_;
    }

    std::uint64_t generator_idx() const { return gen_idx_; }

    std::uint64_t unit_log(std::uint64_t a) const {
        if (a == 0) throw std::domain_error("zero has no discrete log");
        if (tables_) return log_[a];
        std::uint64_t cur = one_idx_;
        for (std::uint64_t k = 0; k < q_ - 1; ++k) {
            if (cur == a) return k;
            cur = mul_idx(cur, gen_idx_);
        }
        throw std::logic_error("discrete log walk failed");
    }

    std::uint64_t unit_by_log(std::uint64_t k) const {
        k %= q_ - 1;
        if (tables_) return exp_[k];
        return pow_idx(gen_idx_, static_cast<long long>(k));
    }

    // ---- element-level wrappers with ownership checks ----

    FqElem add(FqElem a, FqElem b) const { check2(a, b); return {this, add_idx(a.idx, b.idx)}; }
    FqElem sub(FqElem a, FqElem b) const { check2(a, b); return {this, sub_idx(a.idx, b.idx)}; }
    FqElem neg(FqElem a) const { check(a); return {this, neg_idx(a.idx)}; }
    FqElem mul(FqElem a, FqElem b) const { check2(a, b); return {this, mul_idx(a.idx, b.idx)}; }
    FqElem inv(FqElem a) const { check(a); return {this, inv_idx(a.idx)}; }
    FqElem pow(FqElem a, long long e) const { check(a); return {this, pow_idx(a.idx, e)}; }

    AutMap aut(std::uint32_t j) const { return {this, j % ext_degree()}; }
    AutMap aut_identity() const { return {this, 0}; }

    std::vector<AutMap> aut_group() const {
        std::vector<AutMap> out;
        for (std::uint32_t j = 0; j < ext_degree(); ++j) out.push_back({this, j});
        return out;
    }

    FqElem frobenius(FqElem x, std::uint32_t j) const { check(x); return {this, frob_idx(x.idx, j)}; }
    FqElem apply(AutMap a, FqElem x) const {
        if (a.tower != this) throw std::invalid_argument("mixed-tower operands");
        return frobenius(x, a.exp);
    }

    FqElem norm(FqElem x) const { check(x); return {this, norm_idx(x.idx)}; }
    bool is_square(FqElem x) const { check(x); return is_square_idx(x.idx); }
    bool in_F(FqElem x) const { check(x); return in_F_idx(x.idx); }
    bool is_square_in_F(FqElem x) const { check(x); return is_square_in_F_idx(x.idx); }
    FqElem generator() const { return {this, gen_idx_}; }

    std::vector<FqElem> fixed_field(AutMap a) const {
        if (a.tower != this) throw std::invalid_argument("mixed-tower operands");
        std::vector<FqElem> out;
        for (std::uint64_t i = 0; i < q_; ++i)
            if (frob_idx(i, a.exp) == i) out.push_back({this, i});
        return out;
    }

    const std::vector<FqElem>& f_elements() const { return f_elems_; }

    // ---- coordinates of K over F in the basis 1, w, ..., w^(t-1) ----

    std::vector<FqElem> f_coords(FqElem x) const {
        check(x);
        const std::uint32_t t = ext_degree();
        // base-p digits of x, then change of basis through Minv
        std::vector<std::uint32_t> digits(r_);
        std::uint64_t v = x.idx;
        for (std::uint32_t i = 0; i < r_; ++i) {
            digits[i] = static_cast<std::uint32_t>(v % p_);
            v /= p_;
        }
        std::vector<FqElem> out(t, zero());
        for (std::uint32_t i = 0; i < t; ++i) {
            std::uint64_t coord = 0;
            for (std::uint32_t j = 0; j < s_; ++j) {
                std::uint64_t a = 0;
                const std::uint32_t row = i * s_ + j;
                for (std::uint32_t k = 0; k < r_; ++k)
                    a = (a + std::uint64_t(coord_inv_[row][k]) * digits[k]) % p_;
                // coord += a * nu^j
                coord = add_idx(coord, mul_idx(reduce_const(a), nu_pow_[j]));
            }
            out[i] = {this, coord};
        }
        return out;
    }

    FqElem f_from_coords(const std::vector<FqElem>& coords) const {
        const std::uint32_t t = ext_degree();
        if (coords.size() != t) throw std::invalid_argument("expected one coordinate per basis element");
        std::uint64_t acc = 0;
        for (std::uint32_t i = 0; i < t; ++i) {
            check(coords[i]);
            if (!in_F_idx(coords[i].idx))
                throw std::invalid_argument("coordinate does not lie in the base field F");
            acc = add_idx(acc, mul_idx(coords[i].idx, w_pow_[i]));
        }
        return {this, acc};
    }

    // ---- textual form: "c0+c1*w+c2*w^2+..." ----

    std::string to_string(FqElem x) const {
        const auto c = coeffs(x);
        std::string out;
        for (std::uint32_t i = 0; i < r_; ++i) {
            if (i) out += '+';
            out += std::to_string(c[i]);
            if (i == 1) out += "*w";
            else if (i > 1) out += "*w^" + std::to_string(i);
        }
        return out;
    }

    FqElem parse(const std::string& text) const {
        std::vector<std::uint32_t> c(r_, 0);
        std::string stripped;
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch))) stripped += ch;
        if (stripped.empty()) throw std::invalid_argument("empty element literal");
        std::size_t pos = 0;
        while (pos < stripped.size()) {
            std::size_t next = stripped.find('+', pos);
            if (next == std::string::npos) next = stripped.size();
            const std::string term = stripped.substr(pos, next - pos);
            pos = next + 1;
            if (term.empty()) throw std::invalid_argument("malformed element literal: empty term");
            std::size_t star = term.find('*');
            std::uint64_t coef = 0;
            std::uint32_t power = 0;
            const std::string num = term.substr(0, star == std::string::npos ? term.size() : star);
            if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument("malformed element literal: bad coefficient '" + num + "'");
            coef = std::stoull(num);
            if (star != std::string::npos) {
                const std::string mono = term.substr(star + 1);
                if (mono == "w") power = 1;
                else if (mono.rfind("w^", 0) == 0) {
                    const std::string exps = mono.substr(2);
                    if (exps.empty() || exps.find_first_not_of("0123456789") != std::string::npos)
                        throw std::invalid_argument("malformed element literal: bad power '" + mono + "'");
                    power = static_cast<std::uint32_t>(std::stoul(exps));
                } else
                    throw std::invalid_argument("malformed element literal: bad monomial '" + mono + "'");
            }
            if (power >= r_) throw std::invalid_argument("element literal power exceeds degree");
            if (coef >= p_) throw std::invalid_argument("element literal coefficient must lie in [0, p)");
            c[power] = static_cast<std::uint32_t>((c[power] + coef) % p_);
        }
        return from_coeffs(c);
    }

  private:
    FieldTower(std::uint32_t p, std::uint32_t s, std::uint32_t r, std::vector<std::uint32_t> modulus,
               bool want_tables)
        : p_(p), s_(s), r_(r) {
        if (p == 2) throw std::invalid_argument("characteristic two is not supported");
        if (!detail::is_prime_u32(p)) throw std::invalid_argument("p must be an odd prime");
        if (s == 0 || r == 0 || r % s != 0) throw std::invalid_argument("s must divide r");
        if (r > 24) throw std::invalid_argument("extension degree too large");
        q_ = 1;
        for (std::uint32_t i = 0; i < r; ++i) {
            if (q_ > (std::uint64_t(1) << 40) / p) throw std::invalid_argument("field too large");
            q_ *= p;
        }
        fq_ = 1;
        for (std::uint32_t i = 0; i < s; ++i) fq_ *= p;

        if (modulus.empty()) modulus_ = canonical_modulus();
        else {
            modulus_ = std::move(modulus);
            gfpoly::Poly m = modulus_;
            gfpoly::trim(m);
            if (m.size() != r_ + 1) throw std::invalid_argument("modulus must have degree r");
            if (m.back() != 1) throw std::invalid_argument("modulus must be monic");
            for (auto c : modulus_)
                if (c >= p_) throw std::invalid_argument("modulus coefficient out of range [0, p)");
            if (!gfpoly::is_irreducible(m, p_))
                throw std::invalid_argument("modulus is reducible over GF(p)");
            modulus_ = m;
        }

        one_idx_ = 1;  // constant polynomial 1 packs to index 1
        tables_ = want_tables && q_ <= (std::uint64_t(1) << 16);

        find_generator();
        if (tables_) build_tables();
        build_frobenius_data();
        build_coord_data();

        f_elems_.reserve(fq_);
        f_elems_.push_back({this, 0});
        const std::uint64_t m = norm_exp_;
        std::uint64_t cur = one_idx_;
        const std::uint64_t step = tables_ ? 0 : pow_idx(gen_idx_, static_cast<long long>(m));
        for (std::uint64_t k = 0; k < fq_ - 1; ++k) {
            f_elems_.push_back({this, cur});
            cur = tables_ ? exp_[(log_[cur] + m) % (q_ - 1)] : mul_idx(cur, step);
        }
        std::sort(f_elems_.begin(), f_elems_.end(),
                  [](FqElem a, FqElem b) { return a.idx < b.idx; });
    }

    void check(FqElem a) const {
        if (a.tower != this) throw std::invalid_argument("mixed-tower operands");
    }
    void check2(FqElem a, FqElem b) const { check(a); check(b); }

    std::uint64_t mulmod_ord(std::uint64_t a, std::uint64_t b) const {
        return a * b % (q_ - 1);  // both < 2^16 when tables are on
    }

    std::uint64_t reduce_const(std::uint64_t a) const { return a % p_; }

    bool fixed_by_f_frobenius(std::uint64_t a) const {
        // a in F iff a^(p^s) == a; only used on the slow path
        return pack(gfpoly::pow_mod(unpack(a), fq_, modulus_, p_)) == a;
    }

    gfpoly::Poly unpack(std::uint64_t idx) const {
        gfpoly::Poly out;
        out.reserve(r_);
        while (idx) {
            out.push_back(static_cast<std::uint32_t>(idx % p_));
            idx /= p_;
        }
        return out;
    }

    std::uint64_t pack(const gfpoly::Poly& a) const {
        std::uint64_t idx = 0;
        for (std::size_t i = a.size(); i-- > 0;) idx = idx * p_ + a[i];
        return idx;
    }

    // Smallest monic irreducible of degree r, coefficient tuples ordered by
    // (c_{r-1}, ..., c_1, c_0) ascending.
    std::vector<std::uint32_t> canonical_modulus() const {
        for (std::uint64_t k = 0; k < q_; ++k) {
            gfpoly::Poly f(r_ + 1, 0);
            f[r_] = 1;
            std::uint64_t v = k;
            for (std::uint32_t i = 0; i < r_; ++i) {
                f[i] = static_cast<std::uint32_t>(v % p_);
                v /= p_;
            }
            if (gfpoly::is_irreducible(f, p_)) return f;
        }
        throw std::logic_error("no irreducible polynomial found");
    }

    void find_generator() {
        const auto factors = gfpoly::prime_factors(q_ - 1);
        for (std::uint64_t g = 1; g < q_; ++g) {
            bool primitive = true;
            for (auto f : factors) {
                if (pack(gfpoly::pow_mod(unpack(g), (q_ - 1) / f, modulus_, p_)) == one_idx_) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) {
                gen_idx_ = g;
                return;
            }
        }
        throw std::logic_error("no primitive element found");
    }

    void build_tables() {
        exp_.assign(q_ - 1, 0);
        log_.assign(q_, 0);
        const gfpoly::Poly g = unpack(gen_idx_);
        gfpoly::Poly cur{1};
        for (std::uint64_t k = 0; k < q_ - 1; ++k) {
            const std::uint64_t idx = pack(cur);
            exp_[k] = idx;
            log_[idx] = k;
            cur = gfpoly::mul_mod(cur, g, modulus_, p_);
        }
    }

    void build_frobenius_data() {
        const std::uint32_t t = ext_degree();
        frob_exp_.assign(t, 1);
        frob_pow_.assign(t, 1);
        norm_exp_ = (q_ - 1) / (fq_ - 1);
        std::uint64_t ps = fq_;  // p^s
        for (std::uint32_t j = 1; j < t; ++j) {
            frob_pow_[j] = frob_pow_[j - 1] * ps;           // p^(s*j), fits: p^r <= 2^40
            frob_exp_[j] = frob_pow_[j] % (q_ - 1);
        }
        if (t >= 1) frob_exp_[0] = 1;
    }

    void build_coord_data() {
        const std::uint32_t t = ext_degree();
        w_pow_.assign(t, one_idx_);
        for (std::uint32_t i = 1; i < t; ++i) w_pow_[i] = mul_idx(w_pow_[i - 1], w().idx);
        // nu generates F over GF(p); for s = 1 it is just 1
        std::uint64_t nu = s_ == 1 ? one_idx_ : norm_idx(gen_idx_);
        nu_pow_.assign(s_, one_idx_);
        for (std::uint32_t j = 1; j < s_; ++j) nu_pow_[j] = mul_idx(nu_pow_[j - 1], nu);
        // columns of M are the base-p digit vectors of w^i * nu^j
        std::vector<std::vector<std::uint32_t>> m(r_, std::vector<std::uint32_t>(r_, 0));
        for (std::uint32_t i = 0; i < t; ++i) {
            for (std::uint32_t j = 0; j < s_; ++j) {
                std::uint64_t v = mul_idx(w_pow_[i], nu_pow_[j]);
                for (std::uint32_t k = 0; k < r_; ++k) {
                    m[k][i * s_ + j] = static_cast<std::uint32_t>(v % p_);
                    v /= p_;
                }
            }
        }
        coord_inv_ = invert_gfp(m);
    }

    std::vector<std::vector<std::uint32_t>> invert_gfp(std::vector<std::vector<std::uint32_t>> m) const {
        const std::uint32_t n = r_;
        std::vector<std::vector<std::uint32_t>> inv(n, std::vector<std::uint32_t>(n, 0));
        for (std::uint32_t i = 0; i < n; ++i) inv[i][i] = 1;
        auto scalar_inv = [&](std::uint64_t a) {
            std::uint64_t acc = 1, base = a % p_, e = p_ - 2;
            while (e) {
                if (e & 1) acc = acc * base % p_;
                base = base * base % p_;
                e >>= 1;
            }
            return acc;
        };
        for (std::uint32_t col = 0; col < n; ++col) {
            std::uint32_t sel = col;
            while (sel < n && m[sel][col] == 0) ++sel;
            if (sel == n) throw std::logic_error("coordinate basis matrix is singular");
            std::swap(m[sel], m[col]);
            std::swap(inv[sel], inv[col]);
            const std::uint64_t pi = scalar_inv(m[col][col]);
            for (std::uint32_t c2 = 0; c2 < n; ++c2) {
                m[col][c2] = static_cast<std::uint32_t>(m[col][c2] * pi % p_);
                inv[col][c2] = static_cast<std::uint32_t>(inv[col][c2] * pi % p_);
            }
            for (std::uint32_t row = 0; row < n; ++row) {
                if (row == col || m[row][col] == 0) continue;
                const std::uint64_t f = m[row][col];
                for (std::uint32_t c2 = 0; c2 < n; ++c2) {
                    m[row][c2] = static_cast<std::uint32_t>((m[row][c2] + (p_ - f) * m[col][c2]) % p_);
                    inv[row][c2] =
                        static_cast<std::uint32_t>((inv[row][c2] + (p_ - f) * inv[col][c2]) % p_);
                }
            }
        }
        return inv;
    }

    std::uint32_t p_, s_, r_;
    std::uint64_t q_ = 0, fq_ = 0;
    std::uint64_t one_idx_ = 1;
    std::uint64_t gen_idx_ = 0;
    std::uint64_t norm_exp_ = 0;
    bool tables_ = false;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> exp_, log_;      // discrete log tables (q <= 2^16)
    std::vector<std::uint64_t> frob_exp_;       // p^(s*j) mod (q-1)
    std::vector<std::uint64_t> frob_pow_;       // p^(s*j)
    std::vector<std::uint64_t> w_pow_, nu_pow_;
    std::vector<std::vector<std::uint32_t>> coord_inv_;
    std::vector<FqElem> f_elems_;
};

// ---- operator sugar ----

namespace detail {
inline const FieldTower& same_tower(FqElem a, FqElem b) {
    if (a.tower == nullptr || a.tower != b.tower)
        throw std::invalid_argument("mixed-tower operands");
    return *a.tower;
}
}  // namespace detail

inline FqElem operator+(FqElem a, FqElem b) { return detail::same_tower(a, b).add(a, b); }
inline FqElem operator-(FqElem a, FqElem b) { return detail::same_tower(a, b).sub(a, b); }
inline FqElem operator-(FqElem a) { return a.tower->neg(a); }
inline FqElem operator*(FqElem a, FqElem b) { return detail::same_tower(a, b).mul(a, b); }
inline FqElem inv(FqElem a) { return a.tower->inv(a); }
inline FqElem operator/(FqElem a, FqElem b) { return detail::same_tower(a, b).mul(a, inv(b)); }
inline FqElem pow(FqElem a, long long e) { return a.tower->pow(a, e); }

inline bool operator==(FqElem a, FqElem b) {
    if (a.tower != b.tower) throw std::invalid_argument("mixed-tower operands");
    return a.idx == b.idx;
}
inline bool operator!=(FqElem a, FqElem b) { return !(a == b); }

inline FqElem apply(AutMap a, FqElem x) { return a.tower->apply(a, x); }
inline AutMap compose(AutMap a, AutMap b) {  // a after b
    if (a.tower != b.tower) throw std::invalid_argument("mixed-tower operands");
    return {a.tower, (a.exp + b.exp) % a.tower->ext_degree()};
}
inline AutMap inverse(AutMap a) {
    const std::uint32_t t = a.tower->ext_degree();
    return {a.tower, (t - a.exp % t) % t};
}
inline bool operator==(AutMap a, AutMap b) {
    if (a.tower != b.tower) throw std::invalid_argument("mixed-tower operands");
    return a.exp == b.exp;
}
inline bool operator!=(AutMap a, AutMap b) { return !(a == b); }

inline FqElem relative_norm(FqElem x) { return x.tower->norm(x); }

}  // namespace dickson
