#pragma once

// The doubling construction Cay(D, c, s1, s2, s3, s4): on pairs (u, v) over a
// coefficient ring D with automorphisms s1..s4 fixing the base field F,
//
//   (u, v) (x, y) = (u x + c s1(v) s2(y),  s3(u) y + v s4(x))
//
// with products taken left to right. Two coefficient systems plug in below:
// a finite field tower K/F and a rational quaternion algebra D/Q. Everything
// downstream (structure probes, morphism searches) is generic in the ring.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dickson/gf.hpp"
#include "dickson/quaternion.hpp"

namespace dickson {

// ---- coefficient ring adapters ----

struct GfScalarOps {  // linalg policy over F, elements stored inside K
    const FieldTower* tw = nullptr;
    using Value = FqElem;
    Value zero() const { return tw->zero(); }
    Value one() const { return tw->one(); }
    Value add(Value a, Value b) const { return {tw, tw->add_idx(a.idx, b.idx)}; }
    Value sub(Value a, Value b) const { return {tw, tw->sub_idx(a.idx, b.idx)}; }
    Value mul(Value a, Value b) const { return {tw, tw->mul_idx(a.idx, b.idx)}; }
    Value inv(Value a) const { return {tw, tw->inv_idx(a.idx)}; }
    bool eq(Value a, Value b) const { return a.idx == b.idx; }
    bool is_zero(Value a) const { return a.idx == 0; }
};

struct GfRing {
    const FieldTower* tw = nullptr;

    using Elem = FqElem;
    using Aut = AutMap;
    using Scalar = FqElem;
    using ScalarOps = GfScalarOps;
    static constexpr bool finite = true;

    std::size_t dim() const { return tw->ext_degree(); }
    ScalarOps scalar_ops() const { return {tw}; }

    Elem zero() const { return tw->zero(); }
    Elem one() const { return tw->one(); }
    Elem add(Elem a, Elem b) const { return {tw, tw->add_idx(a.idx, b.idx)}; }
    Elem sub(Elem a, Elem b) const { return {tw, tw->sub_idx(a.idx, b.idx)}; }
    Elem neg(Elem a) const { return {tw, tw->neg_idx(a.idx)}; }
    Elem mul(Elem a, Elem b) const { return {tw, tw->mul_idx(a.idx, b.idx)}; }
    Elem inv(Elem a) const { return {tw, tw->inv_idx(a.idx)}; }
    bool eq(Elem a, Elem b) const { return a.idx == b.idx; }
    bool is_zero(Elem a) const { return a.idx == 0; }
    Elem scale(Scalar f, Elem x) const { return mul(f, x); }

    Elem apply(Aut a, Elem x) const { return {tw, tw->frob_idx(x.idx, a.exp)}; }
    Aut aut_identity() const { return {tw, 0}; }
    Aut aut_compose(Aut a, Aut b) const { return {tw, (a.exp + b.exp) % tw->ext_degree()}; }
    Aut aut_inverse(Aut a) const {
        const std::uint32_t t = tw->ext_degree();
        return {tw, (t - a.exp % t) % t};
    }
    bool aut_eq(Aut a, Aut b) const { return a.exp % tw->ext_degree() == b.exp % tw->ext_degree(); }
    bool aut_valid(Aut a) const { return a.tower == tw; }

    std::vector<Elem> basis() const {
        std::vector<Elem> out;
        Elem cur = one();
        for (std::size_t i = 0; i < dim(); ++i) {
            out.push_back(cur);
            cur = mul(cur, tw->w());
        }
        return out;
    }
    std::vector<Scalar> coords(Elem x) const { return tw->f_coords(x); }
    Elem from_coords(const std::vector<Scalar>& c) const { return tw->f_from_coords(c); }

    Scalar norm(Elem x) const { return tw->norm(x); }

    // enumeration (finite only)
    std::uint64_t size() const { return tw->q(); }
    Elem elem_at(std::uint64_t i) const { return {tw, i}; }
    std::uint64_t index_of(Elem x) const { return x.idx; }

    // membership of nc in { N(d)^2 : d a unit } = (F^x)^2; always decidable here
    bool norm_square_decidable() const { return true; }
    bool norm_square_contains(Scalar nc) const { return !is_zero(nc) && tw->is_square_in_F(nc); }
    std::string norm_group_name() const { return "finite field"; }

    // admissible scaling factors b for isomorphisms: any unit of K
    bool valid_b(Elem b) const { return !is_zero(b); }

    bool same_ring(const GfRing& o) const { return tw == o.tw; }
};

struct QuatRing {
    const QuatAlgebra* alg = nullptr;

    using Elem = Quaternion;
    using Aut = InnerAut;
    using Scalar = Rational;
    using ScalarOps = RatOps;
    static constexpr bool finite = false;

    std::size_t dim() const { return 4; }
    ScalarOps scalar_ops() const { return {}; }

    Elem zero() const { return alg->zero(); }
    Elem one() const { return alg->one(); }
    Elem add(const Elem& a, const Elem& b) const { return alg->add(a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return alg->sub(a, b); }
    Elem neg(const Elem& a) const { return alg->neg(a); }
    Elem mul(const Elem& a, const Elem& b) const { return alg->mul(a, b); }
    Elem inv(const Elem& a) const { return alg->inv(a); }
    bool eq(const Elem& a, const Elem& b) const { return alg->eq(a, b); }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
    Elem scale(const Scalar& f, const Elem& x) const { return alg->scale(f, x); }

    Elem apply(const Aut& a, const Elem& x) const { return dickson::apply(a, x); }
    Aut aut_identity() const { return {alg, alg->one()}; }
    Aut aut_compose(const Aut& a, const Aut& b) const { return compose(a, b); }
    Aut aut_inverse(const Aut& a) const { return inverse(a); }
    bool aut_eq(const Aut& a, const Aut& b) const { return same_inner(a, b); }
    bool aut_valid(const Aut& a) const { return a.alg == alg; }

    std::vector<Elem> basis() const { return {alg->one(), alg->i(), alg->j(), alg->k()}; }
    std::vector<Scalar> coords(const Elem& x) const {
        return {x.co[0], x.co[1], x.co[2], x.co[3]};
    }
    Elem from_coords(const std::vector<Scalar>& c) const {
        if (c.size() != 4) throw std::invalid_argument("expected four coordinates");
        return alg->element(c[0], c[1], c[2], c[3]);
    }

    Scalar norm(const Elem& x) const { return alg->norm(x); }

    bool norm_square_decidable() const { return alg->norm_group_rule() != nullptr; }
    bool norm_square_contains(const Scalar& nc) const {
        const NormGroupRule* rule = alg->norm_group_rule();
        if (!rule)
            throw std::runtime_error(
                "norm group unknown: no decision rule for this quaternion algebra "
                "(only the definite case a < 0, b < 0 is implemented)");
        return rule->contains_square(nc);
    }
    std::string norm_group_name() const {
        return alg->norm_group_rule() ? alg->norm_group_rule()->name() : "unknown";
    }

    // admissible scaling factors b must be central units here
    bool valid_b(const Elem& b) const { return !b.is_zero() && alg->is_central(b); }

    bool same_ring(const QuatRing& o) const { return alg == o.alg; }
};

template <class R>
concept CoefficientRing = requires(const R& ring) {
    typename R::Elem;
    typename R::Aut;
    typename R::Scalar;
    typename R::ScalarOps;
    { ring.dim() } -> std::convertible_to<std::size_t>;
    { R::finite } -> std::convertible_to<bool>;
};

// ---- the doubled algebra ----

template <CoefficientRing R>
struct DoublingParams {
    R ring;
    typename R::Elem c;
    std::array<typename R::Aut, 4> sigma;
};

template <CoefficientRing R>
DoublingParams<R> make_algebra(const R& ring, typename R::Elem c, typename R::Aut s1,
                               typename R::Aut s2, typename R::Aut s3, typename R::Aut s4) {
    if (ring.is_zero(c)) throw std::invalid_argument("doubling constant c must be nonzero");
    for (const auto& s : {s1, s2, s3, s4})
        if (!ring.aut_valid(s)) throw std::invalid_argument("automorphism belongs to another ring");
    return DoublingParams<R>{ring, c, {s1, s2, s3, s4}};
}

template <CoefficientRing R>
bool same_algebra(const DoublingParams<R>& a, const DoublingParams<R>& b) {
    if (!a.ring.same_ring(b.ring)) return false;
    if (!a.ring.eq(a.c, b.c)) return false;
    for (int i = 0; i < 4; ++i)
        if (!a.ring.aut_eq(a.sigma[i], b.sigma[i])) return false;
    return true;
}

template <CoefficientRing R>
struct DoubledElem {
    typename R::Elem u, v;
    const DoublingParams<R>* alg = nullptr;

    bool is_zero() const { return alg->ring.is_zero(u) && alg->ring.is_zero(v); }
};

template <CoefficientRing R>
DoubledElem<R> delem(const DoublingParams<R>& A, typename R::Elem u, typename R::Elem v) {
    return {std::move(u), std::move(v), &A};
}

template <CoefficientRing R>
DoubledElem<R> zero_elem(const DoublingParams<R>& A) {
    return {A.ring.zero(), A.ring.zero(), &A};
}

template <CoefficientRing R>
DoubledElem<R> unit_elem(const DoublingParams<R>& A) {
    return {A.ring.one(), A.ring.zero(), &A};
}

namespace detail {
template <CoefficientRing R>
void check_member(const DoublingParams<R>& A, const DoubledElem<R>& x) {
    if (x.alg == &A) return;
    if (x.alg == nullptr || !same_algebra(A, *x.alg))
        throw std::invalid_argument("element belongs to a different doubled algebra");
}
}  // namespace detail

template <CoefficientRing R>
DoubledElem<R> add(const DoublingParams<R>& A, const DoubledElem<R>& a, const DoubledElem<R>& b) {
    detail::check_member(A, a);
    detail::check_member(A, b);
    return {A.ring.add(a.u, b.u), A.ring.add(a.v, b.v), &A};
}

template <CoefficientRing R>
DoubledElem<R> sub(const DoublingParams<R>& A, const DoubledElem<R>& a, const DoubledElem<R>& b) {
    detail::check_member(A, a);
    detail::check_member(A, b);
    return {A.ring.sub(a.u, b.u), A.ring.sub(a.v, b.v), &A};
}

template <CoefficientRing R>
DoubledElem<R> neg(const DoublingParams<R>& A, const DoubledElem<R>& a) {
    detail::check_member(A, a);
    return {A.ring.neg(a.u), A.ring.neg(a.v), &A};
}

template <CoefficientRing R>
DoubledElem<R> scale(const DoublingParams<R>& A, const typename R::Scalar& f,
                     const DoubledElem<R>& a) {
    detail::check_member(A, a);
    return {A.ring.scale(f, a.u), A.ring.scale(f, a.v), &A};
}

template <CoefficientRing R>
DoubledElem<R> mul(const DoublingParams<R>& A, const DoubledElem<R>& a, const DoubledElem<R>& b) {
    detail::check_member(A, a);
    detail::check_member(A, b);
    const R& k = A.ring;
    // (u,v)(x,y): first slot u x + c s1(v) s2(y), second slot s3(u) y + v s4(x)
    auto first = k.add(k.mul(a.u, b.u),
                       k.mul(k.mul(A.c, k.apply(A.sigma[0], a.v)), k.apply(A.sigma[1], b.v)));
    auto second =
        k.add(k.mul(k.apply(A.sigma[2], a.u), b.v), k.mul(a.v, k.apply(A.sigma[3], b.u)));
    return {std::move(first), std::move(second), &A};
}

template <CoefficientRing R>
bool eq(const DoubledElem<R>& a, const DoubledElem<R>& b) {
    if (a.alg == nullptr || b.alg == nullptr ||
        (a.alg != b.alg && !same_algebra(*a.alg, *b.alg)))
        throw std::invalid_argument("element belongs to a different doubled algebra");
    return a.alg->ring.eq(a.u, b.u) && a.alg->ring.eq(a.v, b.v);
}

// basis (e_0,0), ..., (e_{d-1},0), (0,e_0), ..., (0,e_{d-1})
template <CoefficientRing R>
std::vector<DoubledElem<R>> doubled_basis(const DoublingParams<R>& A) {
    std::vector<DoubledElem<R>> out;
    for (const auto& e : A.ring.basis()) out.push_back({e, A.ring.zero(), &A});
    for (const auto& e : A.ring.basis()) out.push_back({A.ring.zero(), e, &A});
    return out;
}

template <CoefficientRing R>
std::vector<typename R::Scalar> doubled_coords(const DoublingParams<R>& A,
                                               const DoubledElem<R>& x) {
    detail::check_member(A, x);
    auto out = A.ring.coords(x.u);
    auto tail = A.ring.coords(x.v);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

template <CoefficientRing R>
DoubledElem<R> doubled_from_coords(const DoublingParams<R>& A,
                                   const std::vector<typename R::Scalar>& co) {
    const std::size_t d = A.ring.dim();
    if (co.size() != 2 * d) throw std::invalid_argument("wrong coordinate count");
    std::vector<typename R::Scalar> lo(co.begin(), co.begin() + static_cast<std::ptrdiff_t>(d));
    std::vector<typename R::Scalar> hi(co.begin() + static_cast<std::ptrdiff_t>(d), co.end());
    return {A.ring.from_coords(lo), A.ring.from_coords(hi), &A};
}

// enumeration of all q^2 doubled elements, finite rings only
template <CoefficientRing R>
    requires(R::finite)
DoubledElem<R> doubled_at(const DoublingParams<R>& A, std::uint64_t n) {
    const std::uint64_t q = A.ring.size();
    return {A.ring.elem_at(n % q), A.ring.elem_at(n / q), &A};
}

template <CoefficientRing R>
    requires(R::finite)
std::uint64_t doubled_count(const DoublingParams<R>& A) {
    return A.ring.size() * A.ring.size();
}

// ---- restriction of a tower algebra to an intermediate field E ----

struct GfSubalgebra {
    TowerPtr subtower;                    // E = GF(p^e) with its own canonical modulus
    DoublingParams<GfRing> algebra;       // Cay(E, c_E, restricted sigmas)
    FqElem root;                          // image of E's w inside K
    const FieldTower* ambient = nullptr;  // K

    // the field embedding E -> K determined by w_E -> root
    FqElem include(FqElem x) const {
        const auto digits = subtower->coeffs(x);
        FqElem acc = ambient->zero();
        FqElem rp = ambient->one();
        for (std::size_t i = 0; i < digits.size(); ++i) {
            acc = acc + ambient->from_int(digits[i]) * rp;
            rp = rp * root;
        }
        return acc;
    }
};

// Restrict Cay(K, c, s1..s4) to the intermediate field E = GF(p^e),
// F <= E <= K. Requires c inside (the image of) E and the sigmas to fix the
// image setwise; both are checked, and the inclusion map is verified
// multiplicative on the doubled basis of the restricted algebra.
inline GfSubalgebra subalgebra_embed(const DoublingParams<GfRing>& A, std::uint32_t e) {
    const FieldTower* K = A.ring.tw;
    if (e % K->s() != 0 || K->r() % e != 0)
        throw std::invalid_argument("intermediate degree must satisfy s | e and e | r");

    GfSubalgebra out;
    out.ambient = K;
    out.subtower = FieldTower::make(K->p(), K->s(), e);

    // root of E's modulus inside K, smallest packed index
    const auto& mod_e = out.subtower->modulus();
    bool found = false;
    for (std::uint64_t z = 0; z < K->q() && !found; ++z) {
        FqElem zz = K->from_index(z);
        FqElem acc = K->zero();
        FqElem zp = K->one();
        for (std::size_t i = 0; i < mod_e.size(); ++i) {
            acc = acc + K->from_int(mod_e[i]) * zp;
            zp = zp * zz;
        }
        if (acc.is_zero()) {
            out.root = zz;
            found = true;
        }
    }
    if (!found) throw std::logic_error("no root of the subfield modulus in K");

    // c must lie in the image of E: fixed by phi^e = (phi^s)^(e/s)
    const std::uint32_t e_over_s = e / K->s();
    if (K->frob_idx(A.c.idx, e_over_s) != A.c.idx)
        throw std::invalid_argument("c does not lie in the intermediate field");
    // each sigma must map the image of E into itself
    for (const auto& sig : A.sigma) {
        const std::uint64_t im = K->frob_idx(out.root.idx, sig.exp);
        if (K->frob_idx(im, e_over_s) != im)
            throw std::invalid_argument("sigma does not stabilize the intermediate field");
    }

    // pull c back through the inclusion
    FqElem c_e = out.subtower->zero();
    bool c_found = false;
    for (std::uint64_t i = 0; i < out.subtower->q() && !c_found; ++i) {
        FqElem cand = out.subtower->from_index(i);
        if (out.include(cand) == A.c) {
            c_e = cand;
            c_found = true;
        }
    }
    if (!c_found) throw std::logic_error("failed to pull c back to the intermediate field");

    GfRing ering{out.subtower.get()};
    const std::uint32_t sub_t = out.subtower->ext_degree();
    // phi^(s j) restricted to E is the same Frobenius power read mod [E:F]
    std::array<AutMap, 4> restricted;
    for (int i = 0; i < 4; ++i) restricted[i] = {out.subtower.get(), A.sigma[i].exp % sub_t};
    out.algebra =
        make_algebra(ering, c_e, restricted[0], restricted[1], restricted[2], restricted[3]);

    // the inclusion must intertwine the two multiplications on the basis
    const auto eb = doubled_basis(out.algebra);
    for (const auto& x : eb) {
        for (const auto& y : eb) {
            const auto prod = mul(out.algebra, x, y);
            const auto lhs = delem(A, out.include(prod.u), out.include(prod.v));
            const auto rhs = mul(A, delem(A, out.include(x.u), out.include(x.v)),
                                 delem(A, out.include(y.u), out.include(y.v)));
            if (!eq(lhs, rhs))
                throw std::logic_error("restricted algebra inclusion is not multiplicative");
        }
    }
    return out;
}

}  // namespace dickson
