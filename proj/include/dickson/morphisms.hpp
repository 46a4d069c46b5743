#pragma once

// Isomorphisms and automorphisms of doubled algebras. The constructive route
// takes (g, h, b) data and target parameters and verifies the resulting map
// on every doubled-basis pair; the search routes enumerate all maps of the
// restricted shape over a finite tower; the generator-image brute force finds
// every isomorphism at small sizes, restricted shape or not, and is the
// oracle the constructions are checked against.
//
// Internal convention: a candidate always means G(u,v) = (g(u), h(v)*b).
// The construction route takes the scaling factor the other way around
// (target constant g(c)*t1(b)*t2(b) together with the map (g(u), h(v)*b^-1)),
// so build_isomorphism inverts b on storage. Searches and the automorphism
// enumeration already live in the internal shape: g(c) = c' * t1(b) * t2(b).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dickson/doubling.hpp"
#include "dickson/linalg.hpp"

namespace dickson {

template <CoefficientRing R>
struct MorphismCandidate {
    DoublingParams<R> source, target;
    typename R::Aut g, h;
    typename R::Elem b;  // G(u,v) = (g(u), h(v) b)
    bool verified = false;
};

template <CoefficientRing R>
DoubledElem<R> apply_morphism(const MorphismCandidate<R>& m, const DoubledElem<R>& x) {
    const auto& k = m.source.ring;
    return delem(m.target, k.apply(m.g, x.u), k.mul(k.apply(m.h, x.v), m.b));
}

// independent check: multiplicative on all basis pairs, unit to unit
template <CoefficientRing R>
bool verify_morphism(MorphismCandidate<R>& m) {
    m.verified = false;
    if (!eq(apply_morphism(m, unit_elem(m.source)), unit_elem(m.target))) return false;
    const auto basis = doubled_basis(m.source);
    for (const auto& x : basis) {
        for (const auto& y : basis) {
            const auto lhs = apply_morphism(m, mul(m.source, x, y));
            const auto rhs = mul(m.target, apply_morphism(m, x), apply_morphism(m, y));
            if (!eq(lhs, rhs)) return false;
        }
    }
    m.verified = true;
    return true;
}

template <CoefficientRing R>
bool candidate_eq(const MorphismCandidate<R>& a, const MorphismCandidate<R>& b) {
    const auto& k = a.source.ring;
    return same_algebra(a.source, b.source) && same_algebra(a.target, b.target) &&
           k.aut_eq(a.g, b.g) && k.aut_eq(a.h, b.h) && k.eq(a.b, b.b);
}

// c2 after c1
template <CoefficientRing R>
MorphismCandidate<R> compose_candidates(const MorphismCandidate<R>& c2,
                                        const MorphismCandidate<R>& c1) {
    if (!same_algebra(c1.target, c2.source))
        throw std::invalid_argument("composition domains do not line up");
    const auto& k = c1.source.ring;
    MorphismCandidate<R> out{c1.source,
                             c2.target,
                             k.aut_compose(c2.g, c1.g),
                             k.aut_compose(c2.h, c1.h),
                             k.mul(k.apply(c2.h, c1.b), c2.b),
                             false};
    verify_morphism(out);
    return out;
}

template <CoefficientRing R>
MorphismCandidate<R> inverse_candidate(const MorphismCandidate<R>& c) {
    const auto& k = c.source.ring;
    const auto hinv = k.aut_inverse(c.h);
    MorphismCandidate<R> out{c.target, c.source, k.aut_inverse(c.g), hinv,
                             k.apply(hinv, k.inv(c.b)), false};
    verify_morphism(out);
    return out;
}

// ---- construction route ----

// Target parameters must satisfy t_i = g s_i h^-1 (i = 1,2), t_i = h s_i g^-1
// (i = 3,4) and target c' = g(c) t1(b) t2(b) (towers, b any unit) or
// g(c) b^2 (quaternions, b a central unit). The map is (g(u), h(v) b^-1);
// the returned candidate stores b^-1 per the internal convention. The
// verification pass is independent of those conditions, so a condition set
// that passes while the map fails verification throws: that would mean the
// construction statement itself broke.
template <CoefficientRing R>
MorphismCandidate<R> build_isomorphism(const DoublingParams<R>& A, const DoublingParams<R>& B,
                                       typename R::Aut g, typename R::Aut h,
                                       typename R::Elem b) {
    const auto& k = A.ring;
    if (!k.same_ring(B.ring))
        throw std::invalid_argument("source and target live over different coefficient rings");
    if (!k.valid_b(b))
        throw std::invalid_argument(
            "scaling factor b must be a unit (central in the quaternion case)");
    const auto hinv = k.aut_inverse(h);
    const auto ginv = k.aut_inverse(g);
    for (int i = 0; i < 2; ++i)
        if (!k.aut_eq(B.sigma[i], k.aut_compose(g, k.aut_compose(A.sigma[i], hinv))))
            throw std::invalid_argument("target twist " + std::to_string(i + 1) +
                                        " is not g o sigma o h^-1");
    for (int i = 2; i < 4; ++i)
        if (!k.aut_eq(B.sigma[i], k.aut_compose(h, k.aut_compose(A.sigma[i], ginv))))
            throw std::invalid_argument("target twist " + std::to_string(i + 1) +
                                        " is not h o sigma o g^-1");
    typename R::Elem expect_c = k.apply(g, A.c);
    if constexpr (R::finite) {
        expect_c = k.mul(expect_c, k.mul(k.apply(B.sigma[0], b), k.apply(B.sigma[1], b)));
    } else {
        expect_c = k.mul(expect_c, k.mul(b, b));
    }
    if (!k.eq(B.c, expect_c))
        throw std::invalid_argument("target constant does not match g(c) scaled by b");

    MorphismCandidate<R> out{A, B, g, h, k.inv(b), false};
    if (!verify_morphism(out))
        throw std::logic_error(
            "construction conditions held but the map failed the basis-pair check");
    return out;
}

template <CoefficientRing R>
struct NormalizedForm {
    DoublingParams<R> target;  // same algebra with the fourth twist removed
    MorphismCandidate<R> iso;
};

// (u,v) -> (u, s4^-1(v)) turns (s1, s2, s3, s4) into (s1 s4, s2 s4, s4^-1 s3, id)
template <CoefficientRing R>
NormalizedForm<R> normalize_sigma4(const DoublingParams<R>& A) {
    const auto& k = A.ring;
    const auto s4inv = k.aut_inverse(A.sigma[3]);
    auto B = make_algebra(k, A.c, k.aut_compose(A.sigma[0], A.sigma[3]),
                          k.aut_compose(A.sigma[1], A.sigma[3]),
                          k.aut_compose(s4inv, A.sigma[2]), k.aut_identity());
    auto iso = build_isomorphism(A, B, k.aut_identity(), s4inv, k.one());
    return {B, iso};
}

// ---- searches over finite towers ----

// Every isomorphism A -> B restricting to an automorphism of K has the shape
// (g(x), h(y) b) with h forced to t3 o g o s3^-1; enumerating (g, b) and
// checking the four intertwining conditions plus g(c) = c' t1(b) t2(b) is
// therefore a complete search for that class of maps.
inline std::vector<MorphismCandidate<GfRing>> restricted_iso_search(
    const DoublingParams<GfRing>& A, const DoublingParams<GfRing>& B) {
    const auto& k = A.ring;
    if (!k.same_ring(B.ring))
        throw std::invalid_argument("restricted search needs a common tower");
    std::vector<MorphismCandidate<GfRing>> out;
    const std::uint32_t t = k.tw->ext_degree();
    for (std::uint32_t i = 0; i < t; ++i) {
        const AutMap g = k.tw->aut(i);
        const AutMap h =
            k.aut_compose(B.sigma[2], k.aut_compose(g, k.aut_inverse(A.sigma[2])));
        bool ok = true;
        for (int j = 0; j < 2 && ok; ++j)
            ok = k.aut_eq(k.aut_compose(B.sigma[j], h), k.aut_compose(g, A.sigma[j]));
        for (int j = 2; j < 4 && ok; ++j)
            ok = k.aut_eq(k.aut_compose(B.sigma[j], g), k.aut_compose(h, A.sigma[j]));
        if (!ok) continue;
        const auto gc = k.apply(g, A.c);
        for (std::uint64_t n = 1; n < k.size(); ++n) {
            const FqElem b = k.elem_at(n);
            const auto rhs =
                k.mul(B.c, k.mul(k.apply(B.sigma[0], b), k.apply(B.sigma[1], b)));
            if (!k.eq(gc, rhs)) continue;
            MorphismCandidate<GfRing> cand{A, B, g, h, b, false};
            if (!verify_morphism(cand))
                throw std::logic_error(
                    "restricted isomorphism conditions held but the map failed verification");
            out.push_back(std::move(cand));
        }
    }
    return out;
}

enum class Obstruction { obstructed, possible };

inline const char* to_string(Obstruction o) {
    return o == Obstruction::obstructed ? "obstructed" : "possible";
}

// Isomorphisms restricting to K force N(c c'^-1) to be a square of a norm,
// and norms fill F^x, so the test is a squareness check down in F.
inline Obstruction norm_obstruction(const DoublingParams<GfRing>& A,
                                    const DoublingParams<GfRing>& B) {
    const auto& k = A.ring;
    if (!k.same_ring(B.ring))
        throw std::invalid_argument("norm obstruction needs a common tower");
    const auto ratio = k.mul(A.c, k.inv(B.c));
    return k.tw->is_square_in_F(k.tw->norm(ratio)) ? Obstruction::possible
                                                   : Obstruction::obstructed;
}

// All automorphisms of the stated shape: g = h a power of the tower
// generator sigma, b a unit with g(c) = c s1(b) s2(b). When some nucleus of
// A equals K these are all the automorphisms there are; the brute force
// below adjudicates.
inline std::vector<MorphismCandidate<GfRing>> aut_theorem_enumerate(
    const DoublingParams<GfRing>& A) {
    const auto& k = A.ring;
    std::vector<MorphismCandidate<GfRing>> out;
    const std::uint32_t t = k.tw->ext_degree();
    for (std::uint32_t i = 0; i < t; ++i) {
        const AutMap g = k.tw->aut(i);
        const auto gc = k.apply(g, A.c);
        for (std::uint64_t n = 1; n < k.size(); ++n) {
            const FqElem b = k.elem_at(n);
            const auto rhs =
                k.mul(A.c, k.mul(k.apply(A.sigma[0], b), k.apply(A.sigma[1], b)));
            if (!k.eq(gc, rhs)) continue;
            MorphismCandidate<GfRing> cand{A, A, g, g, b, false};
            if (!verify_morphism(cand))
                throw std::logic_error(
                    "automorphism conditions held but the map failed verification");
            out.push_back(std::move(cand));
        }
    }
    return out;
}

// ---- generator-image brute force ----

template <CoefficientRing R>
struct LinearMapTable {
    Matrix<typename R::ScalarOps> rows;  // row j = coordinates of the image of basis j
    bool invertible = false;
};

template <CoefficientRing R>
DoubledElem<R> apply_table(const LinearMapTable<R>& tab, const DoublingParams<R>& target,
                           const std::vector<typename R::Scalar>& coords_in,
                           const typename R::ScalarOps& ops) {
    const std::size_t n = tab.rows.size();
    Row<typename R::ScalarOps> acc(n, ops.zero());
    for (std::size_t j = 0; j < n; ++j) {
        if (ops.is_zero(coords_in[j])) continue;
        for (std::size_t x = 0; x < n; ++x)
            acc[x] = ops.add(acc[x], ops.mul(coords_in[j], tab.rows[j][x]));
    }
    return doubled_from_coords(target, acc);
}

template <CoefficientRing R>
bool table_eq(const LinearMapTable<R>& a, const LinearMapTable<R>& b,
              const typename R::ScalarOps& ops) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t j = 0; j < a.rows.size(); ++j)
        if (!row_eq(a.rows[j], b.rows[j], ops)) return false;
    return true;
}

template <CoefficientRing R>
LinearMapTable<R> to_table(const MorphismCandidate<R>& m) {
    LinearMapTable<R> tab;
    const std::size_t n = 2 * m.source.ring.dim();
    const auto ops = m.source.ring.scalar_ops();
    for (std::size_t j = 0; j < n; ++j) {
        Row<typename R::ScalarOps> unit(n, ops.zero());
        unit[j] = ops.one();
        tab.rows.push_back(
            doubled_coords(m.target, apply_morphism(m, doubled_from_coords(m.source, unit))));
    }
    auto copy = tab.rows;
    tab.invertible = rank(std::move(copy), ops) == n;
    return tab;
}

namespace detail {

// packed-index flattening for deterministic ordering of tower tables
inline std::vector<std::uint64_t> table_key(const LinearMapTable<GfRing>& t) {
    std::vector<std::uint64_t> key;
    for (const auto& row : t.rows)
        for (const auto& v : row) key.push_back(v.idx);
    return key;
}

}  // namespace detail

inline void sort_tables(std::vector<LinearMapTable<GfRing>>& tabs) {
    std::sort(tabs.begin(), tabs.end(),
              [](const LinearMapTable<GfRing>& a, const LinearMapTable<GfRing>& b) {
                  return detail::table_key(a) < detail::table_key(b);
              });
}

inline bool table_sets_equal(std::vector<LinearMapTable<GfRing>> a,
                             std::vector<LinearMapTable<GfRing>> b) {
    if (a.size() != b.size()) return false;
    sort_tables(a);
    sort_tables(b);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (detail::table_key(a[i]) != detail::table_key(b[i])) return false;
    return true;
}

inline constexpr std::uint64_t kDefaultMorphismGuard = 10000;  // doubled elements

// Independent check that a raw coordinate table is an algebra isomorphism:
// invertible over F, multiplicative on all basis pairs, unit to unit.
template <CoefficientRing R>
bool table_is_isomorphism(const DoublingParams<R>& A, const DoublingParams<R>& B,
                          const LinearMapTable<R>& tab) {
    const auto ops = A.ring.scalar_ops();
    const std::size_t n = 2 * A.ring.dim();
    if (tab.rows.size() != n) return false;
    auto copy = tab.rows;
    if (rank(std::move(copy), ops) != n) return false;
    std::vector<DoubledElem<R>> basis, image;
    for (std::size_t j = 0; j < n; ++j) {
        Row<typename R::ScalarOps> unit(n, ops.zero());
        unit[j] = ops.one();
        basis.push_back(doubled_from_coords(A, unit));
        image.push_back(doubled_from_coords(B, tab.rows[j]));
    }
    if (!eq(apply_table(tab, B, doubled_coords(A, unit_elem(A)), ops), unit_elem(B)))
        return false;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            const auto lhs =
                apply_table(tab, B, doubled_coords(A, mul(A, basis[p], basis[q])), ops);
            if (!eq(lhs, mul(B, image[p], image[q]))) return false;
        }
    return true;
}

// Complete isomorphism scan A -> B. Any isomorphism G is pinned down by
// G(omega, 0) and G(0, 1) for a primitive omega: first-slot products are
// plain field products, so (omega^m, 0) is a left-nested power of
// (omega, 0), and (0, e) = (s3^-1(e), 0) (0, 1). We enumerate all q^2 * q^2
// image pairs, extend each by those fixed bracketings plus F-linearity, and
// keep the extensions that are invertible and multiplicative on all basis
// pairs. Finds every isomorphism, whether or not it restricts to K.
inline std::vector<LinearMapTable<GfRing>> iso_bruteforce(
    const DoublingParams<GfRing>& A, const DoublingParams<GfRing>& B,
    std::uint64_t guard = kDefaultMorphismGuard, std::size_t max_found = SIZE_MAX) {
    const auto& k = A.ring;
    if (!k.same_ring(B.ring))
        throw std::invalid_argument("brute-force scan needs a common tower");
    if (doubled_count(A) > guard)
        throw std::invalid_argument("brute-force morphism scan exceeds the configured guard");
    const FieldTower* tw = k.tw;
    const auto ops = k.scalar_ops();
    const std::size_t d = k.dim();
    const std::size_t n = 2 * d;

    // expansion of each coordinate-basis element of K in powers of omega
    const FqElem omega = tw->generator();
    Matrix<GfScalarOps> pow_matrix(d, Row<GfScalarOps>(d, ops.zero()));
    {
        FqElem wp = tw->one();
        for (std::size_t m = 0; m < d; ++m) {
            const auto co = k.coords(wp);
            for (std::size_t x = 0; x < d; ++x) pow_matrix[x][m] = co[x];
            wp = wp * omega;
        }
    }
    // invert over F: coordinate basis element j = sum_m mu[m][j] omega^m
    Matrix<GfScalarOps> aug(d, Row<GfScalarOps>(2 * d, ops.zero()));
    for (std::size_t x = 0; x < d; ++x) {
        for (std::size_t m = 0; m < d; ++m) aug[x][m] = pow_matrix[x][m];
        aug[x][d + x] = ops.one();
    }
    if (rref_in_place(aug, ops).size() != d)
        throw std::logic_error("generator powers failed to span the tower");
    Matrix<GfScalarOps> mu(d, Row<GfScalarOps>(d, ops.zero()));
    for (std::size_t m = 0; m < d; ++m)
        for (std::size_t j = 0; j < d; ++j) mu[m][j] = aug[m][d + j];

    std::vector<FqElem> coord_elems;  // the d coordinate-basis elements of K
    for (std::size_t j = 0; j < d; ++j) {
        Row<GfScalarOps> unit(d, ops.zero());
        unit[j] = ops.one();
        coord_elems.push_back(k.from_coords(unit));
    }
    const auto s3inv = k.aut_inverse(A.sigma[2]);

    std::vector<DoubledElem<GfRing>> basisA;
    for (std::size_t j = 0; j < n; ++j) {
        Row<GfScalarOps> unit(n, ops.zero());
        unit[j] = ops.one();
        basisA.push_back(doubled_from_coords(A, unit));
    }
    // pair products ahead of time; they do not depend on the candidate
    std::vector<std::vector<Row<GfScalarOps>>> prod_coords(n);
    for (std::size_t p = 0; p < n; ++p) {
        prod_coords[p].reserve(n);
        for (std::size_t q = 0; q < n; ++q)
            prod_coords[p].push_back(doubled_coords(A, mul(A, basisA[p], basisA[q])));
    }

    std::vector<LinearMapTable<GfRing>> found;
    const std::uint64_t total = doubled_count(B);
    for (std::uint64_t na = 0; na < total; ++na) {
        const auto alpha = doubled_at(B, na);
        // left-nested powers of alpha
        std::vector<DoubledElem<GfRing>> apow{unit_elem(B)};
        for (std::size_t m = 1; m < d; ++m) apow.push_back(mul(B, apow.back(), alpha));
        // images of the first-slot coordinate basis
        std::vector<DoubledElem<GfRing>> img1;
        for (std::size_t j = 0; j < d; ++j) {
            auto acc = zero_elem(B);
            for (std::size_t m = 0; m < d; ++m) {
                if (ops.is_zero(mu[m][j])) continue;
                acc = add(B, acc, scale(B, mu[m][j], apow[m]));
            }
            img1.push_back(std::move(acc));
        }
        auto first_slot_image = [&](FqElem x) {
            const auto co = k.coords(x);
            auto acc = zero_elem(B);
            for (std::size_t j = 0; j < d; ++j) {
                if (ops.is_zero(co[j])) continue;
                acc = add(B, acc, scale(B, co[j], img1[j]));
            }
            return acc;
        };
        for (std::uint64_t nb = 0; nb < total; ++nb) {
            const auto beta = doubled_at(B, nb);
            LinearMapTable<GfRing> tab;
            tab.rows.reserve(n);
            for (std::size_t j = 0; j < d; ++j)
                tab.rows.push_back(doubled_coords(B, img1[j]));
            for (std::size_t j = 0; j < d; ++j) {
                const auto pre = first_slot_image(k.apply(s3inv, coord_elems[j]));
                tab.rows.push_back(doubled_coords(B, mul(B, pre, beta)));
            }
            auto copy = tab.rows;
            if (rank(std::move(copy), ops) != n) continue;
            bool multiplicative = true;
            for (std::size_t p = 0; p < n && multiplicative; ++p) {
                const auto gp = doubled_from_coords(B, tab.rows[p]);
                for (std::size_t q = 0; q < n; ++q) {
                    const auto lhs = apply_table(tab, B, prod_coords[p][q], ops);
                    const auto rhs = mul(B, gp, doubled_from_coords(B, tab.rows[q]));
                    if (!eq(lhs, rhs)) {
                        multiplicative = false;
                        break;
                    }
                }
            }
            if (!multiplicative) continue;
            tab.invertible = true;
            found.push_back(std::move(tab));
            if (found.size() >= max_found) return found;
        }
    }
    return found;
}

inline std::vector<LinearMapTable<GfRing>> aut_bruteforce(
    const DoublingParams<GfRing>& A, std::uint64_t guard = kDefaultMorphismGuard) {
    return iso_bruteforce(A, A, guard);
}

}  // namespace dickson
