#pragma once

// Rational quaternion lane: the linear-algebra solvers behind the central
// simple division-algebra statements, the sufficient division criterion, and
// the verified-automorphism entry point with its equal-twist companion check.

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dickson/doubling.hpp"
#include "dickson/linalg.hpp"
#include "dickson/morphisms.hpp"
#include "dickson/structure.hpp"

namespace dickson {

enum class CentralizerKind { nuc_left_condition, commutant, scalar_lemma };

namespace detail {

// rows of the matrix of x -> map(x) on the quaternion basis, stacked into an
// 8-column block occupying [col0, col0+4)
inline void append_quat_condition(const QuatAlgebra& D, Matrix<RatOps>& rows, std::size_t ncols,
                                  std::size_t col0, auto&& map) {
    const RatOps ops{};
    const Quaternion basis[4] = {D.one(), D.i(), D.j(), D.k()};
    Matrix<RatOps> block(4, Row<RatOps>(ncols, ops.zero()));
    for (std::size_t j = 0; j < 4; ++j) {
        const Quaternion img = map(basis[j]);
        for (std::size_t i = 0; i < 4; ++i) block[i][col0 + j] = img.co[i];
    }
    for (auto& row : block) rows.push_back(std::move(row));
}

}  // namespace detail

// Solves the nominated linear condition exactly over the rationals and
// returns a reduced kernel basis. nuc_left_condition is 4-dimensional in x;
// commutant and scalar_lemma have doubled unknowns (a pair, 8 coordinates).
// scalar_lemma needs the automorphism g the scalars are taken against.
inline Subspace<RatOps> centralizer_type_solve(const DoublingParams<QuatRing>& Aq,
                                               CentralizerKind kind,
                                               const InnerAut* g = nullptr) {
    const QuatRing& k = Aq.ring;
    const QuatAlgebra& D = *k.alg;
    const RatOps ops{};
    Matrix<RatOps> rows;
    switch (kind) {
        case CentralizerKind::nuc_left_condition: {
            // c s1(s3(x)) = x c, one 4x4 block
            const auto s13 = k.aut_compose(Aq.sigma[0], Aq.sigma[2]);
            detail::append_quat_condition(D, rows, 4, 0, [&](const Quaternion& x) {
                return k.sub(k.mul(Aq.c, k.apply(s13, x)), k.mul(x, Aq.c));
            });
            return kernel_basis(std::move(rows), 4, ops);
        }
        case CentralizerKind::commutant: {
            // z ranges over the doubled algebra; commutation with each basis
            // element is one block
            for (const auto& y : doubled_basis(Aq))
                detail::append_linear_condition(Aq, rows, [&](const DoubledElem<QuatRing>& z) {
                    return sub(Aq, mul(Aq, z, y), mul(Aq, y, z));
                });
            return kernel_basis(std::move(rows), 8, ops);
        }
        case CentralizerKind::scalar_lemma: {
            if (g == nullptr)
                throw std::invalid_argument("the scalar conditions need an automorphism g");
            // a g(s4^-1(y)) = g(s3^-1(y)) a  and  b s4 g s4^-1(y) = s3 g s3^-1(y) b
            const auto s3inv = k.aut_inverse(Aq.sigma[2]);
            const auto s4inv = k.aut_inverse(Aq.sigma[3]);
            const auto f1 = k.aut_compose(*g, s4inv);
            const auto f2 = k.aut_compose(*g, s3inv);
            const auto m1 = k.aut_compose(Aq.sigma[3], f1);
            const auto m2 = k.aut_compose(Aq.sigma[2], f2);
            const Quaternion probes[4] = {D.one(), D.i(), D.j(), D.k()};
            for (const auto& y : probes) {
                const Quaternion fy1 = k.apply(f1, y), fy2 = k.apply(f2, y);
                detail::append_quat_condition(D, rows, 8, 0, [&](const Quaternion& a) {
                    return k.sub(k.mul(a, fy1), k.mul(fy2, a));
                });
            }
            for (const auto& y : probes) {
                const Quaternion my1 = k.apply(m1, y), my2 = k.apply(m2, y);
                detail::append_quat_condition(D, rows, 8, 4, [&](const Quaternion& b) {
                    return k.sub(k.mul(b, my1), k.mul(my2, b));
                });
            }
            return kernel_basis(std::move(rows), 8, ops);
        }
    }
    throw std::logic_error("unhandled centralizer kind");
}

// Sufficient only: yes when the reduced norm of c misses the squared norm
// group (definite algebras know that group), unknown otherwise. Indefinite
// algebras without a norm rule refuse loudly rather than guessing.
inline TriState division_sufficient(const DoublingParams<QuatRing>& Aq) {
    return division_norm_criterion(Aq);
}

// Constructed automorphism G(u,v) = (g(u), h(v) b) with rational b. Checks
// the intertwining conditions and g(c) = b^2 c by name, then reruns the
// independent 64-pair multiplicativity check. With equal third and fourth
// twists the scalar conditions can only be met centrally; finding a
// noncentral solution there would contradict the classification, so it is a
// logic error, not an input error.
inline MorphismCandidate<QuatRing> verify_csa_automorphism(const DoublingParams<QuatRing>& Aq,
                                                           const InnerAut& g, const InnerAut& h,
                                                           const Rational& b) {
    const QuatRing& k = Aq.ring;
    if (b == 0) throw std::invalid_argument("scaling factor b must be a nonzero rational");
    const InnerAut fs[4] = {Aq.sigma[0], Aq.sigma[1], k.aut_inverse(Aq.sigma[2]),
                            k.aut_inverse(Aq.sigma[3])};
    const char* names[4] = {"the first twist", "the second twist",
                            "the inverse of the third twist",
                            "the inverse of the fourth twist"};
    for (int i = 0; i < 4; ++i)
        if (!k.aut_eq(k.aut_compose(g, fs[i]), k.aut_compose(fs[i], h)))
            throw std::invalid_argument(std::string("g does not intertwine ") + names[i] +
                                        " with h");
    const Quaternion bq = k.alg->scalar(b);
    if (!k.eq(k.apply(g, Aq.c), k.mul(k.mul(bq, bq), Aq.c)))
        throw std::invalid_argument("g(c) differs from b^2 c");

    MorphismCandidate<QuatRing> cand{Aq, Aq, g, h, bq, false};
    if (!verify_morphism(cand))
        throw std::logic_error(
            "automorphism conditions held but the map failed the basis-pair check");

    if (k.aut_eq(Aq.sigma[2], Aq.sigma[3])) {
        const auto sol = centralizer_type_solve(Aq, CentralizerKind::scalar_lemma, &g);
        const RatOps ops{};
        for (const auto& row : sol.rows)
            for (std::size_t x : {1u, 2u, 3u, 5u, 6u, 7u})
                if (!ops.is_zero(row[x]))
                    throw std::logic_error(
                        "equal third and fourth twists admitted a noncentral scalar");
    }
    return cand;
}

// Necessary condition probe, not a proof: a division algebra has no zero
// divisors, so random nonzero pairs must multiply to nonzero. Returns the
// offending pair when one shows up.
inline std::optional<std::pair<DoubledElem<QuatRing>, DoubledElem<QuatRing>>>
nonzero_product_sample(const DoublingParams<QuatRing>& Aq, int trials, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(-9, 9);
    const QuatRing& k = Aq.ring;
    auto draw = [&]() {
        while (true) {
            std::vector<Rational> co;
            for (int i = 0; i < 8; ++i) co.emplace_back(pick(rng));
            std::vector<Rational> lo(co.begin(), co.begin() + 4), hi(co.begin() + 4, co.end());
            DoubledElem<QuatRing> x{k.from_coords(lo), k.from_coords(hi), &Aq};
            if (!x.is_zero()) return x;
        }
    };
    for (int t = 0; t < trials; ++t) {
        const auto x = draw();
        const auto y = draw();
        if (mul(Aq, x, y).is_zero()) return std::make_pair(x, y);
    }
    return std::nullopt;
}

}  // namespace dickson
