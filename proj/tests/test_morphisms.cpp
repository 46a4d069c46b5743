#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <utility>

#include "dickson/morphisms.hpp"
#include "dickson/structure.hpp"

using namespace dickson;

namespace {

TowerPtr gf9() { return FieldTower::make(3, 1, 2); }

DoublingParams<GfRing> algebra(const TowerPtr& tw, std::uint64_t c_idx, std::uint32_t j1,
                               std::uint32_t j2, std::uint32_t j3, std::uint32_t j4) {
    GfRing ring{tw.get()};
    return make_algebra(ring, tw->from_index(c_idx), tw->aut(j1), tw->aut(j2), tw->aut(j3),
                        tw->aut(j4));
}

using ExpIdx = std::pair<std::uint32_t, std::uint64_t>;

std::set<ExpIdx> signature_set(const std::vector<MorphismCandidate<GfRing>>& cands) {
    std::set<ExpIdx> out;
    for (const auto& c : cands) out.insert({c.g.exp % 2, c.b.idx});
    return out;
}

std::vector<LinearMapTable<GfRing>> tables_of(
    const std::vector<MorphismCandidate<GfRing>>& cands) {
    std::vector<LinearMapTable<GfRing>> out;
    for (const auto& c : cands) out.push_back(to_table(c));
    return out;
}

// push a subspace through a morphism and span the image
RingSubspace<GfRing> image_subspace(const MorphismCandidate<GfRing>& m,
                                    const RingSubspace<GfRing>& sp) {
    Matrix<GfScalarOps> img;
    for (const auto& row : sp.rows)
        img.push_back(doubled_coords(m.target, apply_morphism(m, doubled_from_coords(m.source, row))));
    return row_space(std::move(img), m.source.ring.scalar_ops());
}

}  // namespace

TEST_CASE("building the identity and a scaled self-map", "[morphisms]") {
    auto tw = gf9();
    GfRing k{tw.get()};
    const auto A = algebra(tw, 4, 1, 0, 0, 1);

    auto ident = build_isomorphism(A, A, k.aut_identity(), k.aut_identity(), k.one());
    REQUIRE(ident.verified);
    for (std::uint64_t n : {0ull, 5ull, 37ull, 80ull}) {
        const auto x = doubled_at(A, n);
        REQUIRE(eq(apply_morphism(ident, x), x));
    }

    // b = w has t1(b) t2(b) = w^3 * w = N(w) = 1, so the constant stays put
    const auto B = algebra(tw, 4, 1, 0, 0, 0);
    auto scaled = build_isomorphism(B, B, k.aut_identity(), k.aut_identity(), tw->from_index(3));
    REQUIRE(scaled.verified);
    REQUIRE(k.eq(scaled.b, k.inv(tw->from_index(3))));  // stored in the internal shape
    const auto x = doubled_at(B, 37);  // nonzero second slot, so the scaling shows
    REQUIRE_FALSE(eq(apply_morphism(scaled, x), x));
}

TEST_CASE("construction rejects mismatched data by name", "[morphisms]") {
    auto tw = gf9();
    GfRing k{tw.get()};
    const auto A = algebra(tw, 4, 1, 0, 0, 0);
    const auto wrong_twist = algebra(tw, 4, 0, 0, 0, 0);
    REQUIRE_THROWS_WITH(
        build_isomorphism(A, wrong_twist, k.aut_identity(), k.aut_identity(), k.one()),
        Catch::Matchers::ContainsSubstring("target twist 1"));

    const auto wrong_c = algebra(tw, 3, 1, 0, 0, 0);
    REQUIRE_THROWS_WITH(build_isomorphism(A, wrong_c, k.aut_identity(), k.aut_identity(), k.one()),
                        Catch::Matchers::ContainsSubstring("target constant"));

    REQUIRE_THROWS_WITH(build_isomorphism(A, A, k.aut_identity(), k.aut_identity(), k.zero()),
                        Catch::Matchers::ContainsSubstring("unit"));
}

TEST_CASE("removing the fourth twist", "[morphisms]") {
    auto tw = gf9();

    SECTION("(id,id,id,f) lands on (f,f,f,id)") {
        const auto A = algebra(tw, 4, 0, 0, 0, 1);
        auto nf = normalize_sigma4(A);
        CHECK(nf.target.sigma[0].exp % 2 == 1);
        CHECK(nf.target.sigma[1].exp % 2 == 1);
        CHECK(nf.target.sigma[2].exp % 2 == 1);
        CHECK(nf.target.sigma[3].exp % 2 == 0);
        CHECK(nf.target.c.idx == A.c.idx);
        REQUIRE(nf.iso.verified);
    }

    SECTION("the commutative-type tuple collapses to the untwisted doubling") {
        const auto A = algebra(tw, 4, 1, 1, 1, 1);
        auto nf = normalize_sigma4(A);
        for (int i = 0; i < 4; ++i) CHECK(nf.target.sigma[i].exp % 2 == 0);
        REQUIRE(nf.iso.verified);
    }

    SECTION("already normalized tuples come back unchanged") {
        const auto A = algebra(tw, 3, 1, 1, 0, 0);
        auto nf = normalize_sigma4(A);
        REQUIRE(same_algebra(nf.target, A));
        REQUIRE(eq(apply_morphism(nf.iso, doubled_at(A, 11)), doubled_at(A, 11)));
    }

    SECTION("the brute force rediscovers the normalization map") {
        const auto A = algebra(tw, 4, 0, 0, 0, 1);
        auto nf = normalize_sigma4(A);
        auto scans = iso_bruteforce(A, nf.target);
        REQUIRE_FALSE(scans.empty());
        const auto tab = to_table(nf.iso);
        bool present = false;
        const auto ops = A.ring.scalar_ops();
        for (const auto& s : scans) present = present || table_eq(s, tab, ops);
        REQUIRE(present);
    }
}

TEST_CASE("automorphisms of a twisted anchor algebra", "[morphisms]") {
    auto tw = gf9();
    const auto A = algebra(tw, 4, 1, 0, 0, 0);  // c = 1+w, twists (f, id, id, id)

    auto cands = aut_theorem_enumerate(A);
    REQUIRE(cands.size() == 4);
    for (const auto& c : cands) {
        REQUIRE(c.verified);
        CHECK(c.g.exp % 2 == 0);  // the frobenius branch needs N(b) outside F
        CHECK(c.h.exp % 2 == 0);
    }
    // solutions of N(b) = 1: the four powers of w
    const std::set<ExpIdx> expected{{0, 1}, {0, 2}, {0, 3}, {0, 6}};
    REQUIRE(signature_set(cands) == expected);

    SECTION("group closure, inverses, and the order of the generator") {
        auto find = [&](const MorphismCandidate<GfRing>& m) {
            for (const auto& c : cands)
                if (candidate_eq(c, m)) return true;
            return false;
        };
        for (const auto& a : cands) {
            REQUIRE(find(inverse_candidate(a)));
            for (const auto& b : cands) {
                auto ab = compose_candidates(a, b);
                REQUIRE(ab.verified);
                REQUIRE(find(ab));
            }
        }
        // b = w generates: the scaling automorphism has order four
        const MorphismCandidate<GfRing>* gen = nullptr;
        for (const auto& c : cands)
            if (c.b.idx == 3) gen = &c;
        REQUIRE(gen != nullptr);
        auto cur = *gen;
        int order = 1;
        while (cur.b.idx != 1 || cur.g.exp % 2 != 0) {
            cur = compose_candidates(*gen, cur);
            ++order;
            REQUIRE(order <= 8);
        }
        REQUIRE(order == 4);
    }

    SECTION("the generator-image scan finds exactly the same maps") {
        auto scans = aut_bruteforce(A);
        REQUIRE(scans.size() == 4);
        REQUIRE(table_sets_equal(scans, tables_of(cands)));
    }
}

TEST_CASE("untwisted doubling by a nonsquare is a field and its maps are Galois",
          "[morphisms]") {
    auto tw = gf9();
    const auto A = algebra(tw, 4, 0, 0, 0, 0);  // the 81-element field in disguise

    auto cands = aut_theorem_enumerate(A);
    // b^2 = 1 on the identity branch; b^2 = c^2 on the frobenius branch
    const std::set<ExpIdx> expected{{0, 1}, {0, 2}, {1, 4}, {1, 8}};
    REQUIRE(signature_set(cands) == expected);

    auto scans = aut_bruteforce(A);
    REQUIRE(scans.size() == 4);  // a degree-four field extension has four maps over GF(3)
    REQUIRE(table_sets_equal(scans, tables_of(cands)));
}

TEST_CASE("restricted search against itself matches the automorphism enumeration",
          "[morphisms]") {
    auto tw = gf9();
    for (auto [c_idx, bits] : {std::pair<std::uint64_t, int>{4, 1}, {4, 0}, {3, 5}, {7, 9}}) {
        const auto A =
            algebra(tw, c_idx, bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1);
        auto self = restricted_iso_search(A, A);
        auto auts = aut_theorem_enumerate(A);
        REQUIRE(signature_set(self) == signature_set(auts));
    }
}

TEST_CASE("norm obstruction and the restricted search agree", "[morphisms]") {
    auto tw = gf9();

    SECTION("different norm classes block every restricted map") {
        const auto A = algebra(tw, 4, 1, 0, 0, 0);  // N(c) = 2
        const auto B = algebra(tw, 3, 1, 0, 0, 0);  // N(c') = 1
        REQUIRE(norm_obstruction(A, B) == Obstruction::obstructed);
        REQUIRE(restricted_iso_search(A, B).empty());
    }

    SECTION("frobenius carries c to c^3 with four scalings") {
        const auto A = algebra(tw, 4, 1, 0, 0, 0);
        const auto B = algebra(tw, 7, 1, 0, 0, 0);  // (1+w)^3 = 1+2w
        REQUIRE(norm_obstruction(A, B) == Obstruction::possible);
        auto found = restricted_iso_search(A, B);
        REQUIRE(found.size() == 4);
        for (const auto& m : found) {
            REQUIRE(m.verified);
            CHECK(m.g.exp % 2 == 1);
        }
    }

    SECTION("obstructed pairs have empty searches across a sweep") {
        for (std::uint64_t c = 1; c < 9; ++c) {
            for (std::uint64_t cp = 1; cp < 9; ++cp) {
                const auto A = algebra(tw, c, 1, 0, 1, 0);
                const auto B = algebra(tw, cp, 1, 0, 1, 0);
                if (norm_obstruction(A, B) == Obstruction::obstructed)
                    REQUIRE(restricted_iso_search(A, B).empty());
            }
        }
    }
}

TEST_CASE("a shared identity twist forces the two components to match", "[morphisms]") {
    auto tw = gf9();
    // sweep twist pairs with sigma_1 = t_1 = id and count candidates with g != h
    for (int sa = 0; sa < 8; ++sa) {
        for (int sb = 0; sb < 8; ++sb) {
            const auto A = algebra(tw, 4, 0, sa & 1, (sa >> 1) & 1, (sa >> 2) & 1);
            const auto B = algebra(tw, 4, 0, sb & 1, (sb >> 1) & 1, (sb >> 2) & 1);
            for (const auto& m : restricted_iso_search(A, B))
                REQUIRE(m.g.exp % 2 == m.h.exp % 2);
        }
    }
}

TEST_CASE("verified isomorphisms transport nuclei and division", "[morphisms]") {
    auto tw = gf9();
    const auto ops = GfRing{tw.get()}.scalar_ops();

    SECTION("nuclei map onto nuclei under the normalization map") {
        const auto A = algebra(tw, 4, 1, 0, 0, 1);
        auto nf = normalize_sigma4(A);
        for (auto side : {NucleusSide::left, NucleusSide::middle, NucleusSide::right}) {
            const auto src = nucleus(A, side).oracle;
            const auto dst = nucleus(nf.target, side).oracle;
            REQUIRE(subspace_eq(image_subspace(nf.iso, src), dst, ops));
        }
    }

    SECTION("no map from a division algebra onto one with zero divisors") {
        const auto A = algebra(tw, 4, 1, 0, 0, 0);
        const auto B = algebra(tw, 3, 1, 0, 0, 0);
        REQUIRE(division_bruteforce(A).division);
        REQUIRE_FALSE(division_bruteforce(B).division);
        REQUIRE(iso_bruteforce(A, B).empty());
    }
}

TEST_CASE("scan guard rejects oversized towers", "[morphisms]") {
    auto tw = gf9();
    const auto A = algebra(tw, 4, 0, 0, 0, 0);
    REQUIRE_THROWS_AS(iso_bruteforce(A, A, 80), std::invalid_argument);
}
