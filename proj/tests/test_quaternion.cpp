#include <catch2/catch_amalgamated.hpp>

#include "dickson/quaternion.hpp"

using namespace dickson;

namespace {
QuatPtr hamilton() { return QuatAlgebra::make(-1, -1); }

Quaternion qu(const QuatPtr& D, int t, int x, int y, int z) {
    return D->element(t, x, y, z);
}
}  // namespace

TEST_CASE("Hamilton basis products match the classical table", "[quat]") {
    auto D = hamilton();
    const auto one = D->one(), i = D->i(), j = D->j(), k = D->k();
    CHECK(i * i == -one);
    CHECK(j * j == -one);
    CHECK(k * k == -one);
    CHECK(i * j == k);
    CHECK(j * i == -k);
    CHECK(j * k == i);
    CHECK(k * j == -i);
    CHECK(k * i == j);
    CHECK(i * k == -j);
    for (const auto& b : D->basis()) {
        CHECK(one * b == b);
        CHECK(b * one == b);
    }
}

TEST_CASE("generic witness squares multiply by the defining relations", "[quat]") {
    for (auto [a, b] : {std::pair{-2, -5}, {2, 3}, {-1, 7}}) {
        auto D = QuatAlgebra::make(a, b);
        const auto one = D->one(), i = D->i(), j = D->j(), k = D->k();
        CHECK(i * i == D->scalar(a));
        CHECK(j * j == D->scalar(b));
        CHECK(i * j == k);
        CHECK(j * i == -k);
        CHECK(k * k == D->scalar(Rational(-a) * b));
        // associativity on all basis triples
        for (const auto& x : D->basis())
            for (const auto& y : D->basis())
                for (const auto& z : D->basis()) CHECK((x * y) * z == x * (y * z));
    }
}

TEST_CASE("reduced norm is multiplicative and equals u * conj(u)", "[quat]") {
    auto D = QuatAlgebra::make(-2, -5);
    const Quaternion samples[] = {qu(D, 1, 2, 3, 4), qu(D, 0, -1, 1, 0), qu(D, 5, 0, 0, -2),
                                  D->element(Rational(1) / 2, Rational(-2) / 3, 1, 0)};
    for (const auto& u : samples) {
        CHECK(D->scalar(D->norm(u)) == u * conj(u));
        for (const auto& v : samples) {
            CHECK(D->norm(u * v) == D->norm(u) * D->norm(v));
            CHECK(conj(u * v) == conj(v) * conj(u));
        }
    }
}

TEST_CASE("inverses work exactly where the norm is nonzero", "[quat]") {
    auto D = hamilton();
    const auto u = qu(D, 1, 2, 3, 4);
    CHECK(u * inv(u) == D->one());
    CHECK(inv(u) * u == D->one());

    auto split = QuatAlgebra::make(1, 1);
    const auto zd = split->one() + split->i();  // norm 1 - 1 = 0
    CHECK(split->norm(zd) == 0);
    CHECK_THROWS_WITH(inv(zd), "cannot invert: reduced norm is zero (zero divisor)");
    // and it really is a zero divisor
    CHECK((zd * (split->one() - split->i())).is_zero());
}

TEST_CASE("inner automorphisms conjugate correctly", "[quat]") {
    auto D = hamilton();
    const auto gi = make_inner(D->i()), gj = make_inner(D->j());
    CHECK(apply(gi, D->j()) == -D->j());          // i j i^-1 = -j
    CHECK(apply(gi, D->k()) == -D->k());
    CHECK(apply(gi, D->i()) == D->i());
    CHECK(apply(gj, D->one() + D->i()) == D->one() - D->i());

    // composition applies the right factor first: (g o h)(x) = g(h(x))
    const auto gh = compose(gi, gj);
    for (const auto& x : D->basis()) CHECK(apply(gh, x) == apply(gi, apply(gj, x)));
    const auto gi_inv = inverse(gi);
    for (const auto& x : D->basis()) CHECK(apply(compose(gi, gi_inv), x) == x);

    // witnesses matter only up to central scaling
    CHECK(same_inner(gi, make_inner(D->scale(2, D->i()))));
    CHECK_FALSE(same_inner(gi, gj));
    CHECK(make_inner(D->scalar(3)).is_identity());
    auto split = QuatAlgebra::make(1, 1);
    CHECK_THROWS_AS(make_inner(split->one() + split->i()), std::invalid_argument);
}

TEST_CASE("canonical witness scales to coprime integers, leading sign positive", "[quat]") {
    auto D = hamilton();
    const auto g = make_inner(D->element(0, Rational(1) / 2, Rational(1) / 3, 0));
    const auto w = canonical_witness(g);
    CHECK(w == qu(D, 0, 3, 2, 0));
    CHECK(canonical_witness(make_inner(-D->i())) == D->i());
    CHECK(canonical_witness(make_inner(D->scale(Rational(7) / 5, D->k()))) == D->k());
}

TEST_CASE("rational square detection in lowest terms", "[quat]") {
    CHECK(rational_is_square(Rational(4)));
    CHECK(rational_is_square(Rational(9) / 4));
    CHECK(rational_is_square(Rational(0)));
    CHECK(rational_is_square(Rational(144) / 169));
    CHECK(rational_is_square(Rational(27) / 12));  // reduces to 9/4
    CHECK_FALSE(rational_is_square(Rational(2)));
    CHECK_FALSE(rational_is_square(Rational(-4)));
    CHECK_FALSE(rational_is_square(Rational(3) / 4));
    CHECK_FALSE(rational_is_square(Rational(50)));
    CHECK_FALSE(rational_is_square(Rational(1) / 2));
}

TEST_CASE("rational literals", "[quat]") {
    CHECK(format_rational(Rational(-3) / 4) == "-3/4");
    CHECK(format_rational(Rational(5)) == "5");
    CHECK(parse_rational("-3/4") == Rational(-3) / 4);
    CHECK(parse_rational("10/5") == Rational(2));
    CHECK(parse_rational(" 7 ") == Rational(7));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
}

TEST_CASE("quaternion literals round-trip", "[quat]") {
    auto D = hamilton();
    const auto u = D->element(Rational(1) / 2, -2, 0, Rational(7) / 3);
    CHECK(D->to_string(u) == "1/2+-2i+0j+7/3k");
    CHECK(D->parse(D->to_string(u)) == u);
    CHECK(D->parse("1+2i+3j+4k") == qu(D, 1, 2, 3, 4));
    CHECK(D->parse(" 0 + 0i + 0j + 0k ").is_zero());
    CHECK_THROWS_AS(D->parse("1+2i+3j"), std::invalid_argument);
    CHECK_THROWS_AS(D->parse("1+2j+3i+4k"), std::invalid_argument);
    CHECK_THROWS_AS(D->parse("1+2i+3j+4k+5"), std::invalid_argument);
    CHECK_THROWS_AS(D->parse(""), std::invalid_argument);
}

TEST_CASE("norm group rule ships only for definite algebras", "[quat]") {
    auto def = QuatAlgebra::make(-1, -1);
    REQUIRE(def->norm_group_rule() != nullptr);
    CHECK(def->norm_group_rule()->name() == "definite");
    CHECK(def->norm_group_rule()->contains_square(Rational(4)));
    CHECK(def->norm_group_rule()->contains_square(Rational(9) / 16));
    CHECK_FALSE(def->norm_group_rule()->contains_square(Rational(2)));
    CHECK_FALSE(def->norm_group_rule()->contains_square(Rational(-4)));
    CHECK_FALSE(def->norm_group_rule()->contains_square(Rational(0)));

    CHECK(QuatAlgebra::make(1, -1)->norm_group_rule() == nullptr);
    CHECK(QuatAlgebra::make(-1, 3)->norm_group_rule() == nullptr);
    CHECK_THROWS_AS(QuatAlgebra::make(0, -1), std::invalid_argument);
}

TEST_CASE("mixed-algebra operands are rejected", "[quat]") {
    auto D1 = hamilton();
    auto D2 = hamilton();
    CHECK_THROWS_AS(D1->one() + D2->one(), std::invalid_argument);
    CHECK_THROWS_AS(apply(make_inner(D1->i()), D2->j()), std::invalid_argument);
}
