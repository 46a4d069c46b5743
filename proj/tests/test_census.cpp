#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "dickson/census.hpp"

using namespace dickson;

namespace {

std::size_t entry_with_sigma(const SweepResult& sw, std::uint64_t c_idx,
                             std::array<std::uint32_t, 4> sig) {
    const std::uint32_t t = sw.tower->ext_degree();
    for (std::size_t i = 0; i < sw.entries.size(); ++i) {
        const auto& p = sw.entries[i].params;
        if (p.c.idx != c_idx) continue;
        bool hit = true;
        for (int k = 0; k < 4; ++k) hit = hit && p.sigma[k].exp % t == sig[k] % t;
        if (hit) return i;
    }
    throw std::logic_error("tuple not swept");
}

const CensusClass& class_of(const CensusReport& rep, std::size_t entry) {
    for (const auto& cls : rep.classes)
        for (auto m : cls.members)
            if (m == entry) return cls;
    throw std::logic_error("entry not classified");
}

}  // namespace

TEST_CASE("prime field sweep has a trivial twist range", "[census]") {
    SweepSpec spec;
    spec.r = 1;
    auto sw = sweep(spec);
    REQUIRE(sw.entries.size() == 2);
    REQUIRE(sw.entries[0].params.c.idx == 1);
    REQUIRE(sw.entries[0].report.division.verdict == TriState::no);
    REQUIRE(sw.entries[1].params.c.idx == 2);
    REQUIRE(sw.entries[1].report.division.verdict == TriState::yes);
}

TEST_CASE("an explicit empty constant list sweeps nothing", "[census]") {
    SweepSpec spec;
    spec.c_indices = std::vector<std::uint64_t>{};
    auto rep = census(spec, CensusMode::restricted);
    REQUIRE(rep.swept.entries.empty());
    REQUIRE(rep.classes.empty());
    REQUIRE(rep.witnesses.empty());
}

TEST_CASE("swept constants are rejected outside the unit range", "[census]") {
    SweepSpec spec;
    spec.c_indices = std::vector<std::uint64_t>{0};
    REQUIRE_THROWS_AS(sweep(spec), std::invalid_argument);
    spec.c_indices = std::vector<std::uint64_t>{9};
    REQUIRE_THROWS_AS(sweep(spec), std::invalid_argument);
}

TEST_CASE("sweeps past the enumeration guard are refused", "[census]") {
    SweepSpec spec;
    spec.p = 5;
    spec.r = 4;  // 5^8 doubled elements per algebra, far past the default guard
    spec.c_indices = std::vector<std::uint64_t>{1};
    spec.sigma_tuples = std::vector<std::array<std::uint32_t, 4>>{{0, 0, 0, 0}};
    REQUIRE_THROWS_WITH(sweep(spec), Catch::Matchers::ContainsSubstring("guard"));
    spec.p = 3;
    spec.r = 2;
    spec.guard = 80;  // just below the 81 doubled elements of the nine-element tower
    REQUIRE_THROWS_AS(sweep(spec), std::invalid_argument);
}

TEST_CASE("the full nine-element sweep and its frozen counts", "[census]") {
    SweepSpec spec;  // GF(9), all constants, all twist tuples
    auto rep = census(spec, CensusMode::restricted, 2);
    const auto& entries = rep.swept.entries;
    REQUIRE(entries.size() == 128);

    std::size_t square = 0, division = 0, assoc = 0;
    for (const auto& e : entries) {
        if (e.report.division.square_test && *e.report.division.square_test) ++square;
        if (e.report.division.verdict == TriState::yes) ++division;
        if (e.report.associative) ++assoc;
    }
    REQUIRE(square == 64);   // half of the 128 tuples have a nonsquare constant
    REQUIRE(division == 68); // the scan adds four tuples the square test misses
    REQUIRE(assoc == 20);

    // regression anchors, first computed by this harness
    REQUIRE(rep.classes.size() == 20);
    REQUIRE(rep.witnesses.size() == entries.size() - rep.classes.size());

    SECTION("classes partition the sweep") {
        std::set<std::size_t> seen;
        for (const auto& cls : rep.classes) {
            REQUIRE(cls.representative == cls.members.front());
            for (auto m : cls.members) REQUIRE(seen.insert(m).second);
        }
        REQUIRE(seen.size() == entries.size());
    }

    SECTION("division status is constant on every class") {
        for (const auto& cls : rep.classes) {
            const auto v = entries[cls.representative].report.division.verdict;
            for (auto m : cls.members) REQUIRE(entries[m].report.division.verdict == v);
        }
    }

    SECTION("every stored witness re-verifies from the serialized file") {
        verify_census_json(census_json(rep));
    }
}

TEST_CASE("division-only filter keeps the sixty-eight and nine classes", "[census]") {
    SweepSpec spec;
    spec.division_only = true;
    auto rep = census(spec, CensusMode::restricted, 2);
    REQUIRE(rep.swept.entries.size() == 68);
    REQUIRE(rep.classes.size() == 9);
    for (const auto& e : rep.swept.entries)
        REQUIRE(e.report.division.verdict == TriState::yes);
}

TEST_CASE("proper filter drops the associative tuples", "[census]") {
    SweepSpec spec;
    spec.proper_only = true;
    auto sw = sweep(spec, 2);
    REQUIRE(sw.entries.size() == 108);
    for (const auto& e : sw.entries) REQUIRE_FALSE(e.report.associative);
}

TEST_CASE("normalization mates always share a class", "[census]") {
    SweepSpec spec;
    spec.c_indices = std::vector<std::uint64_t>{4};
    auto rep = census(spec, CensusMode::restricted);
    REQUIRE(rep.swept.entries.size() == 16);

    for (std::uint32_t bits = 0; bits < 16; ++bits) {
        const std::array<std::uint32_t, 4> sig{bits & 1, (bits >> 1) & 1, (bits >> 2) & 1,
                                               (bits >> 3) & 1};
        const auto src = entry_with_sigma(rep.swept, 4, sig);
        const auto nf = normalize_sigma4(rep.swept.entries[src].params);
        const std::array<std::uint32_t, 4> nsig{
            nf.target.sigma[0].exp % 2, nf.target.sigma[1].exp % 2, nf.target.sigma[2].exp % 2,
            nf.target.sigma[3].exp % 2};
        const auto dst = entry_with_sigma(rep.swept, 4, nsig);
        REQUIRE(&class_of(rep, src) == &class_of(rep, dst));
    }
}

TEST_CASE("full census agrees with the restricted one on a two-constant slice", "[census]") {
    SweepSpec spec;
    spec.c_indices = std::vector<std::uint64_t>{4, 7};
    auto full = census(spec, CensusMode::full, 2);
    auto restricted = census(spec, CensusMode::restricted, 2);
    REQUIRE(full.swept.entries.size() == 32);
    REQUIRE(full.classes.size() == 8);
    REQUIRE(restricted.classes.size() == 8);

    // refinement: every restricted class sits inside one full class
    for (const auto& rcls : restricted.classes) {
        const auto& target = class_of(full, rcls.members.front());
        for (auto m : rcls.members) REQUIRE(&class_of(full, m) == &target);
    }
}

TEST_CASE("census output is byte-identical across job counts", "[census]") {
    SweepSpec spec;
    spec.c_indices = std::vector<std::uint64_t>{4, 7};
    const auto one = census_json(census(spec, CensusMode::full, 1)).dump(2);
    const auto three = census_json(census(spec, CensusMode::full, 3)).dump(2);
    REQUIRE(one == three);
}

TEST_CASE("tampered census files fail re-verification", "[census]") {
    SweepSpec spec;
    spec.c_indices = std::vector<std::uint64_t>{4};
    auto rep = census(spec, CensusMode::restricted);
    Json j = census_json(rep);
    REQUIRE_FALSE(j.at("witnesses").empty());

    SECTION("a corrupted witness map is caught") {
        j["witnesses"][0]["iso"]["b"] = "0";
        REQUIRE_THROWS_WITH(verify_census_json(j),
                            Catch::Matchers::ContainsSubstring("re-verification"));
    }

    SECTION("a member listed in two classes is caught") {
        Json& members = j["classes"][0]["members"];
        members.push_back(j["classes"][1]["members"][0]);
        REQUIRE_THROWS_WITH(verify_census_json(j),
                            Catch::Matchers::ContainsSubstring("partition") ||
                                Catch::Matchers::ContainsSubstring("connected"));
    }

    SECTION("splitting a class away from its witnesses is caught") {
        // move the last member of class 0 into its own fake class
        Json& cls0 = j["classes"][0]["members"];
        REQUIRE(cls0.size() >= 2);
        const auto moved = cls0.back();
        cls0.erase(cls0.size() - 1);
        j["classes"].push_back(Json{{"representative", moved}, {"members", Json::array({moved})}});
        REQUIRE_THROWS_AS(verify_census_json(j), std::invalid_argument);
    }
}

TEST_CASE("sweep specs round-trip through json", "[census]") {
    SweepSpec spec;
    spec.c_indices = std::vector<std::uint64_t>{4, 7};
    spec.sigma_tuples = std::vector<std::array<std::uint32_t, 4>>{{1, 0, 0, 0}, {0, 0, 0, 1}};
    spec.division_only = true;
    const auto back = parse_sweep_spec(sweep_spec_json(spec));
    REQUIRE(back.p == spec.p);
    REQUIRE(back.c_indices == spec.c_indices);
    REQUIRE(back.sigma_tuples == spec.sigma_tuples);
    REQUIRE(back.division_only);
    REQUIRE_FALSE(back.proper_only);

    SweepSpec all;  // "all" markers survive the trip as open ranges
    const auto back2 = parse_sweep_spec(sweep_spec_json(all));
    REQUIRE_FALSE(back2.c_indices.has_value());
    REQUIRE_FALSE(back2.sigma_tuples.has_value());
}
