#pragma once

// Parameter-space sweeps over a tower and the isomorphism-class census.
// Classes come with explicit witnesses, so a census file can be re-checked
// without re-running the searches: every stored witness is an isomorphism
// anyone can verify on eight basis products.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <thread>
#include <vector>

#include "dickson/io.hpp"

namespace dickson {

struct SweepSpec {
    std::uint32_t p = 3, s = 1, r = 2;
    // nullopt sweeps all of K^x / all twist tuples; an explicit empty list
    // sweeps nothing (and an empty sweep is a valid, empty report)
    std::optional<std::vector<std::uint64_t>> c_indices;
    std::optional<std::vector<std::array<std::uint32_t, 4>>> sigma_tuples;
    bool division_only = false;
    bool proper_only = false;  // keep only the nonassociative survivors
    std::uint64_t guard = kDefaultBruteforceGuard;
};

struct SweepEntry {
    DoublingParams<GfRing> params;
    StructureReport<GfRing> report;
};

struct SweepResult {
    TowerPtr tower;  // owns the field; params point into it
    std::vector<SweepEntry> entries;
};

namespace detail {

inline void parallel_for(std::size_t n, unsigned jobs, auto&& body) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t block = (n + jobs - 1) / jobs;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
        const std::size_t lo = w * block, hi = std::min(n, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

// Canonical sweep order: c by generator power, then twist exponents
// lexicographically. Explicit selection lists are normalized into that order,
// so the output never depends on how they were written down.
inline SweepResult sweep(const SweepSpec& spec, unsigned jobs = 1) {
    SweepResult out;
    out.tower = FieldTower::make(spec.p, spec.s, spec.r);
    const FieldTower* tw = out.tower.get();
    const std::uint32_t t = tw->ext_degree();
    if (tw->q() > spec.guard / tw->q())
        throw std::invalid_argument(
            "sweep exceeds the brute-force guard: " + std::to_string(tw->q()) + "^2 doubled "
            "elements per algebra against a guard of " + std::to_string(spec.guard));

    std::vector<std::uint64_t> cs;
    if (spec.c_indices) {
        std::set<std::uint64_t> logs;
        for (auto idx : *spec.c_indices) {
            if (idx == 0 || idx >= tw->q())
                throw std::invalid_argument("swept constant index out of range or zero");
            logs.insert(tw->unit_log(idx));
        }
        for (auto lg : logs) cs.push_back(tw->unit_by_log(lg));
    } else {
        for (std::uint64_t lg = 0; lg + 1 < tw->q(); ++lg) cs.push_back(tw->unit_by_log(lg));
    }

    std::vector<std::array<std::uint32_t, 4>> sigs;
    if (spec.sigma_tuples) {
        std::set<std::array<std::uint32_t, 4>> norm;
        for (auto sg : *spec.sigma_tuples)
            norm.insert({sg[0] % t, sg[1] % t, sg[2] % t, sg[3] % t});
        sigs.assign(norm.begin(), norm.end());
    } else {
        for (std::uint32_t a = 0; a < t; ++a)
            for (std::uint32_t b = 0; b < t; ++b)
                for (std::uint32_t c = 0; c < t; ++c)
                    for (std::uint32_t d = 0; d < t; ++d) sigs.push_back({a, b, c, d});
    }

    const GfRing ring{tw};
    std::vector<DoublingParams<GfRing>> params;
    for (auto cidx : cs)
        for (const auto& sg : sigs)
            params.push_back(make_algebra(ring, tw->from_index(cidx), tw->aut(sg[0]),
                                          tw->aut(sg[1]), tw->aut(sg[2]), tw->aut(sg[3])));

    ProbeOptions opt;
    opt.bruteforce_guard = spec.guard;
    std::vector<StructureReport<GfRing>> reports(params.size());
    detail::parallel_for(params.size(), jobs,
                         [&](std::size_t i) { reports[i] = probe_structure(params[i], opt); });

    for (std::size_t i = 0; i < params.size(); ++i) {
        if (spec.division_only && reports[i].division.verdict != TriState::yes) continue;
        if (spec.proper_only && reports[i].associative) continue;
        out.entries.push_back({params[i], std::move(reports[i])});
    }
    return out;
}

// ---- census ----

enum class CensusMode { restricted, full };

inline const char* to_string(CensusMode m) {
    return m == CensusMode::restricted ? "restricted" : "full";
}

struct MergeWitness {
    std::size_t from = 0, to = 0;  // entry indices
    std::string method;            // "restricted" or "bruteforce"
    std::optional<MorphismCandidate<GfRing>> candidate;  // restricted shape
    std::optional<LinearMapTable<GfRing>> table;         // raw map from the scan
};

struct CensusClass {
    std::size_t representative = 0;    // lex-smallest member
    std::vector<std::size_t> members;  // ascending entry indices
};

struct CensusReport {
    SweepResult swept;
    CensusMode mode = CensusMode::restricted;
    std::vector<CensusClass> classes;
    std::vector<MergeWitness> witnesses;
};

namespace detail {

// isomorphism invariants only; anything parameter-dependent would split
// classes that actually merge
inline std::array<std::uint64_t, 9> fingerprint(const StructureReport<GfRing>& r) {
    return {static_cast<std::uint64_t>(r.division.verdict == TriState::yes),
            r.comm.oracle.rows.size(),
            r.nuc_left.oracle.rows.size(),
            r.nuc_middle.oracle.rows.size(),
            r.nuc_right.oracle.rows.size(),
            r.zcenter.direct.rows.size(),
            static_cast<std::uint64_t>(r.associative),
            static_cast<std::uint64_t>(r.commutative),
            0};
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(b)] = find(a); }
};

}  // namespace detail

// Pairwise merging with a per-row snapshot: for each entry j, candidate
// partners are the class roots before the row starts, the searches run in
// parallel, and merges apply in index order. The outcome is identical for
// any --jobs value.
inline CensusReport census(const SweepSpec& spec, CensusMode mode, unsigned jobs = 1) {
    CensusReport out;
    out.swept = sweep(spec, jobs);
    out.mode = mode;
    const auto& entries = out.swept.entries;
    const std::size_t n = entries.size();

    std::vector<std::array<std::uint64_t, 9>> prints;
    prints.reserve(n);
    for (const auto& e : entries) prints.push_back(detail::fingerprint(e.report));

    detail::UnionFind uf(n);
    for (std::size_t j = 1; j < n; ++j) {
        std::vector<std::size_t> partners;
        for (std::size_t i = 0; i < j; ++i)
            if (uf.find(i) == i && uf.find(j) != i && prints[i] == prints[j])
                partners.push_back(i);

        std::vector<std::optional<MergeWitness>> row(partners.size());
        detail::parallel_for(partners.size(), jobs, [&](std::size_t pi) {
            const std::size_t i = partners[pi];
            const auto& A = entries[i].params;
            const auto& B = entries[j].params;
            auto restricted = restricted_iso_search(A, B);
            if (!restricted.empty()) {
                row[pi] = MergeWitness{i, j, "restricted", std::move(restricted.front()), {}};
                return;
            }
            if (mode == CensusMode::full) {
                auto scans = iso_bruteforce(A, B, spec.guard, 1);
                if (!scans.empty())
                    row[pi] = MergeWitness{i, j, "bruteforce", {}, std::move(scans.front())};
            }
        });

        for (std::size_t pi = 0; pi < partners.size(); ++pi) {
            if (!row[pi]) continue;
            if (uf.find(partners[pi]) == uf.find(j)) continue;  // already joined via this row
            uf.unite(partners[pi], j);
            out.witnesses.push_back(std::move(*row[pi]));
        }
    }

    std::vector<std::vector<std::size_t>> buckets(n);
    for (std::size_t i = 0; i < n; ++i) buckets[uf.find(i)].push_back(i);
    for (std::size_t rt = 0; rt < n; ++rt) {
        if (buckets[rt].empty()) continue;
        CensusClass cls;
        cls.members = buckets[rt];
        std::sort(cls.members.begin(), cls.members.end());
        cls.representative = cls.members.front();
        out.classes.push_back(std::move(cls));
    }
    std::sort(out.classes.begin(), out.classes.end(),
              [](const CensusClass& a, const CensusClass& b) {
                  return a.representative < b.representative;
              });
    return out;
}

// ---- persistence ----

inline Json sweep_spec_json(const SweepSpec& spec) {
    Json j;
    j["p"] = spec.p;
    j["s"] = spec.s;
    j["r"] = spec.r;
    if (spec.c_indices)
        j["c"] = *spec.c_indices;
    else
        j["c"] = "all";
    if (spec.sigma_tuples) {
        Json arr = Json::array();
        for (const auto& sg : *spec.sigma_tuples) arr.push_back(sg);
        j["sigma"] = arr;
    } else {
        j["sigma"] = "all";
    }
    j["division_only"] = spec.division_only;
    j["proper_only"] = spec.proper_only;
    j["guard"] = spec.guard;
    return j;
}

inline SweepSpec parse_sweep_spec(const Json& j) {
    SweepSpec spec;
    spec.p = detail::need_u32(j, "p");
    spec.s = detail::need_u32(j, "s");
    spec.r = detail::need_u32(j, "r");
    if (j.contains("c") && j.at("c").is_array())
        spec.c_indices = j.at("c").get<std::vector<std::uint64_t>>();
    if (j.contains("sigma") && j.at("sigma").is_array()) {
        std::vector<std::array<std::uint32_t, 4>> sigs;
        for (const auto& e : j.at("sigma")) {
            if (!e.is_array() || e.size() != 4)
                throw std::invalid_argument("each swept twist tuple needs four exponents");
            sigs.push_back({e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>(),
                            e[2].get<std::uint32_t>(), e[3].get<std::uint32_t>()});
        }
        spec.sigma_tuples = std::move(sigs);
    }
    if (j.contains("division_only")) spec.division_only = j.at("division_only").get<bool>();
    if (j.contains("proper_only")) spec.proper_only = j.at("proper_only").get<bool>();
    if (j.contains("guard")) spec.guard = j.at("guard").get<std::uint64_t>();
    return spec;
}

inline Json census_json(const CensusReport& rep) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["tool"] = kToolVersion;
    j["mode"] = to_string(rep.mode);
    const FieldTower* tw = rep.swept.tower.get();
    j["tower"] = Json{{"p", tw->p()}, {"s", tw->s()}, {"r", tw->r()},
                      {"modulus", tw->modulus()}};
    Json entries = Json::array();
    for (const auto& e : rep.swept.entries) entries.push_back(structure_json(e.params, e.report));
    j["entries"] = std::move(entries);
    Json classes = Json::array();
    for (const auto& cls : rep.classes)
        classes.push_back(Json{{"representative", cls.representative}, {"members", cls.members}});
    j["classes"] = std::move(classes);
    Json wits = Json::array();
    for (const auto& w : rep.witnesses) {
        Json e;
        e["from"] = w.from;
        e["to"] = w.to;
        e["method"] = w.method;
        if (w.candidate) e["iso"] = morphism_json(*w.candidate);
        if (w.table) {
            Json rows = Json::array();
            for (const auto& row : w.table->rows) {
                Json r = Json::array();
                for (const auto& v : row) r.push_back(v.idx);
                rows.push_back(std::move(r));
            }
            e["table"] = std::move(rows);
        }
        wits.push_back(std::move(e));
    }
    j["witnesses"] = std::move(wits);
    j["class_count"] = rep.classes.size();
    return j;
}

inline std::string census_csv(const CensusReport& rep) {
    const FieldTower* tw = rep.swept.tower.get();
    std::ostringstream out;
    out << "class,representative_c,representative_sigma,member_count,members\n";
    for (std::size_t k = 0; k < rep.classes.size(); ++k) {
        const auto& cls = rep.classes[k];
        const auto& rp = rep.swept.entries[cls.representative].params;
        out << k << ',' << '"' << tw->to_string(rp.c) << '"' << ',' << '"';
        for (int i = 0; i < 4; ++i) out << (i ? " " : "") << rp.sigma[i].exp % tw->ext_degree();
        out << '"' << ',' << cls.members.size() << ',' << '"';
        for (std::size_t m = 0; m < cls.members.size(); ++m)
            out << (m ? " " : "") << cls.members[m];
        out << '"' << '\n';
    }
    return out.str();
}

// Re-checks a serialized census from scratch: algebras are rebuilt from
// their descriptors, every stored witness must verify as an isomorphism, and
// the classes must be exactly the partition the verified witnesses generate.
// Throws with a description on the first discrepancy.
inline void verify_census_json(const Json& j) {
    const Json& tower = detail::need(j, "tower");
    std::vector<std::uint32_t> modulus;
    for (const auto& e : detail::need(tower, "modulus")) modulus.push_back(e.get<std::uint32_t>());
    TowerPtr tw = FieldTower::make(detail::need_u32(tower, "p"), detail::need_u32(tower, "s"),
                                   detail::need_u32(tower, "r"), std::move(modulus));
    const GfRing ring{tw.get()};

    std::vector<DoublingParams<GfRing>> params;
    for (const auto& entry : detail::need(j, "entries")) {
        const Json& desc = detail::need(entry, "algebra");
        const FqElem c = tw->parse(detail::need_str(desc, "c"));
        const auto sig = detail::need_array(desc, "sigma", 4);
        params.push_back(make_algebra(ring, c, tw->aut(sig[0].get<std::uint32_t>()),
                                      tw->aut(sig[1].get<std::uint32_t>()),
                                      tw->aut(sig[2].get<std::uint32_t>()),
                                      tw->aut(sig[3].get<std::uint32_t>())));
    }

    detail::UnionFind uf(params.size());
    for (const auto& w : detail::need(j, "witnesses")) {
        const std::size_t from = w.at("from").get<std::size_t>();
        const std::size_t to = w.at("to").get<std::size_t>();
        if (from >= params.size() || to >= params.size())
            throw std::invalid_argument("witness references an entry outside the sweep");
        if (w.contains("iso")) {
            const Json& iso = w.at("iso");
            MorphismCandidate<GfRing> cand{params[from], params[to],
                                           tw->aut(iso.at("g").get<std::uint32_t>()),
                                           tw->aut(iso.at("h").get<std::uint32_t>()),
                                           tw->parse(iso.at("b").get<std::string>()), false};
            if (!verify_morphism(cand))
                throw std::invalid_argument("stored witness failed re-verification");
        } else if (w.contains("table")) {
            LinearMapTable<GfRing> tab;
            for (const auto& row : w.at("table")) {
                Row<GfScalarOps> r;
                for (const auto& v : row) r.push_back(FqElem{tw.get(), v.get<std::uint64_t>()});
                tab.rows.push_back(std::move(r));
            }
            if (!table_is_isomorphism(params[from], params[to], tab))
                throw std::invalid_argument("stored witness table failed re-verification");
        } else {
            throw std::invalid_argument("witness carries neither a map nor a table");
        }
        uf.unite(from, to);
    }

    std::vector<std::size_t> roots(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) roots[i] = uf.find(i);
    std::vector<bool> seen(params.size(), false);
    for (const auto& cls : detail::need(j, "classes")) {
        const auto members = cls.at("members").get<std::vector<std::size_t>>();
        if (members.empty()) throw std::invalid_argument("empty class in census file");
        if (cls.at("representative").get<std::size_t>() != members.front())
            throw std::invalid_argument("class representative is not the smallest member");
        for (auto m : members) {
            if (m >= params.size() || seen[m])
                throw std::invalid_argument("classes do not partition the sweep");
            seen[m] = true;
            if (roots[m] != roots[members.front()])
                throw std::invalid_argument("class member not connected by verified witnesses");
        }
    }
    for (std::size_t i = 0; i < params.size(); ++i)
        if (!seen[i]) throw std::invalid_argument("classes do not cover the sweep");
    // classes must not merge what the witnesses do not: count check suffices,
    // since partitions that cover with connected classes and equal block
    // count are identical
    std::set<std::size_t> distinct(roots.begin(), roots.end());
    if (distinct.size() != detail::need(j, "classes").size())
        throw std::invalid_argument("witness graph and class list disagree");
}

}  // namespace dickson
