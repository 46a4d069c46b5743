#pragma once

// JSON descriptors in and report serialization out. A descriptor names a
// doubled algebra completely: tower or quaternion base, constant, twists.
// Reports carry a schema version so downstream readers can hard-fail on
// format drift instead of misreading numbers.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dickson/csa.hpp"
#include "dickson/morphisms.hpp"
#include "dickson/structure.hpp"

namespace dickson {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "dickson-0.1.0";

// handles own the base ring; DoublingParams only points at it
struct GfHandle {
    TowerPtr tower;
    DoublingParams<GfRing> algebra;
};

struct QuatHandle {
    QuatPtr base;
    DoublingParams<QuatRing> algebra;
};

using AlgebraHandle = std::variant<GfHandle, QuatHandle>;

namespace detail {

inline const Json& need(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end())
        throw std::invalid_argument(std::string("descriptor is missing field '") + key + "'");
    return *it;
}

inline std::uint32_t need_u32(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw std::invalid_argument(std::string("field '") + key +
                                    "' must be a nonnegative integer");
    return v.get<std::uint32_t>();
}

inline std::string need_str(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_string())
        throw std::invalid_argument(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

inline std::vector<Json> need_array(const Json& j, const char* key, std::size_t count) {
    const Json& v = need(j, key);
    if (!v.is_array() || v.size() != count)
        throw std::invalid_argument(std::string("field '") + key + "' must be an array of " +
                                    std::to_string(count) + " entries");
    return std::vector<Json>(v.begin(), v.end());
}

}  // namespace detail

inline GfHandle parse_gf_descriptor(const Json& j) {
    const auto p = detail::need_u32(j, "p");
    const auto s = detail::need_u32(j, "s");
    const auto r = detail::need_u32(j, "r");
    TowerPtr tower;
    if (j.contains("modulus")) {
        const Json& m = j.at("modulus");
        if (!m.is_array()) throw std::invalid_argument("field 'modulus' must be an array");
        std::vector<std::uint32_t> coeffs;
        for (const auto& e : m) coeffs.push_back(e.get<std::uint32_t>());
        tower = FieldTower::make(p, s, r, std::move(coeffs));
    } else {
        tower = FieldTower::make(p, s, r);
    }
    const FqElem c = tower->parse(detail::need_str(j, "c"));
    const auto sig = detail::need_array(j, "sigma", 4);
    GfRing ring{tower.get()};
    auto algebra = make_algebra(ring, c, tower->aut(sig[0].get<std::uint32_t>()),
                                tower->aut(sig[1].get<std::uint32_t>()),
                                tower->aut(sig[2].get<std::uint32_t>()),
                                tower->aut(sig[3].get<std::uint32_t>()));
    return {std::move(tower), std::move(algebra)};
}

inline QuatHandle parse_quat_descriptor(const Json& j) {
    const Json& a = detail::need(j, "a");
    const Json& b = detail::need(j, "b");
    if (!a.is_number_integer() || !b.is_number_integer())
        throw std::invalid_argument("fields 'a' and 'b' must be integers");
    QuatPtr base = QuatAlgebra::make(a.get<long long>(), b.get<long long>());
    const Quaternion c = base->parse(detail::need_str(j, "c"));
    const auto sig = detail::need_array(j, "sigma", 4);
    QuatRing ring{base.get()};
    std::array<InnerAut, 4> twists{ring.aut_identity(), ring.aut_identity(),
                                   ring.aut_identity(), ring.aut_identity()};
    for (int i = 0; i < 4; ++i) {
        if (!sig[i].is_string())
            throw std::invalid_argument("quaternion twists are witness literals");
        twists[i] = make_inner(base->parse(sig[i].get<std::string>()));
    }
    auto algebra = make_algebra(ring, c, twists[0], twists[1], twists[2], twists[3]);
    return {std::move(base), std::move(algebra)};
}

inline AlgebraHandle parse_algebra(const Json& j) {
    const auto base = detail::need_str(j, "base");
    if (base == "gf") return parse_gf_descriptor(j);
    if (base == "quat") return parse_quat_descriptor(j);
    throw std::invalid_argument("field 'base' must be \"gf\" or \"quat\", got '" + base + "'");
}

inline AlgebraHandle read_algebra_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open algebra file '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("malformed JSON in '" + path + "': " + e.what());
    }
    return parse_algebra(j);
}

// ---- descriptors back out ----

inline Json descriptor_of(const DoublingParams<GfRing>& A) {
    const FieldTower* tw = A.ring.tw;
    Json j;
    j["base"] = "gf";
    j["p"] = tw->p();
    j["s"] = tw->s();
    j["r"] = tw->r();
    j["modulus"] = tw->modulus();
    j["c"] = tw->to_string(A.c);
    j["sigma"] = {A.sigma[0].exp, A.sigma[1].exp, A.sigma[2].exp, A.sigma[3].exp};
    return j;
}

inline Json descriptor_of(const DoublingParams<QuatRing>& A) {
    const QuatAlgebra* D = A.ring.alg;
    const auto rat_json = [](const Rational& x) -> Json {
        if (rat_den(x) == 1) return rat_num(x).convert_to<long long>();
        return format_rational(x);  // never produced by descriptor parsing
    };
    Json j;
    j["base"] = "quat";
    j["a"] = rat_json(D->a());
    j["b"] = rat_json(D->b());
    j["c"] = D->to_string(A.c);
    Json sig = Json::array();
    for (const auto& s : A.sigma) sig.push_back(D->to_string(canonical_witness(s)));
    j["sigma"] = sig;
    return j;
}

// ---- element and subspace rendering ----

inline std::string elem_str(const GfRing& k, const FqElem& x) { return k.tw->to_string(x); }
inline std::string elem_str(const QuatRing& k, const Quaternion& x) {
    return k.alg->to_string(x);
}

template <CoefficientRing R>
Json elem_json(const DoublingParams<R>& A, const DoubledElem<R>& x) {
    return Json{{"u", elem_str(A.ring, x.u)}, {"v", elem_str(A.ring, x.v)}};
}

inline std::string scalar_str(const GfRing& k, const FqElem& x) { return k.tw->to_string(x); }
inline std::string scalar_str(const QuatRing&, const Rational& x) { return format_rational(x); }

template <CoefficientRing R>
Json subspace_json(const DoublingParams<R>& A, const RingSubspace<R>& sp) {
    Json basis = Json::array();
    for (const auto& row : sp.rows) {
        Json r = Json::array();
        for (const auto& v : row) r.push_back(scalar_str(A.ring, v));
        basis.push_back(std::move(r));
    }
    return Json{{"dim", sp.rows.size()}, {"basis", std::move(basis)}};
}

template <CoefficientRing R>
Json division_json(const DoublingParams<R>& A, const DivisionReport<R>& rep) {
    Json j;
    if (rep.square_test) j["square_test"] = *rep.square_test ? "yes" : "no";
    j["norm_criterion"] = to_string(rep.norm_criterion);
    if (!rep.norm_criterion_note.empty()) j["norm_criterion_note"] = rep.norm_criterion_note;
    if (rep.bruteforce) j["bruteforce"] = *rep.bruteforce ? "yes" : "no";
    j["verdict"] = to_string(rep.verdict);
    j["method"] = rep.method;
    if (rep.witness)
        j["zero_divisors"] = Json{{"x", elem_json(A, rep.witness->first)},
                                  {"y", elem_json(A, rep.witness->second)}};
    j["disagreements"] = rep.disagreements;
    return j;
}

template <CoefficientRing R>
Json pair_json(const DoublingParams<R>& A, const SubspacePair<R>& p, bool with_bullets) {
    Json j;
    j["oracle_dim"] = p.oracle.rows.size();
    j["formula_applicable"] = p.formula_applicable;
    if (p.formula) j["formula_dim"] = p.formula->rows.size();
    if (with_bullets) j["hypothesis_terms"] = p.bullets;
    j["agree"] = p.agree;
    j["oracle"] = subspace_json(A, p.oracle);
    return j;
}

template <CoefficientRing R>
Json structure_json(const DoublingParams<R>& A, const StructureReport<R>& rep) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["tool"] = kToolVersion;
    j["algebra"] = descriptor_of(A);
    j["division"] = division_json(A, rep.division);
    j["commutator"] = pair_json(A, rep.comm, false);
    j["nucleus_left"] = pair_json(A, rep.nuc_left, true);
    j["nucleus_middle"] = pair_json(A, rep.nuc_middle, true);
    j["nucleus_right"] = pair_json(A, rep.nuc_right, true);
    j["center"] = Json{{"dim", rep.zcenter.direct.rows.size()},
                       {"intersection_identity", rep.zcenter.intersection_identity}};
    j["associative"] = rep.associative;
    j["commutative"] = rep.commutative;
    if (rep.assoc_closed_form) j["assoc_closed_form"] = *rep.assoc_closed_form;
    j["all_agree"] = rep.all_agree();
    j["disagreements"] = rep.disagreements;
    return j;
}

inline Json morphism_json(const MorphismCandidate<GfRing>& m) {
    Json j;
    j["g"] = m.g.exp % m.source.ring.tw->ext_degree();
    j["h"] = m.h.exp % m.source.ring.tw->ext_degree();
    j["b"] = m.source.ring.tw->to_string(m.b);
    j["verified"] = m.verified;
    return j;
}

inline Json morphism_json(const MorphismCandidate<QuatRing>& m) {
    const QuatAlgebra* D = m.source.ring.alg;
    Json j;
    j["g"] = D->to_string(canonical_witness(m.g));
    j["h"] = D->to_string(canonical_witness(m.h));
    j["b"] = D->to_string(m.b);
    j["verified"] = m.verified;
    return j;
}

// ---- CSV flattening for tower sweeps ----

inline std::string sweep_csv_header() {
    return "c,sigma1,sigma2,sigma3,sigma4,division,method,commutator_dim,nuc_left_dim,"
           "nuc_middle_dim,nuc_right_dim,center_dim,associative,commutative,all_agree\n";
}

inline std::string sweep_csv_row(const DoublingParams<GfRing>& A,
                                 const StructureReport<GfRing>& rep) {
    const FieldTower* tw = A.ring.tw;
    std::ostringstream out;
    out << '"' << tw->to_string(A.c) << '"';
    for (int i = 0; i < 4; ++i) out << ',' << A.sigma[i].exp % tw->ext_degree();
    out << ',' << to_string(rep.division.verdict) << ',' << rep.division.method << ','
        << rep.comm.oracle.rows.size() << ',' << rep.nuc_left.oracle.rows.size() << ','
        << rep.nuc_middle.oracle.rows.size() << ',' << rep.nuc_right.oracle.rows.size() << ','
        << rep.zcenter.direct.rows.size() << ',' << (rep.associative ? "yes" : "no") << ','
        << (rep.commutative ? "yes" : "no") << ',' << (rep.all_agree() ? "yes" : "no") << '\n';
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    out << text;
}

}  // namespace dickson
