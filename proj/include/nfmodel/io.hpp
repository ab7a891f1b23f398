#pragma once

#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "nfmodel/bounds.hpp"
#include "nfmodel/model.hpp"

namespace nfmodel {

using json = nlohmann::ordered_json;

namespace io_detail {

inline mpz_class mpz_from_json(const json& v) {
    if (v.is_string()) {
        mpz_class z;
        if (z.set_str(v.get<std::string>(), 10) != 0)
            throw input_error("bad integer string: " + v.get<std::string>());
        return z;
    }
    if (v.is_number_integer()) {
        mpz_class z;
        z.set_str(std::to_string(v.get<long long>()), 10);
        return z;
    }
    throw input_error("expected integer or integer string");
}

inline mpq_class mpq_from_json(const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return mpq_class(mpz_from_json(v));
    throw input_error("expected rational string or integer");
}

inline json vec_to_json(const ZVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x.get_str());
    return a;
}

inline json coords_to_json(const FieldElement& e) {
    json a = json::array();
    for (const auto& c : e.coords) a.push_back(c.get_str());
    return a;
}

}  // namespace io_detail

// field.json: { "defining_polynomial": [c0, ..., 1],
//               "integral_basis": optional n x n of "p/q" strings,
//               "assume_power_basis_maximal": bool }
inline FieldDesc field_desc_from_json(const json& j) {
    FieldDesc d;
    if (!j.contains("defining_polynomial"))
        throw input_error("field description: defining_polynomial missing");
    for (const auto& c : j.at("defining_polynomial"))
        d.defining_polynomial.push_back(io_detail::mpz_from_json(c));
    if (j.contains("integral_basis") && !j.at("integral_basis").is_null()) {
        const json& b = j.at("integral_basis");
        size_t n = b.size();
        QMat m(n, n);
        for (size_t i = 0; i < n; ++i) {
            if (b[i].size() != n) throw input_error("integral_basis must be square");
            for (size_t k = 0; k < n; ++k) m(i, k) = io_detail::mpq_from_json(b[i][k]);
        }
        d.integral_basis = std::move(m);
    }
    d.assume_power_basis_maximal = j.value("assume_power_basis_maximal", false);
    return d;
}

inline NumberField load_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open field file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw input_error(std::string("field file is not valid JSON: ") + e.what());
    }
    return parse_field(field_desc_from_json(j));
}

inline json report_to_json(const VerificationReport& r) {
    json j;
    j["accepted"] = r.accepted;
    j["well_poised"] = r.well_poised;
    j["eval_rank"] = r.eval_rank;
    j["vanishing"] = r.vanishing;
    j["jacobian_nonzero"] = r.jacobian_nonzero;
    j["residue_rank"] = r.residue_rank;
    j["vol_relation_sq"] = r.vol_relation_sq.get_str();
    j["vol_identity_ok"] = r.vol_identity_ok;
    j["vol_bound_ok"] = r.vol_bound_ok;
    j["frakD"] = r.frakD.get_str();
    j["coeff_bound"] = r.coeff_bound.get_str();
    j["coeff_bound_decimal"] = format_decimal(r.coeff_bound, 12);
    j["max_abs_coeff"] = r.max_abs_coeff.get_str();
    j["ratio"] = r.ratio.get_str();
    j["ratio_decimal"] = format_decimal(r.ratio == 0 ? mpq_class(0) : r.ratio, 12);
    j["coeff_bound_ok"] = r.coeff_bound_ok;
    return j;
}

inline json model_to_json(const SmallModel& m) {
    json j;
    j["params"] = {{"n", m.params.n},
                   {"r", m.params.r},
                   {"d", m.params.d},
                   {"C", m.params.C.get_str()},
                   {"ell", m.params.ell.get_str()},
                   {"keep", m.params.keep.get_str()},
                   {"policy", m.params.policy}};
    j["strategy"] = m.strategy;
    j["seed"] = m.seed;
    j["precision"] = m.precision;
    json u = json::array();
    for (size_t i = 0; i < m.u.rows(); ++i) {
        json row = json::array();
        for (size_t c = 0; c < m.u.cols(); ++c) row.push_back(m.u(i, c).get_str());
        u.push_back(row);
    }
    j["u"] = u;
    json alphas = json::array();
    for (const auto& a : m.alphas.elems) alphas.push_back(io_detail::coords_to_json(a));
    j["alphas"] = alphas;
    json kappas = json::array();
    for (const auto& k : m.kappas) kappas.push_back(io_detail::coords_to_json(k));
    j["kappas"] = kappas;
    json eqs = json::array();
    for (const auto& eq : m.equations) {
        json terms = json::array();
        for (size_t c = 0; c < eq.size(); ++c) {
            if (eq[c] == 0) continue;
            json t;
            t["exponents"] = m.monos[c];
            t["coeff"] = eq[c].get_str();
            terms.push_back(t);
        }
        eqs.push_back(terms);
    }
    j["equations"] = eqs;
    j["provenance"] = {{"relation_indices", m.relation_indices},
                       {"u_rejections", m.u_rejections}};
    j["report"] = report_to_json(m.report);
    return j;
}

// Rebuilds a SmallModel from its JSON form for verification. Structural
// violations (bad shapes, non-integer data, degree above d) are input
// errors; semantic failures are left to verify_model.
inline SmallModel model_from_json(const json& j, const NumberField& K) {
    SmallModel m;
    const json& p = j.at("params");
    PolicySpec spec;
    spec.kind = "explicit";
    spec.r = p.at("r").get<unsigned>();
    spec.d = p.at("d").get<unsigned>();
    spec.allow_small_d = true;
    m.params = choose_parameters(p.at("n").get<unsigned>(), spec);
    m.params.policy = p.value("policy", "explicit");
    if (m.params.n != K.n) throw input_error("model/field degree mismatch");
    m.monos = monomials(m.params);

    m.strategy = j.value("strategy", "unknown");
    m.seed = j.value("seed", 0ull);
    m.precision = j.value("precision", 128u);

    const json& u = j.at("u");
    if (u.size() != K.n) throw input_error("u must have n rows");
    m.u = ZMat(K.n, m.params.r);
    for (size_t i = 0; i < K.n; ++i) {
        if (u[i].size() != m.params.r) throw input_error("u must have r columns");
        for (size_t c = 0; c < m.params.r; ++c)
            m.u(i, c) = io_detail::mpz_from_json(u[i][c]);
    }

    auto elem_from = [&](const json& a) {
        if (a.size() != K.n) throw input_error("element coordinate length mismatch");
        QVec c(K.n);
        for (size_t i = 0; i < K.n; ++i) c[i] = io_detail::mpq_from_json(a[i]);
        return FieldElement(std::move(c));
    };
    for (const auto& a : j.at("alphas")) m.alphas.elems.push_back(elem_from(a));
    if (m.alphas.elems.size() != K.n) throw input_error("alphas must contain n elements");
    m.alphas.dK_abs = abs_disc(K);
    for (const auto& k : j.at("kappas")) m.kappas.push_back(elem_from(k));
    if (m.kappas.size() != m.params.r) throw input_error("kappas must contain r elements");
    auto recomputed = kappa_from_u(m.alphas.elems, m.u, K);
    for (size_t t = 0; t < m.kappas.size(); ++t)
        if (!(recomputed[t] == m.kappas[t]))
            throw input_error("kappas do not match u * alphas");

    std::map<std::vector<unsigned>, size_t> index;
    for (size_t c = 0; c < m.monos.size(); ++c) index[m.monos[c]] = c;
    for (const auto& eq : j.at("equations")) {
        ZVec dense(m.monos.size());
        for (const auto& term : eq) {
            std::vector<unsigned> exps = term.at("exponents").get<std::vector<unsigned>>();
            if (exps.size() != m.params.r) throw input_error("equation exponent arity mismatch");
            unsigned deg = 0;
            for (auto e : exps) deg += e;
            if (deg > m.params.d) throw input_error("equation degree exceeds d");
            auto it = index.find(exps);
            if (it == index.end()) throw input_error("unknown monomial in equation");
            dense[it->second] = io_detail::mpz_from_json(term.at("coeff"));
        }
        m.equations.push_back(std::move(dense));
    }
    if (j.contains("provenance")) {
        const json& pr = j.at("provenance");
        if (pr.contains("relation_indices"))
            m.relation_indices = pr.at("relation_indices").get<std::vector<size_t>>();
        m.u_rejections = pr.value("u_rejections", 0ull);
    }
    return m;
}

inline SmallModel load_model(const std::string& path, const NumberField& K) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw input_error(std::string("model file is not valid JSON: ") + e.what());
    }
    return model_from_json(j, K);
}

inline json balanced_set_to_json(const BalancedSet& set, const BalancedSetReport& rep) {
    json j;
    json elems = json::array();
    for (const auto& e : set.elems) elems.push_back(io_detail::coords_to_json(e));
    j["elements"] = elems;
    json norms = json::array();
    for (const auto& nb : set.norm_bounds)
        norms.push_back({{"mid", format_decimal(nb.mid(), 20)},
                         {"rad", format_decimal(nb.rad(), 6)},
                         {"upper_exact", nb.hi.get_str()}});
    j["sup_norms"] = norms;
    j["disc_abs"] = set.dK_abs.get_str();
    j["target"] = {{"mid", format_decimal(set.target.mid(), 20)},
                   {"rad", format_decimal(set.target.rad(), 6)}};
    j["product_step_used"] = set.product_step_used;
    j["slack_used"] = format_decimal(set.slack_used, 12);
    json ratios = json::array();
    for (const auto& r : rep.ratio_upper) ratios.push_back(format_decimal(r, 12));
    j["report"] = {{"ratios", ratios},
                   {"pass", rep.pass},
                   {"paper_bound_held", rep.paper_bound_held},
                   {"slack_sq", rep.slack_sq.get_str()}};
    return j;
}

// lattice JSON for the minima oracle: {"basis": [[...]]} or {"gram": [["p/q",...]]}
inline IntLattice lattice_from_json(const json& j) {
    if (j.contains("basis")) {
        const json& b = j.at("basis");
        if (b.empty()) throw input_error("lattice basis must be nonempty");
        ZMat m(b.size(), b[0].size());
        for (size_t i = 0; i < b.size(); ++i) {
            if (b[i].size() != m.cols()) throw input_error("ragged basis matrix");
            for (size_t c = 0; c < m.cols(); ++c) m(i, c) = io_detail::mpz_from_json(b[i][c]);
        }
        return IntLattice::from_basis(std::move(m));
    }
    if (j.contains("gram")) {
        const json& g = j.at("gram");
        QMat m(g.size(), g.size());
        for (size_t i = 0; i < g.size(); ++i) {
            if (g[i].size() != g.size()) throw input_error("gram matrix must be square");
            for (size_t c = 0; c < g.size(); ++c) m(i, c) = io_detail::mpq_from_json(g[i][c]);
        }
        return IntLattice::from_gram(std::move(m));
    }
    throw input_error("lattice JSON needs a \"basis\" or \"gram\" key");
}

inline json count_bound_to_json(const CountBound& b) {
    json j;
    j["n"] = b.n;
    j["log10H"] = b.log10H.get_str();
    j["r"] = b.r;
    j["d"] = b.d;
    j["C"] = b.C.get_str();
    j["ell"] = b.ell.get_str();
    j["log10B"] = format_decimal(b.log10B, 30);
    j["log10_models"] = format_decimal(b.log10_models, 30);
    j["log10_fields"] = format_decimal(b.log10_fields, 30);
    j["schmidt_exponent"] = format_decimal(b.schmidt_exponent, 30);
    j["h_exponent"] = format_decimal(b.h_exponent, 30);
    return j;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace nfmodel
