#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpbkit/fodc.hpp"
#include "qpbkit/functor.hpp"
#include "qpbkit/report.hpp"

namespace qpbkit {

// Objects materialized from one input file.
struct Scenario {
    int conductor = 1;
    HopfPtr hopf;
    std::string hopf_type;  // function_algebra | group_algebra | custom
    std::vector<std::pair<std::string, Corep>> coreps;
    std::vector<AlgElem> r_generators;
    std::optional<Matrix> alt_delta;
    int calculus_cap = 2;
    std::optional<std::size_t> universal_points;
    int base_cap = 2;
    std::optional<QPBundle> bundle;
    std::vector<Rational> connection_displacement;
};

namespace detail {

inline std::map<std::string, std::size_t> numbered_labels(std::size_t n, char prefix = 'b') {
    std::map<std::string, std::size_t> m;
    for (std::size_t i = 0; i < n; ++i) m[std::string(1, prefix) + std::to_string(i + 1)] = i;
    return m;
}

inline std::pair<std::size_t, std::size_t> parse_index_pair(const std::string& head, int line) {
    auto parts = textio::split_ws(head);
    if (parts.size() != 2) throw ParseError(line, "expected two 1-based indices");
    long i = std::stol(parts[0]), j = std::stol(parts[1]);
    if (i < 1 || j < 1) throw ParseError(line, "indices are 1-based");
    return {static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)};
}

// "i j : expr" entries
inline std::tuple<std::size_t, std::size_t, std::string> parse_indexed(const std::string& v,
                                                                       int line) {
    auto colon = v.find(':');
    if (colon == std::string::npos) throw ParseError(line, "expected 'i j : expression'");
    auto [i, j] = parse_index_pair(v.substr(0, colon), line);
    return {i, j, v.substr(colon + 1)};
}

}  // namespace detail

inline Scenario build_scenario(const textio::InputFile& file) {
    Scenario sc;
    sc.conductor = file.conductor;
    const textio::Section* hs = file.find("hopf");
    if (!hs) throw ParseError(0, "missing [hopf] section");
    sc.hopf_type = hs->require("type");
    if (sc.hopf_type == "function_algebra" || sc.hopf_type == "group_algebra") {
        auto kv = hs->all("cayley");
        if (kv.empty()) throw ParseError(hs->line, "missing 'cayley'");
        CayleyTable t = textio::parse_cayley(kv[0]->value, kv[0]->line);
        sc.hopf = std::make_shared<HopfAlgebra>(sc.hopf_type == "function_algebra"
                                                    ? function_algebra(t)
                                                    : group_algebra(t));
    } else if (sc.hopf_type == "custom") {
        std::size_t dim = static_cast<std::size_t>(std::stoul(hs->require("dim")));
        HopfAlgebra h = HopfAlgebra::make(dim);
        auto labels = detail::numbered_labels(dim);
        for (std::size_t i = 0; i < dim; ++i) h.labels[i] = "b" + std::to_string(i + 1);
        for (const auto* kv : hs->all("mult")) {
            auto [i, j, expr] = detail::parse_indexed(kv->value, kv->line);
            AlgElem e = textio::parse_element(expr, labels, dim, file.conductor, kv->line);
            for (std::size_t k = 0; k < dim; ++k) h.mult(i, j, k) = e[k];
        }
        for (const auto* kv : hs->all("comult")) {
            auto colon = kv->value.find(':');
            if (colon == std::string::npos)
                throw ParseError(kv->line, "expected 'i j k : scalar'");
            auto parts = textio::split_ws(kv->value.substr(0, colon));
            if (parts.size() != 3) throw ParseError(kv->line, "expected three indices");
            h.comult(std::stoul(parts[0]) - 1, std::stoul(parts[1]) - 1,
                     std::stoul(parts[2]) - 1) =
                textio::parse_scalar(kv->value.substr(colon + 1), file.conductor, kv->line);
        }
        h.unit = textio::parse_element(hs->require("unit"), labels, dim, file.conductor,
                                       hs->line);
        {
            auto vals = textio::split_ws(hs->require("counit"));
            if (vals.size() != dim) throw ParseError(hs->line, "counit needs dim entries");
            for (std::size_t i = 0; i < dim; ++i)
                h.counit_vec[i] = textio::parse_scalar(vals[i], file.conductor, hs->line);
        }
        for (const auto* kv : hs->all("antipode")) {
            auto colon = kv->value.find(':');
            std::size_t j = std::stoul(kv->value.substr(0, colon)) - 1;
            AlgElem e = textio::parse_element(kv->value.substr(colon + 1), labels, dim,
                                              file.conductor, kv->line);
            for (std::size_t i = 0; i < dim; ++i) h.antipode_mat.at(i, j) = e[i];
        }
        for (const auto* kv : hs->all("star")) {
            auto colon = kv->value.find(':');
            std::size_t j = std::stoul(kv->value.substr(0, colon)) - 1;
            AlgElem e = textio::parse_element(kv->value.substr(colon + 1), labels, dim,
                                              file.conductor, kv->line);
            for (std::size_t i = 0; i < dim; ++i) h.star_mat.at(i, j) = e[i];
        }
        h.preferred_conductor = file.conductor;
        sc.hopf = std::make_shared<HopfAlgebra>(std::move(h));
    } else {
        throw ParseError(hs->line, "unknown hopf type '" + sc.hopf_type + "'");
    }
    auto hopf_labels = detail::numbered_labels(sc.hopf->dim);
    for (const auto* cs : file.find_all("corep")) {
        std::string name = cs->require("name");
        std::size_t dim = static_cast<std::size_t>(std::stoul(cs->require("dim")));
        Corep c(sc.hopf, dim);
        for (const auto* kv : cs->all("entry")) {
            auto [i, j, expr] = detail::parse_indexed(kv->value, kv->line);
            if (i >= dim || j >= dim) throw ParseError(kv->line, "corep index out of range");
            c.u(i, j) = textio::parse_element(expr, hopf_labels, sc.hopf->dim, file.conductor,
                                              kv->line);
        }
        sc.coreps.push_back({std::move(name), std::move(c)});
    }
    if (const textio::Section* cal = file.find("calculus")) {
        for (const auto* kv : cal->all("r_generator"))
            sc.r_generators.push_back(textio::parse_element(kv->value, hopf_labels,
                                                            sc.hopf->dim, file.conductor,
                                                            kv->line));
        if (auto cap = cal->get("degree_cap")) sc.calculus_cap = std::stoi(*cap);
        auto deltas = cal->all("delta_entry");
        if (!deltas.empty()) {
            // entries r c : scalar over the invariant-form basis (filled later;
            // dimensions checked when the calculus is built)
            std::size_t maxr = 0, maxc = 0;
            std::vector<std::tuple<std::size_t, std::size_t, CycScalar>> entries;
            for (const auto* kv : deltas) {
                auto colon = kv->value.find(':');
                auto [r, c] = detail::parse_index_pair(kv->value.substr(0, colon), kv->line);
                entries.push_back({r, c,
                                   textio::parse_scalar(kv->value.substr(colon + 1),
                                                        file.conductor, kv->line)});
                maxr = std::max(maxr, r + 1);
                maxc = std::max(maxc, c + 1);
            }
            Matrix d(maxr, maxc);
            for (const auto& [r, c, v] : entries) d.at(r, c) = v;
            sc.alt_delta = std::move(d);
        }
    }
    if (const textio::Section* bs = file.find("base")) {
        sc.universal_points =
            static_cast<std::size_t>(std::stoul(bs->require("universal_points")));
        if (auto cap = bs->get("degree_cap")) sc.base_cap = std::stoi(*cap);
    }
    if (const textio::Section* bu = file.find("bundle")) {
        std::string type = bu->require("type");
        if (type == "point") {
            sc.bundle = point_bundle(sc.hopf);
        } else if (type == "trivial") {
            if (!sc.universal_points)
                throw ParseError(bu->line, "trivial bundle needs a [base] section");
            sc.bundle = trivial_bundle(points_algebra(*sc.universal_points), sc.hopf);
        } else if (type == "custom") {
            std::size_t dim = static_cast<std::size_t>(std::stoul(bu->require("dim")));
            StarAlgebra a = StarAlgebra::make(dim);
            auto labels = detail::numbered_labels(dim, 'x');
            for (std::size_t i = 0; i < dim; ++i) a.labels[i] = "x" + std::to_string(i + 1);
            a.unit = textio::parse_element(bu->require("unit"), labels, dim, file.conductor,
                                           bu->line);
            for (const auto* kv : bu->all("mult")) {
                auto [i, j, expr] = detail::parse_indexed(kv->value, kv->line);
                AlgElem e = textio::parse_element(expr, labels, dim, file.conductor, kv->line);
                for (std::size_t k = 0; k < dim; ++k) a.mult(i, j, k) = e[k];
            }
            for (const auto* kv : bu->all("star")) {
                auto colon = kv->value.find(':');
                std::size_t j = std::stoul(kv->value.substr(0, colon)) - 1;
                AlgElem e = textio::parse_element(kv->value.substr(colon + 1), labels, dim,
                                                  file.conductor, kv->line);
                for (std::size_t i = 0; i < dim; ++i) a.star_mat.at(i, j) = e[i];
            }
            Corep phi(sc.hopf, dim);
            for (const auto* kv : bu->all("coaction")) {
                auto [i, j, expr] = detail::parse_indexed(kv->value, kv->line);
                phi.u(i, j) = textio::parse_element(expr, hopf_labels, sc.hopf->dim,
                                                    file.conductor, kv->line);
            }
            CheckReport gate;
            sc.bundle = check_bundle(std::move(a), sc.hopf, std::move(phi), &gate);
        } else {
            throw ParseError(bu->line, "unknown bundle type '" + type + "'");
        }
    }
    if (const textio::Section* cn = file.find("connection")) {
        if (auto disp = cn->get("displacement"))
            for (const auto& tok : textio::split_ws(*disp))
                sc.connection_displacement.push_back(Rational::from_string(tok));
    }
    return sc;
}

// --- the named verification suites ------------------------------------------------

inline void run_hopf_suite(const Scenario& sc, Report& rep) {
    rep.add(check_hopf(*sc.hopf), "hopf");
    try {
        HaarFunctional ha = haar(*sc.hopf);
        rep.add_check("hopf.haar_unique", true);
        rep.add_vector("haar_values", ha.values);
        bool positive = false;
        std::string note;
        try {
            positive = is_strictly_positive(haar_gram(*sc.hopf, ha));
        } catch (const std::exception& e) {
            note = e.what();
        }
        if (sc.hopf_type == "custom")
            rep.add_check("hopf.haar_gram_positive_warning", true,
                          positive ? "positive" : "not certified: " + note);
        else
            rep.add_check("hopf.haar_gram_positive", positive, note);
    } catch (const std::exception& e) {
        rep.add_check("hopf.haar_unique", false, e.what());
    }
}

inline void run_corep_suite(const Scenario& sc, Report& rep) {
    for (const auto& [name, c] : sc.coreps)
        rep.add(check_corep(c), "corep." + name);
    IrreducibleSet irr = irreducible_set(sc.hopf);
    {
        std::vector<std::vector<std::string>> dims(1);
        for (const auto& m : irr.members)
            dims[0].push_back(std::to_string(m.dim));
        rep.data.push_back({"irreducible_dims", dims});
    }
    std::size_t dim_sq = 0;
    for (const auto& m : irr.members) dim_sq += m.dim * m.dim;
    rep.add_check("corep.peter_weyl_dimensions", dim_sq == sc.hopf->dim,
                  "sum of squares " + std::to_string(dim_sq));
    bool schur = true;
    for (std::size_t i = 0; i < irr.size() && schur; ++i)
        for (std::size_t j = 0; j < irr.size() && schur; ++j) {
            std::size_t d0 = mor_space(irr.members[i], irr.members[j], 0).size();
            if (d0 != (i == j ? 1u : 0u)) schur = false;
            if (mor_space(irr.members[i], irr.members[j], 1).size() > 1) schur = false;
        }
    rep.add_check("corep.schur_dimensions", schur);
    for (const auto& [name, c] : sc.coreps) {
        Decomposition d = decompose(c, irr);
        rep.add_check("corep." + name + ".decomposes", d.complete, d.error);
        if (d.complete) {
            std::vector<std::vector<std::string>> m(1);
            for (auto v : d.multiplicities) m[0].push_back(std::to_string(v));
            rep.data.push_back({"multiplicities_" + name, m});
        }
    }
}

inline void run_calculus_suite(const Scenario& sc, Report& rep) {
    FODC f = build_fodc(sc.hopf, sc.r_generators);
    rep.add_check("calculus.built", true,
                  "dim invariant forms " + std::to_string(f.dim));
    {
        bool ok = true;
        for (std::size_t i = 0; i < sc.hopf->dim && ok; ++i)
            for (std::size_t t = 0; t < sc.hopf->dim && ok; ++t) {
                Vec lhs = f.circ_action(1, f.germs.col(i), sc.hopf->basis_elem(t));
                AlgElem prod = sc.hopf->multiply(sc.hopf->basis_elem(i),
                                                 sc.hopf->basis_elem(t));
                prod = vec_sub(prod, vec_scale(sc.hopf->counit(sc.hopf->basis_elem(i)),
                                               sc.hopf->basis_elem(t)));
                if (lhs != f.germs * prod) ok = false;
            }
        rep.add_check("calculus.germs_identity", ok);
    }
    rep.add(check_corep(adjoint_coaction(f)), "calculus.adjoint");
    VerticalForms v = vertical_forms(StarAlgebra::from_hopf(*sc.hopf), regular_corep(sc.hopf),
                                     f, std::min(sc.calculus_cap, 2));
    rep.add(check_vertical(v), "calculus.vertical");
    {
        Matrix r_default = point_bundle_curvature(f);
        rep.add_matrix("point_curvature", r_default);
        if (sc.alt_delta) {
            bool ok = false;
            std::string w;
            try {
                ok = point_bundle_curvature(f, sc.alt_delta) == r_default;
            } catch (const std::exception& e) {
                w = e.what();
            }
            rep.add_check("calculus.curvature_delta_independent", ok, w);
        } else if (!f.ideal_basis.empty()) {
            // canonical alternative: shift the embedded differential by the
            // first degree-2 relation
            Matrix alt = f.default_delta();
            Vec s = kron(f.germs, f.germs) * sc.hopf->comultiply(f.ideal_basis[0]);
            for (std::size_t k = 0; k < f.dim; ++k)
                for (std::size_t i = 0; i < f.dim * f.dim; ++i)
                    alt.at(i, k) += CycScalar(static_cast<long long>(k + 1)) * s[i];
            rep.add_check("calculus.curvature_delta_independent",
                          point_bundle_curvature(f, alt) == r_default);
        } else {
            rep.add_check("calculus.curvature_delta_independent", true,
                          "universal calculus: the embedded differential is unique");
        }
    }
}

inline void run_bundle_suite(const Scenario& sc, Report& rep) {
    if (!sc.bundle) throw ParseError(0, "suite 'bundle' needs a [bundle] section");
    CheckReport gate;
    check_bundle(sc.bundle->total, sc.bundle->hopf, sc.bundle->coaction, &gate);
    rep.add(gate, "bundle");
    rep.add_check("bundle.base_dimension", true,
                  std::to_string(sc.bundle->base_basis.size()) + " invariant elements");
}

struct AssocObjects {
    HorizontalModel hm;
    CovariantDerivative d;
    std::vector<Matrix> displacements;
};

inline AssocObjects build_assoc(const Scenario& sc) {
    if (!sc.bundle) throw ParseError(0, "this suite needs a [bundle] section");
    if (!sc.universal_points) throw ParseError(0, "this suite needs a [base] section");
    IrreducibleSet irr = irreducible_set(sc.hopf);
    BaseCalculus base = universal_base_calculus(*sc.universal_points, sc.base_cap);
    HorizontalModel hm = horizontal_model(*sc.bundle, std::move(base), std::move(irr),
                                          sc.base_cap);
    DerivativeSpace ds = derivative_space(hm);
    if (!ds.feasible) throw std::runtime_error("no covariant derivative exists: " + ds.error);
    CovariantDerivative d = ds.particular;
    for (std::size_t i = 0; i < sc.connection_displacement.size() &&
                            i < ds.displacements.size();
         ++i)
        d.d0 = d.d0 + CycScalar(sc.connection_displacement[i]) * ds.displacements[i];
    return AssocObjects{std::move(hm), std::move(d), std::move(ds.displacements)};
}

inline void run_assoc_suite(const Scenario& sc, Report& rep) {
    AssocObjects ao = build_assoc(sc);
    const HorizontalModel& hm = ao.hm;
    rep.add(check_horizontal(hm), "assoc");
    for (std::size_t bi = 0; bi < hm.blocks.size(); ++bi) {
        const HorBlock& bl = hm.blocks[bi];
        if (bl.empty) continue;
        const std::string tag = "assoc.block" + std::to_string(bi);
        rep.add(check_frame(hm.bundle, bl.sec, bl.frm), tag);
        rep.add_matrix("frame_Z_block" + std::to_string(bi), bl.frm.z);
        rep.add(check_connection(hm, ao.d, bl), tag);
        InducedConnection ic = induced_connection(hm, ao.d, bl);
        rep.add_matrix("nabla_block" + std::to_string(bi), ic.nabla);
    }
    rep.add_check("assoc.sigma_trivial_identity", sigma_trivial_is_identity(hm));
    rep.add_check("assoc.derivative_feasible", true,
                  "displacement dimension " + std::to_string(ao.displacements.size()));
    rep.add(check_derivative(hm, ao.d), "assoc");
    for (std::size_t i = 0; i < ao.displacements.size(); ++i) {
        CovariantDerivative shifted{ao.d.d0 + ao.displacements[i]};
        rep.add_check("assoc.derivative_member" + std::to_string(i),
                      check_derivative(hm, shifted).all_pass());
    }
    rep.add_matrix("derivative_d0", ao.d.d0);
    rep.add(check_natural_isos(hm, ao.d), "assoc");
    if (hm.blocks.size() >= 2 && !hm.blocks[0].empty && !hm.blocks[1].empty) {
        const Corep& triv = hm.irr.members[0];
        const Corep& other = hm.irr.members[1];
        Corep sum = direct_sum(triv, other);
        GradedMorphism mono{triv, sum, LinearMap{Matrix(sum.dim, triv.dim), 0}};
        for (std::size_t i = 0; i < triv.dim; ++i) mono.map.matrix.at(i, i) = CycScalar(1);
        GradedMorphism epi{sum, other, LinearMap{Matrix(other.dim, sum.dim), 0}};
        for (std::size_t i = 0; i < other.dim; ++i)
            epi.map.matrix.at(i, triv.dim + i) = CycScalar(1);
        rep.add(exactness_check(hm.bundle, mono, epi), "assoc");
    }
}

inline void run_reconstruct_suite(const Scenario& sc, Report& rep) {
    AssocObjects ao = build_assoc(sc);
    Reconstruction rec = reconstruct(ao.hm, ao.d);
    rep.add(rec.hypotheses, "reconstruct");
    rep.add_check("reconstruct.bundle_round_trip", rec.round_trip);
    rep.add_check("reconstruct.derivative_round_trip_flag", rec.derivative_match);
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"hopf",   "corep",       "calculus", "bundle",
                                                "assoc",  "reconstruct", "all"};
    return names;
}

inline Report run_suite(const std::string& suite, const textio::InputFile& file,
                        const std::string& raw) {
    Scenario sc = build_scenario(file);
    Report rep;
    rep.input_digest = fnv1a_digest(raw);
    rep.conductor = sc.conductor;
    auto run_one = [&](const std::string& name) {
        if (name == "hopf") {
            run_hopf_suite(sc, rep);
        } else if (name == "corep") {
            run_corep_suite(sc, rep);
        } else if (name == "calculus") {
            run_calculus_suite(sc, rep);
        } else if (name == "bundle") {
            run_bundle_suite(sc, rep);
        } else if (name == "assoc") {
            run_assoc_suite(sc, rep);
        } else if (name == "reconstruct") {
            run_reconstruct_suite(sc, rep);
        } else {
            throw ParseError(0, "unknown suite '" + name + "'");
        }
    };
    if (suite == "all") {
        run_one("hopf");
        run_one("corep");
        if (!sc.r_generators.empty() || file.find("calculus")) run_one("calculus");
        if (sc.bundle) {
            run_one("bundle");
            if (sc.universal_points) {
                run_one("assoc");
                run_one("reconstruct");
            }
        }
    } else {
        run_one(suite);
    }
    return rep;
}

}  // namespace qpbkit
