// Acceptance suite: one pass/fail line per criterion, all comparisons exact.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qpbkit/functor.hpp"
#include "qpbkit/suites.hpp"

using namespace qpbkit;

namespace {

int failures = 0;

void line(int number, const std::string& what, bool pass, const std::string& note = "") {
    std::printf("%s criterion %2d: %s%s\n", pass ? "PASS" : "FAIL", number, what.c_str(),
                note.empty() ? "" : ("  [" + note + "]").c_str());
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Corpus {
    HorizontalModel hm;
    CovariantDerivative d;
    std::vector<Matrix> displacements;
    std::string name;
};

Corpus make_corpus(int which) {
    auto h = std::make_shared<HopfAlgebra>(function_algebra(cyclic_table(2)));
    QPBundle b = which == 0   ? checkerboard_bundle()
                 : which == 1 ? point_bundle(h)
                              : trivial_bundle(points_algebra(2), h);
    std::string name = which == 0 ? "checkerboard" : which == 1 ? "point" : "trivial";
    BaseCalculus base = universal_base_calculus(b.base_basis.size(), 2);
    IrreducibleSet irr = irreducible_set(b.hopf);
    HorizontalModel hm = horizontal_model(std::move(b), std::move(base), std::move(irr), 2);
    DerivativeSpace ds = derivative_space(hm);
    if (!ds.feasible) throw std::runtime_error("corpus connection infeasible: " + name);
    return Corpus{std::move(hm), ds.particular, std::move(ds.displacements), std::move(name)};
}

// --- criterion 1: Hopf axioms and Haar for the five corpus algebras ---------------

void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string note;
    struct Item {
        const char* name;
        bool function;
        CayleyTable table;
    };
    std::vector<Item> items{{"C(Z2)", true, cyclic_table(2)},
                            {"C(Z4)", true, cyclic_table(4)},
                            {"C(S3)", true, s3_table()},
                            {"C[Z3]", false, cyclic_table(3)},
                            {"C[S3]", false, s3_table()}};
    for (const auto& it : items) {
        HopfAlgebra h = it.function ? function_algebra(it.table) : group_algebra(it.table);
        if (!check_hopf(h).all_pass()) {
            ok = false;
            note = std::string(it.name) + " fails an axiom";
            break;
        }
        HaarFunctional ha = haar(h);  // throws unless the solution is unique
        for (std::size_t g = 0; g < h.dim; ++g) {
            CycScalar want =
                it.function
                    ? CycScalar(Rational(1, static_cast<long long>(h.dim)))
                    : (g == group_identity(it.table) ? CycScalar(1) : CycScalar(0));
            if (ha.values[g] != want) {
                ok = false;
                note = std::string(it.name) + " Haar differs from the oracle";
            }
        }
    }
    double dt = seconds_since(t0);
    if (dt >= 5.0) {
        ok = false;
        note = "runtime " + std::to_string(dt) + "s";
    }
    line(1, "Hopf axiom suite and Haar oracle on the five corpus algebras", ok, note);
}

// --- criterion 2: irreducible sets ------------------------------------------------

void criterion2() {
    bool ok = true;
    std::string note;
    {
        auto set = irreducible_set(
            std::make_shared<HopfAlgebra>(function_algebra(cyclic_table(2))));
        if (set.size() != 2 || set.members[0].dim != 1 || set.members[1].dim != 1) {
            ok = false;
            note = "C(Z2) set wrong";
        }
    }
    auto set = irreducible_set(std::make_shared<HopfAlgebra>(function_algebra(s3_table())));
    std::vector<std::size_t> dims;
    std::size_t sq = 0;
    for (const auto& m : set.members) {
        dims.push_back(m.dim);
        sq += m.dim * m.dim;
    }
    if (dims != std::vector<std::size_t>{1, 1, 2} || sq != 6) {
        ok = false;
        note = "C(S3) dims wrong";
    }
    for (std::size_t i = 0; i < set.size() && ok; ++i)
        for (std::size_t j = 0; j < set.size() && ok; ++j) {
            std::size_t d0 = mor_space(set.members[i], set.members[j], 0).size();
            if (d0 != (i == j ? 1u : 0u)) {
                ok = false;
                note = "Schur dimension failure";
            }
        }
    line(2, "irreducible sets for C(Z2) and C(S3) with exact Schur dimensions", ok, note);
}

// --- criterion 3: fusion oracle ----------------------------------------------------

void criterion3() {
    bool ok = true;
    std::string note;
    for (const CayleyTable& t : {cyclic_table(2), cyclic_table(3), s3_table()}) {
        auto h = std::make_shared<HopfAlgebra>(function_algebra(t));
        auto set = irreducible_set(h);
        auto chars = oracle::brute_force_characters(t);
        if (chars.characters.size() != set.size()) {
            ok = false;
            note = "character count mismatch";
            break;
        }
        std::vector<std::size_t> perm(set.size(), set.size());
        for (std::size_t i = 0; i < set.size(); ++i) {
            auto chi = oracle::corep_character(set.members[i], t.size());
            for (std::size_t j = 0; j < chars.characters.size(); ++j) {
                bool same = true;
                for (std::size_t g = 0; g < t.size(); ++g)
                    if (chi[g] != chars.characters[j][g]) same = false;
                if (same) perm[i] = j;
            }
            if (perm[i] >= set.size()) {
                ok = false;
                note = "library irreducible has no oracle character";
            }
        }
        for (std::size_t a = 0; a < set.size() && ok; ++a)
            for (std::size_t b = 0; b < set.size() && ok; ++b) {
                Corep prod = tensor(set.members[a], set.members[b]);
                Decomposition d = decompose(prod, set);
                if (!d.complete) {
                    ok = false;
                    note = "tensor decomposition incomplete";
                    break;
                }
                auto chi = oracle::corep_character(prod, t.size());
                for (std::size_t c = 0; c < set.size(); ++c) {
                    CycScalar want =
                        oracle::character_inner(chi, chars.characters[perm[c]]);
                    if (CycScalar(static_cast<long long>(d.multiplicities[c])) != want) {
                        ok = false;
                        note = "fusion multiplicity differs from the oracle";
                    }
                }
            }
        if (!ok) break;
    }
    line(3, "fusion multiplicities match the brute-force character oracle", ok, note);
}

// --- criterion 4: bundle gate ------------------------------------------------------

void criterion4() {
    bool ok = true;
    std::string note;
    {
        CheckReport rep;
        auto hopf = std::make_shared<HopfAlgebra>(function_algebra(cyclic_table(2)));
        StarAlgebra m2 = matrix_algebra(2);
        Corep phi(hopf, 4);
        AlgElem even{CycScalar(1), CycScalar(1)}, odd{CycScalar(1), CycScalar(-1)};
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                phi.u(i * 2 + j, i * 2 + j) = (i + j) % 2 ? odd : even;
        QPBundle b = check_bundle(m2, hopf, phi, &rep);
        if (!rep.all_pass() || b.base_basis.size() != 2) {
            ok = false;
            note = "checkerboard gate failed";
        }
        // the beta-rank must be exactly dim(GM) * dim(G) = 8: certified by the
        // passing surjectivity check over an 8-row system
        const CheckResult* beta = rep.find("bundle.beta_surjective");
        if (!beta || !beta->pass) {
            ok = false;
            note = "beta rank not 8";
        }
    }
    {
        // broken fixture: trivial coaction fails the canonical-map gate with
        // the documented rank witness
        CheckReport rep;
        auto hopf = std::make_shared<HopfAlgebra>(function_algebra(cyclic_table(2)));
        StarAlgebra a = points_algebra(2);
        Corep phi(hopf, 2);
        phi.u(0, 0) = hopf->unit;
        phi.u(1, 1) = hopf->unit;
        check_bundle(a, hopf, phi, &rep);
        const CheckResult* beta = rep.find("bundle.beta_surjective");
        if (!beta || beta->pass || beta->witness != "rank 2 of 4") {
            ok = false;
            note = "broken fixture witness missing";
        }
    }
    {
        // non-group table rejected with a diagnostic
        CayleyTable bad{{0, 1, 2}, {1, 2, 0}, {2, 1, 0}};
        bool threw = false;
        try {
            function_algebra(bad);
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        if (!threw) {
            ok = false;
            note = "non-group table accepted";
        }
    }
    line(4, "bundle gate with beta-rank 8 and documented broken-fixture witnesses", ok, note);
}

// --- criteria 5-9 run over the three corpus bundles -------------------------------

void criterion5(const std::vector<Corpus>& corpus) {
    bool ok = true;
    std::string note;
    for (const auto& c : corpus) {
        for (std::size_t bi = 0; bi < c.hm.blocks.size(); ++bi) {
            const HorBlock& bl = c.hm.blocks[bi];
            if (bl.empty) continue;
            CheckReport rep = check_frame(c.hm.bundle, bl.sec, bl.frm);
            if (!rep.all_pass()) {
                ok = false;
                note = c.name + " block " + std::to_string(bi);
            }
        }
    }
    // golden values for the checkerboard sign block
    const Corpus& m2 = corpus[0];
    const HorBlock& sign_block = m2.hm.blocks[1];
    if (sign_block.frm.d() != 2 || sign_block.frm.z != Matrix::identity(2)) {
        ok = false;
        note = "checkerboard sign frame golden mismatch";
    } else {
        auto e = frame_idempotent(m2.hm.bundle, sign_block.frm);
        AlgElem e11(4, CycScalar(0)), e22(4, CycScalar(0));
        e11[0] = CycScalar(1);
        e22[3] = CycScalar(1);
        bool diag = vec_is_zero(e[0][1]) && vec_is_zero(e[1][0]) &&
                    ((e[0][0] == e11 && e[1][1] == e22) || (e[0][0] == e22 && e[1][1] == e11));
        if (!diag) {
            ok = false;
            note = "idempotent is not diag(E11, E22)";
        }
    }
    line(5, "frame identities, strict positivity of Z and projectivity idempotents", ok,
         note);
}

void criterion6(const std::vector<Corpus>& corpus) {
    bool ok = true;
    std::string note;
    for (const auto& c : corpus) {
        if (!check_derivative(c.hm, c.d).all_pass()) {
            ok = false;
            note = c.name + " particular derivative";
        }
        for (const auto& disp : c.displacements) {
            CovariantDerivative shifted{c.d.d0 + disp};
            if (!check_derivative(c.hm, shifted).all_pass()) {
                ok = false;
                note = c.name + " displaced derivative";
            }
        }
        if (!sigma_trivial_is_identity(c.hm)) {
            ok = false;
            note = c.name + " sigma_triv";
        }
        for (std::size_t bi = 0; bi < c.hm.blocks.size(); ++bi) {
            const HorBlock& bl = c.hm.blocks[bi];
            if (bl.empty) continue;
            CheckReport rep = check_connection(c.hm, c.d, bl);
            if (!rep.all_pass()) {
                ok = false;
                note = c.name + " connection block " + std::to_string(bi);
            }
        }
    }
    // flat connections have vanishing curvature: the point bundle (no base
    // forms) and the trivial bundle with its product connection
    for (int which : {1, 2}) {
        const Corpus& c = corpus[static_cast<std::size_t>(which)];
        for (std::size_t bi = 0; bi < c.hm.blocks.size(); ++bi) {
            const HorBlock& bl = c.hm.blocks[bi];
            if (bl.empty) continue;
            InducedConnection ic = induced_connection(c.hm, c.d, bl);
            CurvatureResult r = curvature(c.hm, c.d, bl, ic);
            if (!r.by_definition.is_zero() || !r.by_dual_path.is_zero()) {
                ok = false;
                note = c.name + " flat curvature nonzero";
            }
        }
    }
    line(6, "connection suite: derivative space, Leibniz, sigma, curvature dual path", ok,
         note);
}

void criterion7(const std::vector<Corpus>& corpus) {
    bool ok = true;
    std::string note;
    const Corpus& c = corpus[0];
    const Corep& triv = c.hm.irr.members[0];
    const Corep& sgn = c.hm.irr.members[1];
    SectionModule gt = sections(c.hm.bundle, triv);
    SectionModule gs = sections(c.hm.bundle, sgn);
    SectionMap aid = morphism_image(c.hm.bundle, gs, gs, identity_morphism(sgn));
    if (aid.matrix != Matrix::identity(gs.basis.size())) {
        ok = false;
        note = "A_id differs from the identity";
    }
    std::size_t pairs = 0, degree1_pairs = 0;
    std::vector<GradedMorphism> pool;
    for (const Corep* a : {&triv, &sgn}) {
        for (auto& f : mor_space(*a, *a, 0)) pool.push_back(f);
        for (auto& f : mor_space(*a, *a, 1)) pool.push_back(f);
        auto m0 = mor_space(*a, *a, 0);
        GradedMorphism scaled = m0[0];
        scaled.map.matrix = CycScalar(3) * scaled.map.matrix;
        pool.push_back(scaled);
    }
    for (const auto& f : pool)
        for (const auto& g : pool) {
            if (f.source.dim != g.target.dim || f.source.u(0, 0) != g.target.u(0, 0)) continue;
            const SectionModule& s_f = f.target.u(0, 0) == sgn.u(0, 0) ? gs : gt;
            const SectionModule& s_m = f.source.u(0, 0) == sgn.u(0, 0) ? gs : gt;
            const SectionModule& s_g = g.source.u(0, 0) == sgn.u(0, 0) ? gs : gt;
            GradedMorphism gf = compose_morphisms(f, g);
            SectionMap af = morphism_image(c.hm.bundle, s_f, s_m, f);
            SectionMap ag = morphism_image(c.hm.bundle, s_m, s_g, g);
            SectionMap agf = morphism_image(c.hm.bundle, s_f, s_g, gf);
            Matrix composed = ag.parity == 0 ? ag.matrix * af.matrix
                                             : ag.matrix * af.matrix.conjugated();
            if (agf.matrix != composed || agf.parity != (af.parity + ag.parity) % 2) {
                ok = false;
                note = "composition failure";
            }
            ++pairs;
            if (f.parity() == 1 || g.parity() == 1) ++degree1_pairs;
        }
    if (pairs < 10 || degree1_pairs == 0) {
        ok = false;
        note = "composable-pair corpus too small";
    }
    // mono/epi swap on 0 -> triv -> triv (+) sign -> sign -> 0
    Corep sum = direct_sum(triv, sgn);
    SectionModule g_sum = sections(c.hm.bundle, sum);
    GradedMorphism incl{triv, sum, LinearMap{Matrix(2, 1), 0}};
    incl.map.matrix.at(0, 0) = CycScalar(1);
    GradedMorphism proj{sum, sgn, LinearMap{Matrix(1, 2), 0}};
    proj.map.matrix.at(0, 1) = CycScalar(1);
    SectionMap a_incl = morphism_image(c.hm.bundle, g_sum, gt, incl);
    SectionMap a_proj = morphism_image(c.hm.bundle, gs, g_sum, proj);
    if (rank(a_incl.matrix) != gt.basis.size()) {
        ok = false;
        note = "image of the inclusion is not surjective";
    }
    if (!kernel(a_proj.matrix).empty()) {
        ok = false;
        note = "image of the projection is not injective";
    }
    if (g_sum.basis.size() != gt.basis.size() + gs.basis.size()) {
        ok = false;
        note = "dimension bookkeeping failed";
    }
    line(7, "functoriality on >= 10 composable pairs and the mono/epi swap", ok, note);
}

void criterion8(const std::vector<Corpus>& corpus) {
    bool ok = true;
    std::string note;
    for (std::size_t ci = 0; ci < corpus.size(); ++ci) {
        const Corpus& c = corpus[ci];
        for (std::size_t bi = 0; bi < c.hm.blocks.size() && ok; ++bi) {
            if (c.hm.blocks[bi].empty) continue;
            const Corep& alpha = c.hm.irr.members[bi];
            // conjugate iso with its square
            AssociatedQvb qa = associated_qvb(c.hm, c.d, alpha);
            AssociatedQvb qc = associated_qvb(c.hm, c.d, conjugate(alpha));
            ConjugateIso iso = conjugate_iso(c.hm.bundle, qc.block.sec, qa.block.sec);
            if (!iso.bijective ||
                !check_conjugate_square(c.hm, qc.block, qc.nabla, qa.block, qa.nabla, iso)) {
                ok = false;
                note = c.name + " conjugate iso block " + std::to_string(bi);
            }
            // degree-0 and degree-1 parallel-morphism squares
            auto m0 = mor_space(alpha, alpha, 0);
            if (!m0.empty()) {
                SectionMap a = morphism_image(c.hm.bundle, qa.block.sec, qa.block.sec, m0[0]);
                if (!check_morphism_image(c.hm, qa, qa, a).all_pass()) {
                    ok = false;
                    note = c.name + " degree-0 squares";
                }
            }
            auto m1 = mor_space(alpha, alpha, 1);
            if (!m1.empty()) {
                SectionMap a = morphism_image(c.hm.bundle, qa.block.sec, qa.block.sec, m1[0]);
                if (!check_morphism_image(c.hm, qa, qa, a).all_pass()) {
                    ok = false;
                    note = c.name + " degree-1 squares";
                }
            }
        }
        // tensor isos with connection squares and associativity
        for (std::size_t i = 0; i < c.hm.blocks.size() && ok; ++i)
            for (std::size_t j = 0; j < c.hm.blocks.size() && ok; ++j) {
                if (c.hm.blocks[i].empty || c.hm.blocks[j].empty) continue;
                AssociatedQvb q1 = associated_qvb(c.hm, c.d, c.hm.irr.members[i]);
                AssociatedQvb q2 = associated_qvb(c.hm, c.d, c.hm.irr.members[j]);
                Corep prod = tensor(c.hm.irr.members[i], c.hm.irr.members[j]);
                AssociatedQvb q12 = associated_qvb(c.hm, c.d, prod);
                SectionTensor st = section_tensor(c.hm, c.hm.blocks[i], c.hm.blocks[j]);
                Matrix iso = tensor_iso(c.hm, c.hm.blocks[i], c.hm.blocks[j], st,
                                        q12.block.sec);
                if (iso.rows() != iso.cols() || rank(iso) != iso.rows()) {
                    ok = false;
                    note = c.name + " tensor iso not bijective";
                    break;
                }
                TensorConnectionSpace tc =
                    tensor_connection(c.hm, c.hm.blocks[i], q1, c.hm.blocks[j], q2, st);
                const std::size_t wd = c.hm.base.dim(1);
                for (std::size_t col = 0; col < st.q.dim; ++col) {
                    Vec e(st.q.dim, CycScalar(0));
                    e[col] = CycScalar(1);
                    Vec amb = tc.oq.lift * (tc.nabla * e);
                    Vec out_amb(wd * q12.block.g(), CycScalar(0));
                    for (std::size_t a = 0; a < wd; ++a)
                        for (std::size_t c2 = 0; c2 < st.q.dim; ++c2) {
                            const CycScalar& cc = amb[a * st.q.dim + c2];
                            if (cc.is_zero()) continue;
                            Vec mapped = iso.col(c2);
                            for (std::size_t t = 0; t < q12.block.g(); ++t)
                                out_amb[a * q12.block.g() + t] += cc * mapped[t];
                        }
                    Vec lhs = q12.block.lq[1].proj * out_amb;
                    Vec mapped = iso * e;
                    Vec rhs(q12.block.lq[1].dim, CycScalar(0));
                    for (std::size_t t = 0; t < q12.block.g(); ++t)
                        if (!mapped[t].is_zero())
                            rhs = vec_add(rhs, vec_scale(mapped[t], q12.nabla.nabla.col(t)));
                    if (lhs != rhs) {
                        ok = false;
                        note = c.name + " tensor connection square";
                    }
                }
                if (ok && !tensor_associativity(c.hm, i, j, i)) {
                    ok = false;
                    note = c.name + " associativity coherence";
                }
            }
        if (!ok) break;
    }
    line(8, "conjugate and tensor natural isomorphisms with all squares exact", ok, note);
}

void criterion9(const std::vector<Corpus>& corpus) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string note;
    for (const auto& c : corpus) {
        Reconstruction rec = reconstruct(c.hm, c.d);
        if (!rec.hypotheses.all_pass() || !rec.round_trip || !rec.derivative_match) {
            ok = false;
            note = c.name;
            for (const auto& ch : rec.hypotheses.checks)
                if (!ch.pass) note += " " + ch.name;
        }
    }
    double dt = seconds_since(t0);
    if (dt >= 60.0) {
        ok = false;
        note = "runtime " + std::to_string(dt) + "s";
    }
    line(9, "reconstruction round-trip with all five hypotheses on three bundles", ok, note);
}

void criterion10() {
    bool ok = true;
    std::string note;
    for (int which = 0; which < 2; ++which) {
        auto h = std::make_shared<HopfAlgebra>(function_algebra(cyclic_table(which ? 4 : 2)));
        std::vector<AlgElem> gens;
        if (which) {
            AlgElem r(h->dim, CycScalar(0));
            r[2] = CycScalar(1);
            gens.push_back(r);
        }
        FODC f = build_fodc(h, gens);
        // germs identity on all basis pairs
        for (std::size_t i = 0; i < h->dim && ok; ++i)
            for (std::size_t t = 0; t < h->dim && ok; ++t) {
                Vec lhs = f.circ_action(1, f.germs.col(i), h->basis_elem(t));
                AlgElem prod = h->multiply(h->basis_elem(i), h->basis_elem(t));
                prod = vec_sub(prod, vec_scale(h->counit(h->basis_elem(i)),
                                               h->basis_elem(t)));
                if (lhs != f.germs * prod) {
                    ok = false;
                    note = "germs identity";
                }
            }
        VerticalForms v = vertical_forms(StarAlgebra::from_hopf(*h), regular_corep(h), f, 2);
        CheckReport rep = check_vertical(v);
        if (!rep.all_pass()) {
            ok = false;
            note = "vertical forms";
        }
        if (which) {
            Matrix r0 = point_bundle_curvature(f);
            Matrix alt = f.default_delta();
            Vec s = kron(f.germs, f.germs) * h->comultiply(f.ideal_basis[0]);
            for (std::size_t k = 0; k < f.dim; ++k)
                for (std::size_t i = 0; i < f.dim * f.dim; ++i)
                    alt.at(i, k) += CycScalar(static_cast<long long>(k + 1)) * s[i];
            if (point_bundle_curvature(f, alt) != r0) {
                ok = false;
                note = "curvature depends on the embedded differential";
            }
        }
    }
    line(10, "calculus suite: vertical differential, germs identity, delta independence", ok,
         note);
}

void criterion11() {
    bool ok = true;
    std::string note;
    const char* cli = std::getenv("QPBKIT_CLI");
    const char* data = std::getenv("QPBKIT_DATA");
    if (!cli || !data) {
        line(11, "CLI determinism and exit-status contract", false,
             "QPBKIT_CLI/QPBKIT_DATA not set");
        return;
    }
    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string base = std::string(cli) + " run --suite all --input " + data +
                       "/m2_z2.qpb --format json > /tmp/qpbkit_acc_1.json 2>/dev/null";
    std::string again = std::string(cli) + " run --suite all --input " + data +
                        "/m2_z2.qpb --format json > /tmp/qpbkit_acc_2.json 2>/dev/null";
    int rc1 = std::system(base.c_str());
    int rc2 = std::system(again.c_str());
    if (rc1 != 0 || rc2 != 0) {
        ok = false;
        note = "pass fixture returned nonzero";
    } else if (slurp("/tmp/qpbkit_acc_1.json") != slurp("/tmp/qpbkit_acc_2.json")) {
        ok = false;
        note = "consecutive runs differ";
    }
    int rc_fail = std::system((std::string(cli) + " run --suite bundle --input " + data +
                               "/broken_coaction.qpb > /dev/null 2>&1")
                                  .c_str());
    if (WEXITSTATUS(rc_fail) != 1) {
        ok = false;
        note = "fail fixture exit status " + std::to_string(WEXITSTATUS(rc_fail));
    }
    int rc_parse = std::system((std::string(cli) + " run --suite hopf --input " + data +
                                "/nongroup.qpb > /dev/null 2>&1")
                                   .c_str());
    if (WEXITSTATUS(rc_parse) != 2) {
        ok = false;
        note = "parse fixture exit status " + std::to_string(WEXITSTATUS(rc_parse));
    }
    int rc_golden = std::system((std::string(cli) + " run --suite all --input " + data +
                                 "/m2_z2.qpb --golden " + data +
                                 "/golden/m2_z2_all.json > /dev/null 2>&1")
                                    .c_str());
    if (WEXITSTATUS(rc_golden) != 0) {
        ok = false;
        note = "golden comparison failed";
    }
    line(11, "CLI determinism and exit-status contract", ok, note);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    std::vector<Corpus> corpus;
    corpus.push_back(make_corpus(0));
    corpus.push_back(make_corpus(1));
    corpus.push_back(make_corpus(2));
    criterion5(corpus);
    criterion6(corpus);
    criterion7(corpus);
    criterion8(corpus);
    criterion9(corpus);
    criterion10();
    criterion11();
    std::printf("%s\n", failures == 0 ? "acceptance: all criteria passed"
                                      : "acceptance: FAILURES PRESENT");
    return failures == 0 ? 0 : 1;
}
