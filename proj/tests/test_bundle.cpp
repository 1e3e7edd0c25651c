#include "doctest.h"
#include "qpbkit/base_calculus.hpp"
#include "qpbkit/sections.hpp"

using namespace qpbkit;

namespace {

HopfPtr c_z2() { return std::make_shared<HopfAlgebra>(function_algebra(cyclic_table(2))); }

Matrix unit_section(const QPBundle& b) {
    Matrix t(b.total.dim, 1);
    for (std::size_t i = 0; i < b.total.dim; ++i) t.at(i, 0) = b.total.unit[i];
    return t;
}

Corep sign_corep(HopfPtr h) {
    Corep c(h, 1);
    c.u(0, 0) = AlgElem{CycScalar(1), CycScalar(-1)};
    return c;
}

}  // namespace

TEST_CASE("checkerboard bundle passes the gate with beta-rank 8") {
    CheckReport rep;
    auto hopf = c_z2();
    StarAlgebra m2 = matrix_algebra(2);
    Corep phi(hopf, m2.dim);
    AlgElem even{CycScalar(1), CycScalar(1)};
    AlgElem odd{CycScalar(1), CycScalar(-1)};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) phi.u(i * 2 + j, i * 2 + j) = (i + j) % 2 ? odd : even;
    QPBundle b = check_bundle(m2, hopf, phi, &rep);
    CHECK(rep.all_pass());
    CHECK(b.base_basis.size() == 2);
    // the base is the diagonal subalgebra
    for (const auto& p : b.base_basis) {
        CHECK(p[1].is_zero());  // E01 component
        CHECK(p[2].is_zero());  // E10 component
    }
}

TEST_CASE("trivial bundles pass for corpus pairs") {
    for (std::size_t npts : {1u, 2u}) {
        for (bool fn : {true, false}) {
            auto h = std::make_shared<HopfAlgebra>(fn ? function_algebra(cyclic_table(2))
                                                      : group_algebra(cyclic_table(3)));
            CheckReport rep;
            StarAlgebra base = points_algebra(npts);
            QPBundle b = trivial_bundle(base, h);
            CHECK(b.total.dim == npts * h->dim);
            CHECK(b.base_basis.size() == npts);
        }
    }
}

TEST_CASE("point bundle is the Hopf algebra over one point") {
    QPBundle b = point_bundle(c_z2());
    CHECK(b.base_basis.size() == 1);
}

TEST_CASE("trivial coaction on C + C fails the beta gate") {
    auto hopf = c_z2();
    StarAlgebra a = points_algebra(2);
    Corep phi(hopf, 2);
    phi.u(0, 0) = hopf->unit;
    phi.u(1, 1) = hopf->unit;
    CheckReport rep;
    check_bundle(a, hopf, phi, &rep);
    CHECK_FALSE(rep.all_pass());
    const CheckResult* beta = rep.find("bundle.beta_surjective");
    REQUIRE(beta != nullptr);
    CHECK_FALSE(beta->pass);
    CHECK(beta->witness == "rank 2 of 4");
}

TEST_CASE("universal base calculus on points") {
    BaseCalculus b1 = universal_base_calculus(1, 2);
    CHECK(b1.dim(1) == 0);
    CHECK(b1.dim(2) == 0);

    BaseCalculus b2 = universal_base_calculus(2, 2);
    CHECK(b2.dim(0) == 2);
    CHECK(b2.dim(1) == 2);
    CHECK(b2.dim(2) == 2);
    CHECK(check_base_calculus(b2).all_pass());

    BaseCalculus b3 = universal_base_calculus(3, 3);
    CHECK(b3.dim(1) == 6);
    CHECK(b3.dim(2) == 12);
    CHECK(check_base_calculus(b3).all_pass());
    CHECK_THROWS(universal_base_calculus(2, 4));
}

TEST_CASE("sections of the checkerboard bundle") {
    QPBundle b = checkerboard_bundle();
    Corep sgn = sign_corep(b.hopf);
    SectionModule s = sections(b, sgn);
    REQUIRE(s.basis.size() == 2);
    // spanned by the matrix units E01 and E10 (indices 1 and 2)
    for (const auto& t : s.basis) {
        CHECK(t.at(0, 0).is_zero());
        CHECK(t.at(3, 0).is_zero());
    }
    // trivial corep: Gamma = M
    SectionModule st = sections(b, trivial_corep(b.hopf, 1));
    CHECK(st.basis.size() == 2);
}

TEST_CASE("frame for the checkerboard sign sections: golden values") {
    QPBundle b = checkerboard_bundle();
    SectionModule s = sections(b, sign_corep(b.hopf));
    FrameMatrices f = frame(b, s);
    CHECK(f.d() == 2);
    CHECK(f.z == Matrix::identity(2));
    CheckReport rep = check_frame(b, s, f);
    for (const auto& c : rep.checks) {
        INFO(c.name, " ", c.witness);
        CHECK(c.pass);
    }
    // e = diag(E11, E22) as a set of diagonal entries
    auto e = frame_idempotent(b, f);
    CHECK(vec_is_zero(e[0][1]));
    CHECK(vec_is_zero(e[1][0]));
    AlgElem e11(4, CycScalar(0)), e22(4, CycScalar(0));
    e11[0] = CycScalar(1);
    e22[3] = CycScalar(1);
    bool straight = e[0][0] == e11 && e[1][1] == e22;
    bool swapped = e[0][0] == e22 && e[1][1] == e11;
    CHECK((straight || swapped));
}

TEST_CASE("frame for the trivial corep is the unit section") {
    QPBundle b = checkerboard_bundle();
    SectionModule s = sections(b, trivial_corep(b.hopf, 1));
    FrameMatrices f = frame(b, s);
    CHECK(f.d() == 1);
    CHECK(f.left_gens[0] == unit_section(b));
    CHECK(f.z == Matrix::identity(1));
    CHECK(check_frame(b, s, f).all_pass());
}

TEST_CASE("frames on the trivial bundle come from dual-basis sections") {
    auto h = c_z2();
    QPBundle b = trivial_bundle(points_algebra(2), h);
    Corep sgn = sign_corep(h);
    SectionModule s = sections(b, sgn);
    REQUIRE(s.basis.size() == 2);
    FrameMatrices f = frame(b, s);
    CHECK(check_frame(b, s, f).all_pass());
    // point bundle: sign sections are one-dimensional
    QPBundle pb = point_bundle(h);
    SectionModule ps = sections(pb, sgn);
    CHECK(ps.basis.size() == 1);
    FrameMatrices pf = frame(pb, ps);
    CHECK(pf.d() == 1);
    CHECK(check_frame(pb, ps, pf).all_pass());
}

TEST_CASE("section bimodule actions stay inside the module") {
    QPBundle b = checkerboard_bundle();
    SectionModule s = sections(b, sign_corep(b.hopf));
    for (const auto& p : b.base_basis)
        for (const auto& t : s.basis) {
            CHECK_NOTHROW(section_coords(s, left_action(b, p, t)));
            CHECK_NOTHROW(section_coords(s, right_action(b, t, p)));
        }
}
