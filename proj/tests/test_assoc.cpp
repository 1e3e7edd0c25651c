#include "doctest.h"
#include "qpbkit/connection.hpp"

using namespace qpbkit;

namespace {

HorizontalModel m2_model(int cap = 2) {
    QPBundle b = checkerboard_bundle();
    BaseCalculus base = universal_base_calculus(2, cap);
    IrreducibleSet irr = irreducible_set(b.hopf);
    return horizontal_model(std::move(b), std::move(base), std::move(irr), cap);
}

HorizontalModel trivial_model(int cap = 2) {
    auto h = std::make_shared<HopfAlgebra>(function_algebra(cyclic_table(2)));
    QPBundle b = trivial_bundle(points_algebra(2), h);
    BaseCalculus base = universal_base_calculus(2, cap);
    IrreducibleSet irr = irreducible_set(h);
    return horizontal_model(std::move(b), std::move(base), std::move(irr), cap);
}

HorizontalModel point_model(int cap = 2) {
    auto h = std::make_shared<HopfAlgebra>(function_algebra(cyclic_table(2)));
    QPBundle b = point_bundle(h);
    BaseCalculus base = universal_base_calculus(1, cap);
    IrreducibleSet irr = irreducible_set(h);
    return horizontal_model(std::move(b), std::move(base), std::move(irr), cap);
}

}  // namespace

TEST_CASE("horizontal model of the checkerboard bundle") {
    HorizontalModel hm = m2_model();
    CHECK(hm.dim(0) == 4);
    // blocks: trivial (dim 2) and sign (dim 2)
    CHECK(hm.block_dim(0, 0) == 2);
    CHECK(hm.block_dim(1, 0) == 2);
    CheckReport rep = check_horizontal(hm);
    for (const auto& c : rep.checks) {
        INFO(c.name, " ", c.witness);
        CHECK(c.pass);
    }
    CHECK(sigma_trivial_is_identity(hm));
}

TEST_CASE("horizontal model of the trivial bundle") {
    HorizontalModel hm = trivial_model();
    CHECK(hm.dim(0) == 4);
    CheckReport rep = check_horizontal(hm);
    for (const auto& c : rep.checks) {
        INFO(c.name, " ", c.witness);
        CHECK(c.pass);
    }
    CHECK(sigma_trivial_is_identity(hm));
}

TEST_CASE("horizontal model of the point bundle") {
    HorizontalModel hm = point_model();
    CHECK(hm.dim(0) == 2);
    CHECK(hm.dim(1) == 0);  // no base forms over a point
    CheckReport rep = check_horizontal(hm);
    for (const auto& c : rep.checks) {
        INFO(c.name, " ", c.witness);
        CHECK(c.pass);
    }
}

TEST_CASE("derivative space of the point bundle is the zero map") {
    HorizontalModel hm = point_model();
    DerivativeSpace ds = derivative_space(hm);
    REQUIRE(ds.feasible);
    CHECK(ds.particular.d0.is_zero());
    CHECK(ds.displacements.empty());
    CHECK(check_derivative(hm, ds.particular).all_pass());
}

TEST_CASE("trivial bundle carries the trivial connection") {
    HorizontalModel hm = trivial_model();
    DerivativeSpace ds = derivative_space(hm);
    REQUIRE(ds.feasible);
    CHECK(check_derivative(hm, ds.particular).all_pass());
    // every member of the affine space passes the derivative conditions
    for (const auto& disp : ds.displacements) {
        CovariantDerivative d{ds.particular.d0 + disp};
        CHECK(check_derivative(hm, d).all_pass());
    }
}

TEST_CASE("derivative space of the checkerboard bundle") {
    HorizontalModel hm = m2_model();
    DerivativeSpace ds = derivative_space(hm);
    REQUIRE(ds.feasible);
    CHECK(check_derivative(hm, ds.particular).all_pass());
    for (const auto& disp : ds.displacements) {
        CovariantDerivative d{ds.particular.d0 + disp};
        CHECK(check_derivative(hm, d).all_pass());
    }
    MESSAGE("checkerboard displacement dimension: ", ds.displacements.size());
}

TEST_CASE("connection suite on the corpus") {
    for (int which = 0; which < 2; ++which) {
        HorizontalModel hm = which == 0 ? m2_model() : trivial_model();
        DerivativeSpace ds = derivative_space(hm);
        REQUIRE(ds.feasible);
        for (std::size_t bi = 0; bi < hm.blocks.size(); ++bi) {
            if (hm.blocks[bi].empty) continue;
            CheckReport rep = check_connection(hm, ds.particular, hm.blocks[bi]);
            for (const auto& c : rep.checks) {
                INFO("model ", which, " block ", bi, " ", c.name, " ", c.witness);
                CHECK(c.pass);
            }
        }
    }
}

TEST_CASE("point base gives vanishing induced connection") {
    HorizontalModel hm = point_model();
    DerivativeSpace ds = derivative_space(hm);
    REQUIRE(ds.feasible);
    for (std::size_t bi = 0; bi < hm.blocks.size(); ++bi) {
        if (hm.blocks[bi].empty) continue;
        InducedConnection ic = induced_connection(hm, ds.particular, hm.blocks[bi]);
        CHECK(ic.nabla.is_zero());
    }
}
