#include "doctest.h"
#include "qpbkit/hopf.hpp"

using namespace qpbkit;

TEST_CASE("function algebras of small groups pass every axiom") {
    for (std::size_t n : {1u, 2u, 3u, 4u}) {
        HopfAlgebra h = function_algebra(cyclic_table(n));
        CHECK(check_hopf(h).all_pass());
    }
    HopfAlgebra s3 = function_algebra(s3_table());
    CHECK(check_hopf(s3).all_pass());
    CHECK(s3.is_commutative());
}

TEST_CASE("group algebras of small groups pass every axiom") {
    for (std::size_t n : {1u, 2u, 3u}) {
        HopfAlgebra h = group_algebra(cyclic_table(n));
        CHECK(check_hopf(h).all_pass());
    }
    HopfAlgebra s3 = group_algebra(s3_table());
    CHECK(check_hopf(s3).all_pass());
    CHECK_FALSE(s3.is_commutative());
}

TEST_CASE("tampered counit fails with a witness") {
    HopfAlgebra h = function_algebra(cyclic_table(2));
    h.counit_vec[1] = CycScalar(1);  // epsilon(d1) should be 0
    CheckReport rep = check_hopf(h);
    CHECK_FALSE(rep.all_pass());
    const CheckResult* counit = rep.find("coalgebra.counit");
    REQUIRE(counit != nullptr);
    CHECK_FALSE(counit->pass);
    CHECK_FALSE(counit->witness.empty());
}

TEST_CASE("non-group Cayley tables are rejected") {
    CayleyTable bad{{0, 1}, {1, 1}};  // second row not a translation
    CHECK_THROWS(function_algebra(bad));
    CayleyTable no_assoc{{0, 1, 2}, {1, 2, 0}, {2, 1, 0}};
    CHECK_THROWS(group_algebra(no_assoc));
}

TEST_CASE("haar functional of function algebras is the uniform measure") {
    for (std::size_t n : {2u, 3u, 4u, 6u}) {
        HopfAlgebra h = function_algebra(cyclic_table(n));
        HaarFunctional ha = haar(h);
        for (std::size_t g = 0; g < n; ++g)
            CHECK(ha.values[g] == CycScalar(Rational(1, static_cast<long long>(n))));
    }
    HopfAlgebra s3 = function_algebra(s3_table());
    HaarFunctional ha = haar(s3);
    for (std::size_t g = 0; g < 6; ++g) CHECK(ha.values[g] == CycScalar(Rational(1, 6)));
}

TEST_CASE("haar functional of group algebras is the delta at the identity") {
    HopfAlgebra h = group_algebra(cyclic_table(3));
    HaarFunctional ha = haar(h);
    CHECK(ha.values[0] == CycScalar(1));
    CHECK(ha.values[1].is_zero());
    CHECK(ha.values[2].is_zero());

    HopfAlgebra s3 = group_algebra(s3_table());
    HaarFunctional hs = haar(s3);
    CHECK(hs.values[0] == CycScalar(1));
    for (std::size_t g = 1; g < 6; ++g) CHECK(hs.values[g].is_zero());
}

TEST_CASE("haar is antipode-invariant and positive on built-ins") {
    for (bool fn : {true, false}) {
        HopfAlgebra h = fn ? function_algebra(s3_table()) : group_algebra(s3_table());
        HaarFunctional ha = haar(h);
        for (std::size_t i = 0; i < h.dim; ++i)
            CHECK(ha(h.antipode(h.basis_elem(i))) == ha(h.basis_elem(i)));
        CHECK(is_strictly_positive(haar_gram(h, ha)));
    }
}

TEST_CASE("group exponent feeds the preferred conductor") {
    CHECK(function_algebra(cyclic_table(4)).preferred_conductor == 4);
    CHECK(function_algebra(s3_table()).preferred_conductor == 6);
    CHECK(group_algebra(cyclic_table(3)).preferred_conductor == 3);
}
