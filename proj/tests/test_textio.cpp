#include "doctest.h"
#include "qpbkit/report.hpp"
#include "qpbkit/suites.hpp"

using namespace qpbkit;

TEST_CASE("scalar parsing and canonical printing round-trip") {
    for (const char* text : {"0", "1", "-3/2", "1/2 + 1/2*z^3", "z", "2*z^2 - z", "-z^3 + 7"}) {
        CycScalar x = textio::parse_scalar(text, 8);
        CycScalar y = textio::parse_scalar(x.to_string(), 8);
        CHECK(x == y);
    }
    CHECK(textio::parse_scalar("1/2 + 1/2", 4) == CycScalar(1));
    CHECK(textio::parse_scalar("z^2", 4) == CycScalar(-1));
    CHECK_THROWS_AS(textio::parse_scalar("1/0", 4), ParseError);
    CHECK_THROWS_AS(textio::parse_scalar("q", 4), ParseError);
    CHECK_THROWS_AS(textio::parse_scalar("", 4), ParseError);
}

TEST_CASE("element expressions") {
    std::map<std::string, std::size_t> labels{{"b1", 0}, {"b2", 1}, {"b3", 2}};
    AlgElem e = textio::parse_element("b1 - b2", labels, 3, 4);
    CHECK(e[0] == CycScalar(1));
    CHECK(e[1] == CycScalar(-1));
    AlgElem f = textio::parse_element("1/2*b1 + (1/2 + 1/2*z)*b3", labels, 3, 4);
    CHECK(f[0] == CycScalar(Rational(1, 2)));
    CHECK(f[2] == CycScalar(Rational(1, 2)) + CycScalar::cyc(1, 2, 1, 4));
    CHECK_THROWS_AS(textio::parse_element("b9", labels, 3, 4), ParseError);
    CHECK_THROWS_AS(textio::parse_element("3/2", labels, 3, 4), ParseError);
}

TEST_CASE("input file sections and errors") {
    const char* content = R"(# comment
conductor = 4

[hopf]
name = G
type = function_algebra
cayley = 1 2 ; 2 1

[corep]
name = sign
dim = 1
entry = 1 1 : b1 - b2
)";
    textio::InputFile f = textio::parse_input(content);
    CHECK(f.conductor == 4);
    REQUIRE(f.find("hopf"));
    CHECK(f.find("hopf")->require("type") == "function_algebra");
    CHECK(f.find_all("corep").size() == 1);
    Scenario sc = build_scenario(f);
    CHECK(sc.hopf->dim == 2);
    REQUIRE(sc.coreps.size() == 1);
    CHECK(check_corep(sc.coreps[0].second).all_pass());

    CHECK_THROWS_AS(textio::parse_input("junk line\n"), ParseError);
    CHECK_THROWS_AS(textio::parse_input("[unclosed\n"), ParseError);
    try {
        textio::parse_input("conductor = 2\nok = broken outside\n");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("report JSON is stable and golden diff is scalar-aware") {
    Report r;
    r.input_digest = "deadbeef00000000";
    r.conductor = 8;
    r.add_check("alpha.second", true);
    r.add_check("alpha.first", false, "witness text");
    Matrix z = Matrix::identity(2);
    r.add_matrix("frame_Z", z);
    auto j1 = report_to_json(r);
    auto j2 = report_to_json(r);
    CHECK(j1.dump() == j2.dump());

    // identical reports compare equal
    CHECK(diff_golden(j1, j2).equal);

    // reordering the check list does not matter
    auto reordered = j1;
    std::swap(reordered["checks"][0], reordered["checks"][1]);
    CHECK(diff_golden(j1, reordered).equal);

    // scalar cells compare by value, not by string
    auto formatted = j1;
    formatted["data"]["frame_Z"][0][0] = "2/2";
    CHECK(diff_golden(j1, formatted).equal);

    // a genuinely different Z produces exactly one difference record
    auto changed = j1;
    changed["data"]["frame_Z"][0][0] = "2";
    GoldenDiff d = diff_golden(j1, changed);
    CHECK_FALSE(d.equal);
    CHECK(d.differences.size() == 1);
}

TEST_CASE("suite runner on a corpus-like description") {
    const char* content = R"(conductor = 2

[hopf]
name = G
type = function_algebra
cayley = 1 2 ; 2 1

[base]
universal_points = 1
degree_cap = 2

[bundle]
name = P
type = point
)";
    textio::InputFile f = textio::parse_input(content);
    Report rep = run_suite("bundle", f, content);
    CHECK(rep.all_pass());
    Report all = run_suite("all", f, content);
    CHECK(all.all_pass());
    CHECK_THROWS_AS(run_suite("bogus", f, content), ParseError);
}
