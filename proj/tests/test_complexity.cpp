#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "magicsq/complexity.hpp"
#include "magicsq/linalg.hpp"

using namespace magicsq;

TEST_CASE("linear span membership") {
    IntMatrix rows(2, 3);
    rows.at(0, 0) = 1;
    rows.at(0, 1) = 0;
    rows.at(0, 2) = 1;
    rows.at(1, 0) = 0;
    rows.at(1, 1) = 1;
    rows.at(1, 2) = 1;
    CHECK(in_linear_span(rows, {1, 1, 2}));
    CHECK(in_linear_span(rows, {2, -3, -1}));
    CHECK_FALSE(in_linear_span(rows, {0, 0, 1}));
}

TEST_CASE("3x3 profile: every form has complexity 3") {
    FormSystem sys = build_system(3);
    ComplexityReport rep = system_complexity(sys);
    CHECK(rep.n == 3);
    CHECK(rep.s == 3);
    CHECK(rep.exhaustive);
    REQUIRE((int)rep.per_form.size() == 9);
    for (int v : rep.per_form) CHECK(v == 3);
    // The certificates it returns are genuine.
    for (const auto& cert : rep.certificates) {
        std::string why;
        CHECK(verify_certificate(sys, cert, &why));
        CHECK(why.empty());
    }
}

TEST_CASE("3x3 center form: no 3-block split works") {
    FormSystem sys = build_system(3);
    // Cell 5 carries the unit parameter (1,0,0).
    REQUIRE(sys.forms[4].coeffs == std::vector<long long>{1, 0, 0});
    CHECK_FALSE(i_complexity(sys, 4, 2).has_value());
    auto s = i_complexity(sys, 4, 5);
    REQUIRE(s.has_value());
    CHECK(*s == 3);
}

TEST_CASE("4x4 profile: every form has complexity 1") {
    FormSystem sys = build_system(4);
    ComplexityReport rep = system_complexity(sys);
    CHECK(rep.s == 1);
    CHECK(rep.exhaustive);
    for (int v : rep.per_form) CHECK(v == 1);
}

TEST_CASE("larger systems: certificate-backed complexity 1") {
    for (int n = 5; n <= 8; ++n) {
        CAPTURE(n);
        FormSystem sys = build_system(n);
        ComplexityReport rep = system_complexity(sys);
        CHECK(rep.s == 1);
        CHECK_FALSE(rep.exhaustive);
        REQUIRE((int)rep.certificates.size() == sys.t);
        std::set<int> covered;
        for (const auto& cert : rep.certificates) {
            CAPTURE(cert.form_index);
            std::string why;
            CHECK(verify_certificate(sys, cert, &why));
            CHECK(why.empty());
            CHECK((int)cert.blocks.size() == 2);
            covered.insert(cert.form_index);
        }
        CHECK((int)covered.size() == sys.t);
    }
}

TEST_CASE("certificate verification rejects bad partitions") {
    FormSystem sys = build_system(5);
    PartitionCertificate cert;
    cert.form_index = 0;
    // Not a partition: indices missing.
    cert.blocks = {{1, 2}, {3, 4}};
    CHECK_FALSE(verify_certificate(sys, cert));
    // A block containing the target itself.
    cert.blocks.assign(1, std::vector<int>{});
    for (int i = 0; i < sys.t; ++i) cert.blocks[0].push_back(i);
    CHECK_FALSE(verify_certificate(sys, cert));
    // Single block holding all other forms: their span contains everything.
    cert.blocks[0].clear();
    for (int i = 1; i < sys.t; ++i) cert.blocks[0].push_back(i);
    CHECK_FALSE(verify_certificate(sys, cert));
}

TEST_CASE("exhaustive search guard") {
    FormSystem sys = build_system(5);  // t = 25 > 16
    CHECK_THROWS_AS(i_complexity(sys, 0, 3), ValidationError);
}

TEST_CASE("row reduction of the nontrivial block") {
    for (int n = 5; n <= 8; ++n) {
        CAPTURE(n);
        FormSystem sys = build_system(n);
        std::vector<int> cols;
        IntMatrix red = row_reduce_nontrivial(sys, &cols);
        IntMatrix nt = sys.nontrivial_matrix();
        REQUIRE(red.rows == nt.rows);
        REQUIRE(red.cols == nt.cols);
        REQUIRE((int)cols.size() == nt.rows);
        // Designated columns become the standard basis.
        for (int j = 0; j < (int)cols.size(); ++j)
            for (int r = 0; r < red.rows; ++r)
                CHECK(red.at(r, cols[size_t(j)]) == (r == j ? 1 : 0));
        // The row lattice is unchanged: equal Hermite forms.
        CHECK(hermite_normal_form(red) == hermite_normal_form(nt));
    }
}
