#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "magicsq/singular_series.hpp"

using namespace magicsq;

TEST_CASE("exceptional prefactor, 3x3") {
    FormSystem sys = build_system(3);
    Rational pre = exceptional_prefactor(sys, Rational(1, 6));
    CHECK(pre == Rational(243, 8));
    // volume * beta_2 * beta_3 by hand
    CHECK(pre == Rational(1, 6) * Rational(64) * Rational(729, 256));
}

TEST_CASE("exceptional prefactor, 4x4") {
    FormSystem sys = build_system(4);
    StablePolynomial sp = stable_polynomial(sys);
    Rational vol(8389, 120960);
    Rational pre = exceptional_prefactor(sys, vol, &sp);
    CHECK(pre == Rational(34654959, 573440));
    CHECK(pre == vol * Rational(256) * Rational(111537, 32768));
}

TEST_CASE("truncated constant, 3x3") {
    FormSystem sys = build_system(3);
    SingularConstant c = singular_constant(sys, Rational(1, 6), 1000, 25);
    CHECK(c.n == 3);
    CHECK(c.p0 == 5);
    CHECK(c.p_max == 1000);
    CHECK(c.prefactor == Rational(243, 8));
    // Reference value of the truncated product at P_max = 1000.
    CHECK(c.value.substr(0, 10) == "25.8437920");
    CHECK(c.value_d == doctest::Approx(25.843792066974).epsilon(1e-11));
    CHECK(c.tail_error_estimate > 0);
    CHECK(c.tail_error_estimate < 0.01);

    SingularConstant c4 = singular_constant(sys, Rational(1, 6), 10000, 25);
    CHECK(c4.value.substr(0, 10) == "25.8195639");
}

TEST_CASE("truncated constant, 4x4") {
    FormSystem sys = build_system(4);
    StablePolynomial sp = stable_polynomial(sys);
    SingularConstant c = singular_constant(sys, Rational(8389, 120960), 10000, 25, &sp);
    CHECK(c.prefactor == Rational(34654959, 573440));
    CHECK(c.value.substr(0, 10) == "76.7578268");
}

TEST_CASE("empty stable range: the constant is the prefactor") {
    FormSystem sys = build_system(3);
    SingularConstant c = singular_constant(sys, Rational(1, 6), 3, 20);
    CHECK(c.value_d == doctest::Approx(30.375).epsilon(1e-15));
}

TEST_CASE("tail estimate shrinks like 1/P_max") {
    FormSystem sys = build_system(3);
    SingularConstant a = singular_constant(sys, Rational(1, 6), 1000, 15);
    SingularConstant b = singular_constant(sys, Rational(1, 6), 10000, 15);
    CHECK(b.tail_error_estimate < a.tail_error_estimate);
    CHECK(b.tail_error_estimate == doctest::Approx(a.tail_error_estimate / 10.0).epsilon(0.02));
}

TEST_CASE("leading-term prediction") {
    FormSystem sys = build_system(3);
    SingularConstant c = singular_constant(sys, Rational(1, 6), 1000, 15);
    CHECK_THROWS_AS(predicted_count(c, 2), ValidationError);
    double p100 = predicted_count(c, 100);
    // S * 100^3 / (log 100)^9: check against a by-hand evaluation.
    double expect = c.value_d * 1e6 / std::pow(std::log(100.0), 9);
    CHECK(p100 == doctest::Approx(expect).epsilon(1e-12));
    CHECK(predicted_count(c, 1000) > p100);
}
