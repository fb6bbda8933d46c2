#pragma once

#include "magicsq/local_factors.hpp"

namespace magicsq {

// Truncated singular-series constant: volume * prod_{p <= P_max} beta_p, with
// the finitely many sporadic primes (p < p0) folded into an exact rational
// prefactor and the stable range evaluated in high-precision floating point.
struct SingularConstant {
    int n = 0, d = 0, t = 0;
    Rational volume{0};
    Rational prefactor{0};  // volume * prod_{p < p0} beta_p, exact
    unsigned long long p0 = 0, p_max = 0;
    int digits = 0;
    std::string value;      // decimal, `digits` significant digits
    double value_d = 0;
    double tail_error_estimate = 0;  // relative bound C/(P_max - 1)
    nlohmann::json to_json() const;
};

Rational exceptional_prefactor(const FormSystem& sys, const Rational& volume,
                               const StablePolynomial* sp = nullptr);

SingularConstant singular_constant(const FormSystem& sys, const Rational& volume,
                                   unsigned long long p_max, int digits,
                                   const StablePolynomial* sp = nullptr);

// Leading-term prediction S * N^d / (log N)^t for the number of size-N squares.
double predicted_count(const SingularConstant& c, double N);

}  // namespace magicsq
