#include "magicsq/singular_series.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>

#include "magicsq/linalg.hpp"

namespace magicsq {

namespace {

std::vector<unsigned long long> primes_up_to(unsigned long long limit) {
    std::vector<unsigned long long> ps;
    if (limit < 2) return ps;
    std::vector<uint8_t> sieve(size_t(limit) + 1, 1);
    sieve[0] = sieve[1] = 0;
    for (unsigned long long i = 2; i * i <= limit; ++i)
        if (sieve[size_t(i)])
            for (unsigned long long j = i * i; j <= limit; j += i) sieve[size_t(j)] = 0;
    for (unsigned long long i = 2; i <= limit; ++i)
        if (sieve[size_t(i)]) ps.push_back(i);
    return ps;
}

Rational beta_from_count(const FormSystem& sys, unsigned long long p, const Int& count) {
    Int pz(static_cast<unsigned long>(p));
    Int pd, pt, qt;
    mpz_pow_ui(pd.get_mpz_t(), pz.get_mpz_t(), (unsigned long)sys.d);
    mpz_pow_ui(pt.get_mpz_t(), pz.get_mpz_t(), (unsigned long)sys.t);
    Int q = pz - 1;
    mpz_pow_ui(qt.get_mpz_t(), q.get_mpz_t(), (unsigned long)sys.t);
    Rational b = Rational(count * pt) / Rational(pd * qt);
    b.canonicalize();
    return b;
}

}  // namespace

nlohmann::json SingularConstant::to_json() const {
    return {{"n", n},
            {"volume", rat_to_string(volume)},
            {"prefactor", rat_to_string(prefactor)},
            {"p0", p0},
            {"p_max", p_max},
            {"digits", digits},
            {"value", value},
            {"value_double", value_d},
            {"tail_error_estimate", tail_error_estimate}};
}

Rational exceptional_prefactor(const FormSystem& sys, const Rational& volume,
                               const StablePolynomial* sp) {
    StablePolynomial own;
    if (!sp) {
        own = stable_polynomial(sys);
        sp = &own;
    }
    Rational pref = volume;
    for (unsigned long long p = 2; p < sp->p0; ++p) {
        if (!is_prime_u64(p)) continue;
        pref *= local_factor(sys, p, sp).beta;
    }
    pref.canonicalize();
    return pref;
}

SingularConstant singular_constant(const FormSystem& sys, const Rational& volume,
                                   unsigned long long p_max, int digits,
                                   const StablePolynomial* sp) {
    if (digits < 1 || digits > 10000) throw ValidationError("singular_constant: bad digits");
    StablePolynomial own;
    if (!sp) {
        own = stable_polynomial(sys);
        sp = &own;
    }
    SingularConstant sc;
    sc.n = sys.n;
    sc.d = sys.d;
    sc.t = sys.t;
    sc.volume = volume;
    sc.p0 = sp->p0;
    sc.p_max = p_max;
    sc.digits = digits;
    sc.prefactor = exceptional_prefactor(sys, volume, sp);

    mpfr_prec_t prec = mpfr_prec_t((digits + 15) * 3.3219280948873626) + 8;
    mpfr_t acc, term;
    mpfr_init2(acc, prec);
    mpfr_init2(term, prec);
    mpfr_set_q(acc, sc.prefactor.get_mpq_t(), MPFR_RNDN);
    if (p_max >= sp->p0) {
        for (unsigned long long p : primes_up_to(p_max)) {
            if (p < sp->p0) continue;
            Rational b = beta_from_count(sys, p, sp->eval(p));
            mpfr_set_q(term, b.get_mpq_t(), MPFR_RNDN);
            mpfr_mul(acc, acc, term, MPFR_RNDN);
        }
    }
    sc.value_d = mpfr_get_d(acc, MPFR_RNDN);
    {
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*Rg", digits, acc);
        sc.value = s;
        mpfr_free_str(s);
    }
    mpfr_clear(acc);
    mpfr_clear(term);

    // Tail bound: |beta_p - 1| p^2 is bounded; its sup C over the first
    // thousand stable primes bounds sum_{p > P} |beta_p - 1| by C/(P-1),
    // a relative (log-scale) error bound on the truncated product.
    double C = 0;
    unsigned long long probe = std::max<unsigned long long>(1000, sp->p0 + 1);
    for (unsigned long long p : primes_up_to(probe)) {
        if (p < sp->p0) continue;
        Rational b = beta_from_count(sys, p, sp->eval(p));
        Rational dev = b - 1;
        if (dev < 0) dev = -dev;
        Rational r = dev * Rational(static_cast<long>(p * p));
        C = std::max(C, r.get_d());
    }
    sc.tail_error_estimate = p_max >= 2 ? C / double(p_max - 1) : C;
    return sc;
}

double predicted_count(const SingularConstant& c, double N) {
    if (N <= 2) throw ValidationError("predicted_count: N must exceed 2");
    return c.value_d * std::pow(N, c.d) / std::pow(std::log(N), c.t);
}

}  // namespace magicsq
