#pragma once

#include "magicsq/forms.hpp"

namespace magicsq {

// For every nonempty subset of the t forms, how often each rank occurs,
// bucketed by subset size.  Over Q, or over GF(p) when mod_p is set.
struct RankSpectrum {
    int t = 0, d = 0;
    bool mod_p = false;
    unsigned long long p = 0;
    std::map<int, std::map<int, long long>> by_size;  // size -> rank -> count
    nlohmann::json to_json() const;
};

// Subset-rank sweeps are guarded to t <= 16 (2^16 subsets).
RankSpectrum rank_spectrum(const FormSystem& sys);
RankSpectrum rank_spectrum_mod_p(const FormSystem& sys, unsigned long long p);

// Smallest prime p0 such that for p >= p0 the GF(p) subset ranks match the
// Q ranks: every Hermite-form pivot of every subset matrix is < p0.
unsigned long long stability_threshold(const FormSystem& sys);

// Number of points of GF(p)^d where no form vanishes, by inclusion-exclusion
// with GF(p) subset ranks (valid for every prime, including p < p0).
Int nonvanishing_count(const FormSystem& sys, unsigned long long p);

// Same count by direct enumeration of GF(p)^d; guarded to p^d <= 2*10^7.
Int nonvanishing_count_direct(const FormSystem& sys, unsigned long long p);

// For p >= p0 the nonvanishing count is a fixed monic degree-d polynomial in
// p, with second coefficient -t.
struct StablePolynomial {
    std::vector<Int> coeffs;  // ascending, degree d
    unsigned long long p0 = 0;
    Int eval(unsigned long long p) const;
    nlohmann::json to_json() const;
};
StablePolynomial stable_polynomial(const FormSystem& sys);

// beta_p = (nonvanishing/p^d) * (p/(p-1))^t, the local density correction.
struct LocalFactor {
    unsigned long long p = 0;
    Int count;
    Rational beta;
};

// Uses inclusion-exclusion below the stability threshold and the stable
// polynomial at and above it; pass a precomputed polynomial to avoid
// re-running the subset sweeps.
LocalFactor local_factor(const FormSystem& sys, unsigned long long p,
                         const StablePolynomial* sp = nullptr);

}  // namespace magicsq
