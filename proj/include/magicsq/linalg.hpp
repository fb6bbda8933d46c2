#pragma once

#include <optional>
#include <utility>

#include "magicsq/matrix.hpp"

namespace magicsq {

// Rank over the rationals via fraction-free (Bareiss) elimination.
int rank_over_rationals(const IntMatrix& m);

// Row-style Hermite normal form under unimodular row operations:
// pivots are positive, each pivot lies strictly to the right of the one
// above, entries above a pivot are reduced into [0, pivot), zero rows last.
IntMatrix hermite_normal_form(const IntMatrix& m);

// Signed determinant via fraction-free elimination (throws if not square).
Int determinant(const IntMatrix& m);

// Rank of m over GF(p).  Rejects non-prime p.
int rank_mod_p(const IntMatrix& m, unsigned long long p);

// Solve A x = b exactly over Q; nullopt when the system is inconsistent.
// A must be square and nonsingular-or-consistent; throws on shape mismatch.
std::optional<std::vector<Rational>> solve_exact(const RatMatrix& A, const std::vector<Rational>& b);

// Unique polynomial of degree <= k through k+1 points (x distinct),
// returned as coefficients c[0..k], constant term first.
std::vector<Rational> interpolate_poly(const std::vector<std::pair<long long, Rational>>& points,
                                       int k);

bool is_prime_u64(unsigned long long n);

// Fraction-free rank in plain int64; for tiny matrices whose minors provably
// fit (the t <= 16 form systems have entries in [-2, 2]).
int rank_small(std::vector<std::vector<long long>> w);

// Rank over GF(p) in plain int64 (p < 2^31).
int rank_small_mod_p(std::vector<std::vector<long long>> w, long long p);

}  // namespace magicsq
