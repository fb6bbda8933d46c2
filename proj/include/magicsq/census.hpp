#pragma once

#include "magicsq/forms.hpp"

namespace magicsq {

// Bit-per-number primality table for 0..N.
std::vector<uint8_t> sieve_primes(long long N);

struct CensusOptions {
    long long budget = -1;     // max inner-loop operations; -1 = unlimited
    std::string resume;        // token from a previous partial run
    int jobs = 1;
};

struct CensusResult {
    int n = 0;
    long long N = 0;
    Int total{0};           // magic squares with all entries prime and <= N
    Int distinct_count{0};  // those with pairwise distinct entries
    bool complete = true;
    std::string resume_token;  // set when the budget ran out
    long long operations = 0;
    nlohmann::json to_json() const;
};

// Exhaustive prime census for n = 3 (center parametrization) or n = 4
// (skeleton search with interval pruning).  Honors the operation budget and
// returns a resumable partial result when it runs out.
CensusResult census(int n, long long N, const CensusOptions& opts = {});

// Share of integer magic squares (entries in [0, N]) with a repeated entry,
// normalized by N^(d-1); n = 3 only.
struct RepeatBound {
    long long N = 0;
    Int total{0}, repeats{0};
    double ratio = 0;  // repeats / N^(d-1)
};
RepeatBound repeated_entry_bound_check(int n, long long N);

}  // namespace magicsq
