#pragma once

#include "magicsq/forms.hpp"

namespace magicsq::detail {

// Shared machinery of the lattice-point counter and the prime census, stated
// in coordinates where variable j is the value of skeleton cell j (the
// skeleton block is unimodular, so that change of basis is integral).  Each
// variable is then itself a form, confined to [L, N]; the dependent forms
// appear in a variable order that completes them early, with per-depth
// rest-ranges giving exact feasible intervals for each variable.
struct CountPlan {
    int d = 0, nf = 0;
    long long N = 0, L = 0;  // count points with L <= psi_i <= N for all i
    std::vector<int> order;                                // variable per depth
    std::vector<std::vector<long long>> coef;              // [depth][form]
    std::vector<std::vector<long long>> lo_rest, hi_rest;  // [depth][form]
};

CountPlan make_count_plan(const FormSystem& sys, long long N, long long L = 0);

// Feasible [lo, hi] for the depth-k variable given partial form values;
// false when the subtree is empty.  Exact at the last depth.
bool depth_interval(const CountPlan& p, int k, const std::vector<long long>& partial,
                    long long& lo, long long& hi);

}  // namespace magicsq::detail
