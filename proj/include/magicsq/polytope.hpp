#pragma once

#include "magicsq/forms.hpp"

namespace magicsq {

// Vertices of K(1) = { x in R^d : 0 <= psi_i(x) <= 1 for all i }, found as the
// feasible solutions of d-subsets of forms pinned to 0/1 values.
struct VertexSet {
    std::vector<std::vector<Rational>> vertices;  // lexicographically sorted
    Int denominator_lcm{1};
    nlohmann::json to_json() const;
};

// Exact vertex enumeration; guarded to d <= 8 (the desk-scale cases n = 3, 4).
VertexSet enumerate_vertices(const FormSystem& sys);

// Is the point inside K(1)?  strict = open polytope (0 < psi < 1).
bool contains(const FormSystem& sys, const std::vector<Rational>& point, bool strict = false);

// Number of form constraints tight at the point, and the rank of the tight set.
int tight_rank(const FormSystem& sys, const std::vector<Rational>& point, int* tight_count = nullptr);

Int denominator_lcm_of(const std::vector<std::vector<Rational>>& pts);

}  // namespace magicsq
