#pragma once

#include <optional>

#include "magicsq/forms.hpp"

namespace magicsq {

// Witness that a form's peers split into blocks none of whose Q-linear spans
// contains the form.  Blocks hold 0-based indices into sys.forms.
struct PartitionCertificate {
    int form_index = 0;  // 0-based target form
    std::vector<std::vector<int>> blocks;
};

struct ComplexityReport {
    int n = 0;
    int s = 0;                    // system complexity: max over forms
    int witness_form = 0;         // 0-based form attaining s
    bool exhaustive = false;      // true: exact search; false: certificate bound
    std::vector<int> per_form;    // complexity of each form
    std::vector<PartitionCertificate> certificates;
    nlohmann::json to_json() const;
};

// Is target in the Q-linear span of the given rows?
bool in_linear_span(const IntMatrix& rows, const std::vector<long long>& target);

// Check that blocks partition the other t-1 forms and that no block's span
// contains the target form.
bool verify_certificate(const FormSystem& sys, const PartitionCertificate& cert,
                        std::string* why = nullptr);

// Least s such that the other forms split into s+1 span-avoiding blocks,
// by exhaustive pruned search.  Guarded to t <= 16; nullopt if s_max exceeded.
std::optional<int> i_complexity(const FormSystem& sys, int form_index, int s_max);

// Exact profile for t <= 16; for larger systems, verified two-block
// certificates plus a linear-dependence lower bound give s = 1 exactly.
ComplexityReport system_complexity(const FormSystem& sys);

// Integer row-reduced form of the nontrivial block (n >= 5): S^-1 * NT where
// S is a unimodular square column submatrix of NT.  The designated columns
// become standard basis columns; the row lattice is unchanged.
IntMatrix row_reduce_nontrivial(const FormSystem& sys,
                                std::vector<int>* designated_columns = nullptr);

}  // namespace magicsq
