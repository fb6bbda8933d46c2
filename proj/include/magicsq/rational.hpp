#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace magicsq {

using Int = mpz_class;
using Rational = mpq_class;

// Raised on bad user input or broken preconditions; the CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a computation exceeds its operation budget; the CLI maps this to exit code 3.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "p/q" for non-integers, plain "p" for integers.
inline std::string rat_to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw ValidationError("cannot parse rational: " + s);
    r.canonicalize();
    return r;
}

inline bool lex_less(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return a.size() < b.size();
}

}  // namespace magicsq
