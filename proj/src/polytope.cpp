#include "magicsq/polytope.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "magicsq/linalg.hpp"

namespace magicsq {

namespace {

struct LexLess {
    bool operator()(const std::vector<Rational>& a, const std::vector<Rational>& b) const {
        return lex_less(a, b);
    }
};

}  // namespace

nlohmann::json VertexSet::to_json() const {
    nlohmann::json jv = nlohmann::json::array();
    for (const auto& v : vertices) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& x : v) row.push_back(rat_to_string(x));
        jv.push_back(row);
    }
    return {{"count", vertices.size()},
            {"denominator_lcm", denominator_lcm.get_str()},
            {"vertices", jv}};
}

Int denominator_lcm_of(const std::vector<std::vector<Rational>>& pts) {
    Int l = 1;
    for (const auto& v : pts)
        for (const auto& x : v) {
            Int g;
            mpz_lcm(g.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
            l = g;
        }
    return l;
}

bool contains(const FormSystem& sys, const std::vector<Rational>& point, bool strict) {
    if ((int)point.size() != sys.d) throw ValidationError("contains: wrong point dimension");
    for (const auto& f : sys.forms) {
        Rational v(0);
        for (int j = 0; j < sys.d; ++j)
            if (f.coeffs[j] != 0) v += Rational((long)f.coeffs[j]) * point[j];
        if (strict ? (v <= 0 || v >= 1) : (v < 0 || v > 1)) return false;
    }
    return true;
}

int tight_rank(const FormSystem& sys, const std::vector<Rational>& point, int* tight_count) {
    std::vector<int> tight;
    for (int i = 0; i < sys.t; ++i) {
        Rational v(0);
        for (int j = 0; j < sys.d; ++j)
            if (sys.forms[i].coeffs[j] != 0) v += Rational((long)sys.forms[i].coeffs[j]) * point[j];
        if (v == 0 || v == 1) tight.push_back(i);
    }
    if (tight_count) *tight_count = (int)tight.size();
    IntMatrix m((int)tight.size(), sys.d);
    for (size_t r = 0; r < tight.size(); ++r)
        for (int c = 0; c < sys.d; ++c) m.at((int)r, c) = static_cast<long>(sys.forms[tight[r]].coeffs[c]);
    return rank_over_rationals(m);
}

VertexSet enumerate_vertices(const FormSystem& sys) {
    int d = sys.d, t = sys.t;
    if (d > 8)
        throw ValidationError("enumerate_vertices: guarded to d <= 8; C(t,d) * 2^d subsets of a "
                              "larger system are beyond desk scale");

    IntMatrix F(t, d);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < d; ++j) F.at(i, j) = static_cast<long>(sys.forms[i].coeffs[j]);

    std::set<std::vector<Rational>, LexLess> found;

    std::vector<int> comb(d);
    for (int i = 0; i < d; ++i) comb[i] = i;
    std::vector<Int> acol(size_t(d) * d);       // sign-normalized adjugate columns
    std::vector<Int> wcol(size_t(d) * t);       // F * acol_j
    std::vector<Int> w(t), y(d);
    for (bool more = true; more;) {
        IntMatrix M(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) M.at(r, c) = F.at(comb[r], c);
        Int det = determinant(M);
        if (det != 0) {
            // Columns of det * M^-1, normalized so the denominator D is positive.
            RatMatrix A(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) A.at(r, c) = Rational(M.at(r, c));
            Int D = abs(det);
            bool ok = true;
            for (int j = 0; j < d && ok; ++j) {
                std::vector<Rational> e(d, Rational(0));
                e[j] = 1;
                auto x = solve_exact(A, e);
                if (!x) { ok = false; break; }
                for (int r = 0; r < d; ++r) {
                    Rational v = (*x)[r] * Rational(D);  // = +-adjugate, integral
                    if (v.get_den() != 1)
                        throw ValidationError("enumerate_vertices: non-integral adjugate");
                    acol[size_t(j) * d + r] = v.get_num();
                }
            }
            if (ok) {
                for (int j = 0; j < d; ++j)
                    for (int i = 0; i < t; ++i) {
                        Int s = 0;
                        for (int r = 0; r < d; ++r)
                            if (F.at(i, r) != 0) s += F.at(i, r) * acol[size_t(j) * d + r];
                        wcol[size_t(j) * t + i] = s;
                    }
                for (auto& v : w) v = 0;
                for (auto& v : y) v = 0;
                unsigned mask = 0;
                for (unsigned k = 0;; ++k) {
                    bool inside = true;
                    for (int i = 0; i < t; ++i)
                        if (w[i] < 0 || w[i] > D) { inside = false; break; }
                    if (inside) {
                        std::vector<Rational> vert(d);
                        for (int r = 0; r < d; ++r) {
                            vert[r] = Rational(y[r]) / Rational(D);
                            vert[r].canonicalize();
                        }
                        found.insert(std::move(vert));
                    }
                    if (k + 1 == (1u << d)) break;
                    int j = std::countr_zero(k + 1);  // Gray-code bit flip
                    int sgn = (mask >> j & 1) ? -1 : 1;
                    mask ^= 1u << j;
                    for (int r = 0; r < d; ++r)
                        sgn > 0 ? y[r] += acol[size_t(j) * d + r] : y[r] -= acol[size_t(j) * d + r];
                    for (int i = 0; i < t; ++i)
                        sgn > 0 ? w[i] += wcol[size_t(j) * t + i] : w[i] -= wcol[size_t(j) * t + i];
                }
            }
        }
        // next combination
        more = false;
        for (int i = d - 1; i >= 0; --i) {
            if (comb[i] < t - d + i) {
                ++comb[i];
                for (int j = i + 1; j < d; ++j) comb[j] = comb[j - 1] + 1;
                more = true;
                break;
            }
        }
    }

    VertexSet vs;
    vs.vertices.assign(found.begin(), found.end());
    vs.denominator_lcm = denominator_lcm_of(vs.vertices);
    return vs;
}

}  // namespace magicsq
