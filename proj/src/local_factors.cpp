#include "magicsq/local_factors.hpp"

#include <bit>

#include "magicsq/linalg.hpp"

namespace magicsq {

namespace {

std::vector<std::vector<long long>> form_rows(const FormSystem& sys) {
    std::vector<std::vector<long long>> rows;
    for (const auto& f : sys.forms) rows.push_back(f.coeffs);
    return rows;
}

void guard_t(const FormSystem& sys, const char* what) {
    if (sys.t > 16)
        throw ValidationError(std::string(what) +
                              ": subset sweep guarded to t <= 16 forms (2^t subsets)");
}

}  // namespace

nlohmann::json RankSpectrum::to_json() const {
    nlohmann::json js;
    for (const auto& [size, ranks] : by_size) {
        nlohmann::json jr;
        for (const auto& [rank, cnt] : ranks) jr[std::to_string(rank)] = cnt;
        js[std::to_string(size)] = jr;
    }
    nlohmann::json out{{"t", t}, {"d", d}, {"spectrum", js}};
    if (mod_p) out["p"] = p;
    return out;
}

RankSpectrum rank_spectrum(const FormSystem& sys) {
    guard_t(sys, "rank_spectrum");
    auto rows = form_rows(sys);
    RankSpectrum rs;
    rs.t = sys.t;
    rs.d = sys.d;
    for (unsigned mask = 1; mask < (1u << sys.t); ++mask) {
        std::vector<std::vector<long long>> sub;
        for (int i = 0; i < sys.t; ++i)
            if (mask >> i & 1) sub.push_back(rows[i]);
        ++rs.by_size[std::popcount(mask)][rank_small(sub)];
    }
    return rs;
}

RankSpectrum rank_spectrum_mod_p(const FormSystem& sys, unsigned long long p) {
    guard_t(sys, "rank_spectrum_mod_p");
    if (!is_prime_u64(p)) throw ValidationError("rank_spectrum_mod_p: p must be prime");
    auto rows = form_rows(sys);
    RankSpectrum rs;
    rs.t = sys.t;
    rs.d = sys.d;
    rs.mod_p = true;
    rs.p = p;
    for (unsigned mask = 1; mask < (1u << sys.t); ++mask) {
        std::vector<std::vector<long long>> sub;
        for (int i = 0; i < sys.t; ++i)
            if (mask >> i & 1) sub.push_back(rows[i]);
        ++rs.by_size[std::popcount(mask)][rank_small_mod_p(sub, (long long)p)];
    }
    return rs;
}

unsigned long long stability_threshold(const FormSystem& sys) {
    guard_t(sys, "stability_threshold");
    auto rows = form_rows(sys);
    Int max_pivot = 1;
    for (unsigned mask = 1; mask < (1u << sys.t); ++mask) {
        IntMatrix m(std::popcount(mask), sys.d);
        int r = 0;
        for (int i = 0; i < sys.t; ++i) {
            if (!(mask >> i & 1)) continue;
            for (int c = 0; c < sys.d; ++c) m.at(r, c) = static_cast<long>(rows[i][c]);
            ++r;
        }
        IntMatrix h = hermite_normal_form(m);
        for (int rr = 0; rr < h.rows; ++rr)
            for (int cc = 0; cc < h.cols; ++cc) {
                if (h.at(rr, cc) != 0) {  // pivot: first nonzero in the row
                    if (h.at(rr, cc) > max_pivot) max_pivot = h.at(rr, cc);
                    cc = h.cols;
                }
            }
    }
    unsigned long long p = max_pivot.get_ui() + 1;
    while (!is_prime_u64(p)) ++p;
    return p;
}

Int nonvanishing_count(const FormSystem& sys, unsigned long long p) {
    guard_t(sys, "nonvanishing_count");
    if (!is_prime_u64(p)) throw ValidationError("nonvanishing_count: p must be prime");
    auto rows = form_rows(sys);
    Int pz(static_cast<unsigned long>(p));
    Int total = 0;
    mpz_pow_ui(total.get_mpz_t(), pz.get_mpz_t(), (unsigned long)sys.d);  // empty subset
    for (unsigned mask = 1; mask < (1u << sys.t); ++mask) {
        std::vector<std::vector<long long>> sub;
        for (int i = 0; i < sys.t; ++i)
            if (mask >> i & 1) sub.push_back(rows[i]);
        int rank = rank_small_mod_p(sub, (long long)p);
        Int term;
        mpz_pow_ui(term.get_mpz_t(), pz.get_mpz_t(), (unsigned long)(sys.d - rank));
        if (std::popcount(mask) % 2)
            total -= term;
        else
            total += term;
    }
    return total;
}

Int nonvanishing_count_direct(const FormSystem& sys, unsigned long long p) {
    if (!is_prime_u64(p)) throw ValidationError("nonvanishing_count_direct: p must be prime");
    double size = 1;
    for (int i = 0; i < sys.d; ++i) size *= double(p);
    if (size > 2e7)
        throw ValidationError("nonvanishing_count_direct: p^d too large for direct enumeration");
    auto rows = form_rows(sys);
    long long pp = (long long)p;
    std::vector<long long> x(size_t(sys.d), 0);
    Int count = 0;
    for (;;) {
        bool all_nonzero = true;
        for (const auto& f : rows) {
            long long v = 0;
            for (int j = 0; j < sys.d; ++j)
                if (f[j]) v += f[j] * x[size_t(j)];
            if (((v % pp) + pp) % pp == 0) { all_nonzero = false; break; }
        }
        if (all_nonzero) ++count;
        int j = 0;
        while (j < sys.d && ++x[size_t(j)] == pp) x[size_t(j++)] = 0;
        if (j == sys.d) break;
    }
    return count;
}

Int StablePolynomial::eval(unsigned long long p) const {
    Int x(static_cast<unsigned long>(p));
    Int acc = 0;
    for (int k = (int)coeffs.size() - 1; k >= 0; --k) acc = acc * x + coeffs[size_t(k)];
    return acc;
}

nlohmann::json StablePolynomial::to_json() const {
    nlohmann::json jc = nlohmann::json::array();
    for (const auto& c : coeffs) jc.push_back(c.get_str());
    return {{"coeffs", jc}, {"p0", p0}};
}

StablePolynomial stable_polynomial(const FormSystem& sys) {
    guard_t(sys, "stable_polynomial");
    RankSpectrum rs = rank_spectrum(sys);
    StablePolynomial sp;
    sp.coeffs.assign(size_t(sys.d) + 1, Int(0));
    sp.coeffs[size_t(sys.d)] = 1;  // empty subset contributes p^d
    for (const auto& [size, ranks] : rs.by_size)
        for (const auto& [rank, cnt] : ranks) {
            Int term(static_cast<long>(cnt));
            if (size % 2) term = -term;
            sp.coeffs[size_t(sys.d - rank)] += term;
        }
    sp.p0 = stability_threshold(sys);
    if (sp.coeffs[size_t(sys.d)] != 1 ||
        (sys.d >= 1 && sp.coeffs[size_t(sys.d) - 1] != -sys.t))
        throw ValidationError("stable_polynomial: leading coefficients violate 1, -t");
    return sp;
}

LocalFactor local_factor(const FormSystem& sys, unsigned long long p,
                         const StablePolynomial* sp) {
    if (!is_prime_u64(p)) throw ValidationError("local_factor: p must be prime");
    StablePolynomial own;
    if (!sp) {
        own = stable_polynomial(sys);
        sp = &own;
    }
    LocalFactor lf;
    lf.p = p;
    lf.count = (p >= sp->p0) ? sp->eval(p) : nonvanishing_count(sys, p);
    Int pz(static_cast<unsigned long>(p));
    Int pd, pt, qt;
    mpz_pow_ui(pd.get_mpz_t(), pz.get_mpz_t(), (unsigned long)sys.d);
    mpz_pow_ui(pt.get_mpz_t(), pz.get_mpz_t(), (unsigned long)sys.t);
    Int q = pz - 1;
    mpz_pow_ui(qt.get_mpz_t(), q.get_mpz_t(), (unsigned long)sys.t);
    lf.beta = Rational(lf.count * pt) / Rational(pd * qt);
    lf.beta.canonicalize();
    return lf;
}

}  // namespace magicsq
