// Acceptance gate: nine end-to-end criteria, one pass/fail line each.
// Usage: acceptance <data-dir> [cache-dir]
// Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "magicsq/census.hpp"
#include "magicsq/complexity.hpp"
#include "magicsq/ehrhart.hpp"
#include "magicsq/linalg.hpp"
#include "magicsq/local_factors.hpp"
#include "magicsq/polytope.hpp"
#include "magicsq/singular_series.hpp"

using namespace magicsq;

namespace {

std::filesystem::path g_data_dir;
std::filesystem::path g_cache_dir;

// State shared between criteria so late criteria reuse earlier heavy work.
std::optional<Quasipolynomial> g_qp3, g_qp4;
std::optional<StablePolynomial> g_sp4;
std::optional<CountTable> g_table4;

CountTable& table4() {
    if (!g_table4) {
        FormSystem sys = build_system(4);
        if (!g_cache_dir.empty()) {
            g_table4 = CountTable::load(g_cache_dir, sys);
        } else {
            g_table4 = CountTable{};
        }
        g_table4->n = 4;
        g_table4->system_hash = sys.content_hash();
    }
    return *g_table4;
}

const Quasipolynomial& qp4() {
    if (!g_qp4) {
        g_qp4 = interpolate_quasipolynomial(build_system(4), 6, &table4());
        if (!g_cache_dir.empty()) table4().save(g_cache_dir);
    }
    return *g_qp4;
}

const StablePolynomial& sp4() {
    if (!g_sp4) g_sp4 = stable_polynomial(build_system(4));
    return *g_sp4;
}

const long E3[] = {1, 2, 7, 12, 25, 38, 63, 88};
const long E4[] = {1, 34, 621, 5400, 30277, 125794, 423097, 1214992, 3089369};

bool criterion_basis(std::ostream& err) {
    for (int n = 3; n <= 10; ++n) {
        std::string why;
        if (!verify_z_basis(build_system(n), &why)) {
            err << "n=" << n << " failed verification: " << why;
            return false;
        }
    }
    const long long expect4[16][8] = {
        {1, 0, 0, 0, 0, 0, 0, 0},  {0, 1, 0, 0, 0, 0, 0, 0},
        {0, 0, 1, 0, 0, 0, 0, 0},  {0, 0, 0, 1, 0, 0, 0, 0},
        {0, 0, 0, 0, 1, 0, 0, 0},  {0, 0, 0, 0, 0, 1, 0, 0},
        {0, 0, 0, 0, 0, 0, 1, 0},  {1, 1, 1, 1, -1, -1, -1, 0},
        {0, 0, 0, 0, 0, 0, 0, 1},  {1, 0, 0, -1, 1, 0, -1, 1},
        {0, 1, 1, 2, -1, -1, 0, -1}, {0, 0, 0, 0, 0, 1, 1, -1},
        {0, 1, 1, 1, -1, 0, 0, -1}, {0, 0, 1, 2, -1, -1, 1, -1},
        {1, 0, -1, -1, 1, 1, -1, 1}, {0, 0, 0, -1, 1, 0, 0, 1}};
    FormSystem sys4 = build_system(4);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 8; ++j)
            if (sys4.forms[size_t(i)].coeffs[size_t(j)] != expect4[i][j]) {
                err << "4x4 coefficient matrix mismatch at form " << i + 1
                    << ", column " << j + 1;
                return false;
            }
    return true;
}

bool criterion_complexity(std::ostream& err) {
    FormSystem sys3 = build_system(3);
    ComplexityReport r3 = system_complexity(sys3);
    if (r3.s != 3 || !r3.exhaustive) {
        err << "3x3: expected exhaustive s=3, got s=" << r3.s;
        return false;
    }
    // The center form (1,0,0) admits no split into three span-avoiding blocks.
    if (sys3.forms[4].coeffs != std::vector<long long>{1, 0, 0}) {
        err << "3x3: center form is not (1,0,0)";
        return false;
    }
    if (i_complexity(sys3, 4, 2).has_value()) {
        err << "3x3: center form complexity unexpectedly <= 2";
        return false;
    }
    ComplexityReport r4 = system_complexity(build_system(4));
    if (r4.s != 1 || !r4.exhaustive) {
        err << "4x4: expected exhaustive s=1, got s=" << r4.s;
        return false;
    }
    for (int n = 5; n <= 8; ++n) {
        FormSystem sys = build_system(n);
        ComplexityReport rep = system_complexity(sys);
        if (rep.s != 1) {
            err << "n=" << n << ": expected s=1, got " << rep.s;
            return false;
        }
        if ((int)rep.certificates.size() != sys.t) {
            err << "n=" << n << ": missing certificates";
            return false;
        }
        for (const auto& cert : rep.certificates) {
            std::string why;
            if (!verify_certificate(sys, cert, &why)) {
                err << "n=" << n << " form " << cert.form_index
                    << ": bad certificate: " << why;
                return false;
            }
        }
    }
    return true;
}

bool criterion_ehrhart3(std::ostream& err) {
    FormSystem sys = build_system(3);
    g_qp3 = interpolate_quasipolynomial(sys, 2);
    const Quasipolynomial& qp = *g_qp3;
    std::vector<std::vector<Rational>> expect = {
        {Rational(1), Rational(4, 3), Rational(1, 2), Rational(1, 6)},
        {Rational(1, 2), Rational(5, 6), Rational(1, 2), Rational(1, 6)}};
    if (qp.period != 2 || qp.branches != expect) {
        err << "two-branch formula mismatch";
        return false;
    }
    for (long long N = 0; N <= 7; ++N)
        if (count_points(sys, N) != E3[N]) {
            err << "E(" << N << ") != " << E3[N];
            return false;
        }
    return true;
}

bool criterion_ehrhart4(std::ostream& err) {
    FormSystem sys = build_system(4);
    CountTable& table = table4();
    for (long long N = 0; N <= 8; ++N) {
        Int c = count_points(sys, N);
        table.record(N, c, "direct");
        if (c != E4[N]) {
            err << "direct E(" << N << ") = " << c.get_str() << ", expected " << E4[N];
            return false;
        }
    }
    if (!g_cache_dir.empty()) table.save(g_cache_dir);
    const Quasipolynomial& qp = qp4();
    if (qp.degree != 8 || qp.period != 6 || qp.branches.size() != 6) {
        err << "expected a degree-8, period-6 quasipolynomial";
        return false;
    }
    if (qp.leading_coefficient() != Rational(8389, 120960) ||
        volume(qp) != Rational(8389, 120960)) {
        err << "leading coefficient != 8389/120960";
        return false;
    }
    // All six branches, constant term first.  Residues 0 and 4 share a branch,
    // so do 1 and 3; residues 2 and 5 differ from those only in the constant.
    auto B = [](std::initializer_list<std::string> coeffs) {
        std::vector<Rational> out;
        for (const auto& s : coeffs) out.push_back(parse_rational(s));
        return out;
    };
    std::vector<Rational> b0 = B({"1", "1067/315", "143/21", "14371/1620", "8663/1080",
                                  "10877/2160", "5531/2592", "8389/15120", "8389/120960"});
    std::vector<Rational> b1 = B({"37/128", "13607/5040", "4303/672", "57079/6480",
                                  "69169/8640", "10877/2160", "5531/2592", "8389/15120",
                                  "8389/120960"});
    std::vector<Rational> b2 = b0;
    b2[0] = Rational(97, 81);
    std::vector<Rational> b5 = b1;
    b5[0] = Rational(5045, 10368);
    std::vector<std::vector<Rational>> expect = {b0, b1, b2, b1, b0, b5};
    for (int r = 0; r < 6; ++r)
        if (qp.branches[size_t(r)] != expect[size_t(r)]) {
            err << "branch for residue " << r << " mismatches";
            return false;
        }
    if (qp.eval(9) != 7130034) {
        err << "qp(9) != 7130034";
        return false;
    }
    if (qp.eval(13) != 103807042) {
        err << "qp(13) != 103807042";
        return false;
    }
    return true;
}

bool criterion_vertices(std::ostream& err) {
    VertexSet v3 = enumerate_vertices(build_system(3));
    std::vector<std::vector<Rational>> expect3;
    for (const auto& line : std::vector<std::vector<std::string>>{
             {"0", "0", "0"}, {"1/2", "-1/2", "0"}, {"1/2", "0", "-1/2"},
             {"1/2", "0", "1/2"}, {"1/2", "1/2", "0"}, {"1", "0", "0"}}) {
        std::vector<Rational> pt;
        for (const auto& s : line) pt.push_back(parse_rational(s));
        expect3.push_back(pt);
    }
    if (v3.vertices != expect3 || v3.denominator_lcm != 2) {
        err << "3x3 vertex set mismatch";
        return false;
    }

    VertexSet v4 = enumerate_vertices(build_system(4));
    if (v4.vertices.size() != 178 || v4.denominator_lcm != 6) {
        err << "4x4: got " << v4.vertices.size() << " vertices, lcm "
            << v4.denominator_lcm.get_str();
        return false;
    }
    std::ifstream golden(g_data_dir / "k4_vertices_expected.txt");
    if (!golden) {
        err << "cannot open golden vertex list in " << g_data_dir;
        return false;
    }
    std::vector<std::vector<Rational>> expect4;
    std::string line;
    while (std::getline(golden, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::vector<Rational> pt;
        std::string tok;
        while (is >> tok) pt.push_back(parse_rational(tok));
        expect4.push_back(pt);
    }
    if (v4.vertices != expect4) {
        err << "4x4 vertex list differs from the golden file";
        return false;
    }
    return true;
}

bool criterion_local_factors(std::ostream& err) {
    FormSystem sys3 = build_system(3);
    FormSystem sys4 = build_system(4);

    RankSpectrum rs3 = rank_spectrum(sys3);
    auto at = [](const RankSpectrum& rs, int size, int rank) {
        auto it = rs.by_size.find(size);
        if (it == rs.by_size.end()) return 0LL;
        auto jt = it->second.find(rank);
        return jt == it->second.end() ? 0LL : jt->second;
    };
    const std::vector<std::tuple<int, int, long long>> spectrum3 = {
        {1, 1, 9},  {2, 2, 36}, {3, 2, 8},  {3, 3, 76}, {4, 3, 126},
        {5, 3, 126}, {6, 3, 84}, {7, 3, 36}, {8, 3, 9},  {9, 3, 1}};
    for (auto [size, rank, cnt] : spectrum3)
        if (at(rs3, size, rank) != cnt) {
            err << "3x3 spectrum: size " << size << " rank " << rank << " != " << cnt;
            return false;
        }
    RankSpectrum rs4 = rank_spectrum(sys4);
    const std::vector<std::tuple<int, int, long long>> spectrum4 = {
        {1, 1, 16},   {2, 2, 120},  {3, 3, 560},  {4, 3, 10},   {4, 4, 1810},
        {5, 4, 120},  {5, 5, 4248}, {6, 5, 708},  {6, 6, 7300}, {7, 5, 32},
        {7, 6, 2656}, {7, 7, 8752}, {8, 6, 433},  {8, 7, 6553}, {8, 8, 5884},
        {9, 6, 32},   {9, 7, 2656}, {9, 8, 8752}, {10, 7, 708}, {10, 8, 7300},
        {11, 7, 120}, {11, 8, 4248}, {12, 7, 10}, {12, 8, 1810}, {13, 8, 560},
        {14, 8, 120}, {15, 8, 16},  {16, 8, 1}};
    for (auto [size, rank, cnt] : spectrum4)
        if (at(rs4, size, rank) != cnt) {
            err << "4x4 spectrum: size " << size << " rank " << rank << " != " << cnt;
            return false;
        }

    StablePolynomial sp3 = stable_polynomial(sys3);
    std::vector<long> want3 = {-20, 28, -9, 1};  // p^3 - 9p^2 + 28p - 20
    for (int k = 0; k < 4; ++k)
        if (sp3.coeffs[size_t(k)] != want3[size_t(k)]) {
            err << "3x3 stable polynomial mismatch";
            return false;
        }
    std::vector<long> want4 = {1539, -4257, 5045, -3572, 1690, -550, 120, -16, 1};
    for (int k = 0; k < 9; ++k)
        if (sp4().coeffs[size_t(k)] != want4[size_t(k)]) {
            err << "4x4 stable polynomial mismatch";
            return false;
        }
    if (sp3.p0 != 5 || sp4().p0 != 5) {
        err << "stability threshold != 5";
        return false;
    }

    if (local_factor(sys3, 2, &sp3).beta != Rational(64) ||
        local_factor(sys3, 3, &sp3).beta != Rational(729, 256)) {
        err << "3x3 beta_2/beta_3 mismatch";
        return false;
    }
    if (local_factor(sys4, 2, &sp4()).beta != Rational(256) ||
        local_factor(sys4, 3, &sp4()).beta != Rational(111537, 32768)) {
        err << "4x4 beta_2/beta_3 mismatch";
        return false;
    }

    // Inclusion-exclusion equals direct enumeration whenever p^d <= 10^6.
    for (unsigned long long p = 2; p <= 97; ++p) {
        if (!is_prime_u64(p)) continue;
        if (nonvanishing_count(sys3, p) != nonvanishing_count_direct(sys3, p)) {
            err << "3x3: inclusion-exclusion != direct at p=" << p;
            return false;
        }
    }
    for (unsigned long long p : {2ULL, 3ULL, 5ULL})
        if (nonvanishing_count(sys4, p) != nonvanishing_count_direct(sys4, p)) {
            err << "4x4: inclusion-exclusion != direct at p=" << p;
            return false;
        }
    return true;
}

bool criterion_singular_series(std::ostream& err) {
    FormSystem sys3 = build_system(3);
    if (exceptional_prefactor(sys3, Rational(1, 6)) != Rational(243, 8)) {
        err << "3x3 prefactor != 243/8";
        return false;
    }
    FormSystem sys4 = build_system(4);
    Rational vol4 = volume(qp4());
    if (exceptional_prefactor(sys4, vol4, &sp4()) != Rational(34654959, 573440)) {
        err << "4x4 prefactor != 34654959/573440";
        return false;
    }
    SingularConstant c3 = singular_constant(sys3, Rational(1, 6), 100000, 12);
    if (std::fabs(c3.value_d - 25.818) > 0.0005) {
        err << "3x3 constant " << c3.value << " does not round to 25.818";
        return false;
    }
    if (!(c3.tail_error_estimate > 0) || c3.tail_error_estimate >= 1e-3) {
        err << "3x3 tail estimate " << c3.tail_error_estimate << " not below 1e-3";
        return false;
    }
    SingularConstant c4 = singular_constant(sys4, vol4, 100000, 12, &sp4());
    if (std::fabs(c4.value_d - 76.758) > 0.0005) {
        err << "4x4 constant " << c4.value << " does not round to 76.758";
        return false;
    }
    if (!(c4.tail_error_estimate > 0) || c4.tail_error_estimate >= 1e-3) {
        err << "4x4 tail estimate " << c4.tail_error_estimate << " not below 1e-3";
        return false;
    }
    return true;
}

bool criterion_reciprocity(std::ostream& err) {
    FormSystem sys4 = build_system(4);
    for (long long N = 2; N <= 10; ++N)
        if (interior_count(sys4, N) != count_points(sys4, N - 2)) {
            err << "4x4: interior(" << N << ") != count(" << N - 2 << ")";
            return false;
        }
    const Quasipolynomial& qp = qp4();
    for (long long N = 2; N <= 28; ++N)
        if (qp.eval(-N) != qp.eval(N - 2)) {
            err << "4x4: qp(-" << N << ") != qp(" << N - 2 << ")";
            return false;
        }
    if (!g_qp3) g_qp3 = interpolate_quasipolynomial(build_system(3), 2);
    for (long long N = 2; N <= 10; ++N)
        if (g_qp3->eval(-N) != -g_qp3->eval(N - 2)) {
            err << "3x3: qp(-" << N << ") != -qp(" << N - 2 << ")";
            return false;
        }
    return true;
}

// Independent of the census implementation: a plain triple loop over the
// center and two offsets, checking all nine entries against the sieve.
std::pair<Int, Int> census3_oracle(long long N) {
    auto sieve = sieve_primes(N);
    auto ok = [&](long long v) { return v >= 0 && v <= N && sieve[size_t(v)]; };
    Int total = 0, distinct = 0;
    for (long long a = 2; a <= N; ++a) {
        if (!sieve[size_t(a)]) continue;
        long long lim = std::min(a, N - a);
        for (long long b = -lim; b <= lim; ++b) {
            if (!ok(a + b) || !ok(a - b)) continue;
            for (long long c = -lim; c <= lim; ++c) {
                if (!ok(a + c) || !ok(a - c) || !ok(a + b + c) || !ok(a - b - c) ||
                    !ok(a + b - c) || !ok(a - b + c))
                    continue;
                total += 1;
                long long e[9] = {0, b, -b, c, -c, b + c, -(b + c), b - c, -(b - c)};
                std::sort(e, e + 9);
                bool dup = false;
                for (int i = 1; i < 9; ++i)
                    if (e[i] == e[i - 1]) { dup = true; break; }
                if (!dup) distinct += 1;
            }
        }
    }
    return {total, distinct};
}

bool criterion_census(std::ostream& err) {
    for (long long N : {2LL, 100LL, 1000LL}) {
        CensusResult r = census(3, N);
        auto [total, distinct] = census3_oracle(N);
        if (r.total != total || r.distinct_count != distinct) {
            err << "census(3," << N << ") = (" << r.total.get_str() << ", "
                << r.distinct_count.get_str() << "), oracle says (" << total.get_str()
                << ", " << distinct.get_str() << ")";
            return false;
        }
    }
    CensusResult r2 = census(3, 2);
    if (r2.total != 1 || r2.distinct_count != 0) {
        err << "census(3,2) != (1, 0)";
        return false;
    }
    // Distinct share is nondecreasing at N = 100, 1000, 10^4.
    double prev = -1;
    for (long long N : {100LL, 1000LL, 10000LL}) {
        CensusResult r = census(3, N);
        double frac = r.total == 0 ? 0
                                   : Rational(r.distinct_count).get_d() /
                                         Rational(r.total).get_d();
        if (frac < prev) {
            err << "distinct share decreased at N=" << N;
            return false;
        }
        prev = frac;
    }
    // Repeated-entry counts stay within a fixed constant factor of N^2.
    double lo = 1e300, hi = 0;
    for (long long N : {50LL, 100LL, 200LL}) {
        RepeatBound rb = repeated_entry_bound_check(3, N);
        lo = std::min(lo, rb.ratio);
        hi = std::max(hi, rb.ratio);
    }
    if (!(lo > 0) || hi / lo > 1.5) {
        err << "repeated-entry ratio drifts: " << lo << " .. " << hi;
        return false;
    }
    return true;
}

struct Criterion {
    const char* name;
    double budget_seconds;  // 0 = no budget
    std::function<bool(std::ostream&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    g_data_dir = argc > 1 ? argv[1] : "tests/data";
    g_cache_dir = argc > 2 ? argv[2] : "";
    if (!g_cache_dir.empty()) std::filesystem::create_directories(g_cache_dir);

    const Criterion criteria[] = {
        {"basis validity (n = 3..10, exact 4x4 matrix)", 1, criterion_basis},
        {"complexity profile (3, 1, certified 1)", 60, criterion_complexity},
        {"3x3 counting quasipolynomial", 1, criterion_ehrhart3},
        {"4x4 direct counts and quasipolynomial", 600, criterion_ehrhart4},
        {"vertex enumeration (6 and 178 vertices)", 600, criterion_vertices},
        {"local factors and rank spectra", 300, criterion_local_factors},
        {"singular-series constants", 60, criterion_singular_series},
        {"reciprocity suite", 0, criterion_reciprocity},
        {"prime census properties", 300, criterion_census},
    };

    int failures = 0;
    int idx = 0;
    for (const auto& c : criteria) {
        ++idx;
        std::ostringstream err;
        bool ok = false;
        auto start = std::chrono::steady_clock::now();
        try {
            ok = c.run(err);
        } catch (const std::exception& e) {
            err << "exception: " << e.what();
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && c.budget_seconds > 0 && secs > c.budget_seconds) {
            ok = false;
            err << "runtime " << secs << " s exceeds budget " << c.budget_seconds << " s";
        }
        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << " [" << idx << "/9] " << c.name << " ("
             << std::fixed << secs << " s)";
        if (!ok) {
            line << " -- " << err.str();
            ++failures;
        }
        std::cout << line.str() << std::endl;
    }
    if (failures == 0)
        std::cout << "ACCEPTANCE: all 9 criteria passed" << std::endl;
    else
        std::cout << "ACCEPTANCE: " << failures << " of 9 criteria failed" << std::endl;
    return failures;
}
