#include "magicsq/ehrhart.hpp"

#include <algorithm>
#include <fstream>
#include <thread>

#include "magicsq/detail/plan.hpp"
#include "magicsq/linalg.hpp"

namespace magicsq {

namespace detail {

namespace {

long long floordiv(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

long long ceildiv(long long a, long long b) { return -floordiv(-a, b); }

std::vector<int> greedy_order(int d, const std::vector<std::vector<long long>>& forms) {
    std::vector<int> order;
    std::vector<char> chosen(d, 0);
    auto covered = [&](const std::vector<long long>& f, int extra) {
        int missing = 0;
        for (int j = 0; j < d; ++j)
            if (f[j] != 0 && !chosen[j] && j != extra) ++missing;
        return missing;
    };
    for (int step = 0; step < d; ++step) {
        int best = -1;
        long long best_complete = -1, best_support = 0;
        for (int v = 0; v < d; ++v) {
            if (chosen[v]) continue;
            long long complete = 0, support = 0;
            for (const auto& f : forms) {
                int miss = covered(f, v);
                if (miss == 0 && covered(f, -1) > 0) ++complete;
                support += miss;
            }
            if (best < 0 || complete > best_complete ||
                (complete == best_complete && support < best_support)) {
                best = v;
                best_complete = complete;
                best_support = support;
            }
        }
        chosen[best] = 1;
        order.push_back(best);
    }
    return order;
}

}  // namespace

CountPlan make_count_plan(const FormSystem& sys, long long N, long long L) {
    CountPlan p;
    p.d = sys.d;
    p.N = N;
    p.L = L;
    const int d = p.d;
    // Recoordinatize so that variable j is the value of skeleton cell j: the
    // skeleton block S is unimodular, so every form row c becomes the
    // integral row c * S^{-1} and the skeleton rows become unit rows.  Each
    // variable is then itself one of the forms, confined to [L, N], which
    // makes the box-based rest-range arithmetic below exact.
    bool identity = true;
    for (int j = 0; j < d && identity; ++j) {
        const auto& f = sys.forms[size_t(sys.skeleton[size_t(j)]) - 1].coeffs;
        for (int v = 0; v < d && identity; ++v)
            if (f[size_t(v)] != (v == j ? 1 : 0)) identity = false;
    }
    std::vector<std::vector<long long>> inv;  // S^{-1}, row-major
    if (!identity) {
        RatMatrix S(d, d);
        for (int j = 0; j < d; ++j) {
            const auto& f = sys.forms[size_t(sys.skeleton[size_t(j)]) - 1].coeffs;
            for (int v = 0; v < d; ++v) S.at(j, v) = Rational(static_cast<long>(f[size_t(v)]));
        }
        inv.assign(size_t(d), std::vector<long long>(size_t(d), 0));
        for (int col = 0; col < d; ++col) {
            std::vector<Rational> e(size_t(d), Rational(0));
            e[size_t(col)] = 1;
            auto x = solve_exact(S, e);
            if (!x) throw ValidationError("count plan: singular skeleton block");
            for (int r = 0; r < d; ++r) {
                const Rational& q = (*x)[size_t(r)];
                if (q.get_den() != 1)
                    throw ValidationError("count plan: skeleton block not unimodular");
                if (!q.get_num().fits_slong_p())
                    throw ValidationError("count plan: coefficient overflow");
                inv[size_t(r)][size_t(col)] = q.get_num().get_si();
            }
        }
    }
    auto transformed = [&](const std::vector<long long>& c) {
        if (identity) return c;
        std::vector<long long> out(size_t(d), 0);
        for (int v = 0; v < d; ++v) {
            long long s = 0;
            for (int k = 0; k < d; ++k) s += c[size_t(k)] * inv[size_t(k)][size_t(v)];
            out[size_t(v)] = s;
        }
        return out;
    };
    std::vector<std::vector<long long>> nt;
    for (const auto& f : sys.forms)
        if (!sys.is_skeleton_cell(f.cell)) nt.push_back(transformed(f.coeffs));
    p.nf = (int)nt.size();
    p.order = greedy_order(p.d, nt);
    p.coef.assign(p.d, std::vector<long long>(p.nf));
    for (int k = 0; k < p.d; ++k)
        for (int f = 0; f < p.nf; ++f) p.coef[k][f] = nt[f][p.order[k]];
    p.lo_rest.assign(p.d + 1, std::vector<long long>(p.nf, 0));
    p.hi_rest.assign(p.d + 1, std::vector<long long>(p.nf, 0));
    for (int k = p.d - 1; k >= 0; --k)
        for (int f = 0; f < p.nf; ++f) {
            long long c = p.coef[k][f];
            p.lo_rest[k][f] = p.lo_rest[k + 1][f] + (c < 0 ? c * N : c * L);
            p.hi_rest[k][f] = p.hi_rest[k + 1][f] + (c > 0 ? c * N : c * L);
        }
    return p;
}

bool depth_interval(const CountPlan& p, int k, const std::vector<long long>& partial,
                    long long& lo, long long& hi) {
    lo = p.L;
    hi = p.N;
    for (int f = 0; f < p.nf; ++f) {
        long long c = p.coef[k][f];
        if (c == 0) {
            if (partial[f] + p.hi_rest[k + 1][f] < p.L || partial[f] + p.lo_rest[k + 1][f] > p.N)
                return false;
            continue;
        }
        long long a = p.L - partial[f] - p.hi_rest[k + 1][f];  // c*x >= a
        long long b = p.N - partial[f] - p.lo_rest[k + 1][f];  // c*x <= b
        if (c > 0) {
            lo = std::max(lo, ceildiv(a, c));
            hi = std::min(hi, floordiv(b, c));
        } else {
            hi = std::min(hi, floordiv(a, c));
            lo = std::max(lo, ceildiv(b, c));
        }
        if (lo > hi) return false;
    }
    return true;
}

}  // namespace detail

namespace {

using detail::CountPlan;
using detail::depth_interval;
using detail::make_count_plan;

long long dfs_i64(const CountPlan& p, int k, std::vector<long long>& partial) {
    long long lo, hi;
    if (!depth_interval(p, k, partial, lo, hi)) return 0;
    if (k == p.d - 1) return hi - lo + 1;
    long long total = 0;
    for (int f = 0; f < p.nf; ++f) partial[f] += p.coef[k][f] * lo;
    for (long long x = lo;; ++x) {
        total += dfs_i64(p, k + 1, partial);
        if (x == hi) break;
        for (int f = 0; f < p.nf; ++f) partial[f] += p.coef[k][f];
    }
    for (int f = 0; f < p.nf; ++f) partial[f] -= p.coef[k][f] * hi;
    return total;
}

// Depth below which an i64 subtree count can no longer overflow.
int safe_depth(const CountPlan& p) {
    int k = 0;
    double bound = 1;
    for (int j = p.d - 1; j >= 0; --j) {
        bound *= double(p.N + 1);
        if (bound > 4.0e18) { k = j + 1; break; }
    }
    return k;
}

Int dfs_big(const CountPlan& p, int k, std::vector<long long>& partial, int safe) {
    if (k >= safe) return Int(static_cast<long>(dfs_i64(p, k, partial)));
    long long lo, hi;
    if (!depth_interval(p, k, partial, lo, hi)) return 0;
    Int total = 0;
    for (int f = 0; f < p.nf; ++f) partial[f] += p.coef[k][f] * lo;
    for (long long x = lo;; ++x) {
        total += dfs_big(p, k + 1, partial, safe);
        if (x == hi) break;
        for (int f = 0; f < p.nf; ++f) partial[f] += p.coef[k][f];
    }
    for (int f = 0; f < p.nf; ++f) partial[f] -= p.coef[k][f] * hi;
    return total;
}

}  // namespace

namespace {

Int run_plan(const CountPlan& p, int jobs) {
    if (p.d == 0) return 1;
    int safe = safe_depth(p);
    if (jobs <= 1 || p.d < 2) {
        std::vector<long long> partial(p.nf, 0);
        return dfs_big(p, 0, partial, std::max(safe, 0));
    }
    // Shard the top-level variable across threads.
    long long lo, hi;
    std::vector<long long> zero(p.nf, 0);
    if (!depth_interval(p, 0, zero, lo, hi)) return 0;
    std::vector<Int> results(size_t(jobs), Int(0));
    std::vector<std::thread> threads;
    for (int tix = 0; tix < jobs; ++tix) {
        threads.emplace_back([&, tix]() {
            std::vector<long long> partial(p.nf);
            for (long long x = lo + tix; x <= hi; x += jobs) {
                for (int f = 0; f < p.nf; ++f) partial[f] = p.coef[0][f] * x;
                results[tix] += dfs_big(p, 1, partial, std::max(safe, 1));
            }
        });
    }
    for (auto& t : threads) t.join();
    Int total = 0;
    for (const auto& r : results) total += r;
    return total;
}

}  // namespace

Int count_points(const FormSystem& sys, long long N, int jobs) {
    if (N < 0) throw ValidationError("count_points: N >= 0 required");
    if (N == 0) return 1;  // only the origin
    return run_plan(make_count_plan(sys, N), jobs);
}

Int interior_count(const FormSystem& sys, long long N, int jobs) {
    if (N < 0) throw ValidationError("interior_count: N >= 0 required");
    if (N <= 1) return 0;  // open dilation of size <= 1 has no interior lattice point
    return run_plan(make_count_plan(sys, N - 1, 1), jobs);  // strict: 1 <= psi <= N-1
}

void CountTable::record(long long N, const Int& c, const std::string& prov) {
    auto it = counts.find(N);
    if (it != counts.end()) {
        if (it->second != c)
            throw ValidationError("count table: conflicting counts for N=" + std::to_string(N));
        return;
    }
    counts[N] = c;
    provenance[N] = prov;
}

static std::filesystem::path table_path(const std::filesystem::path& dir,
                                        const std::string& hash) {
    return dir / ("counts-" + hash + ".jsonl");
}

CountTable CountTable::load(const std::filesystem::path& dir, const FormSystem& sys) {
    CountTable t;
    t.n = sys.n;
    t.system_hash = sys.content_hash();
    std::ifstream in(table_path(dir, t.system_hash));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("N") || !j.contains("count")) continue;
        if (j.value("n", -1) != t.n) continue;
        Int c(j.at("count").get<std::string>());
        t.record(j.at("N").get<long long>(), c, j.value("provenance", "cache"));
    }
    return t;
}

void CountTable::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream out(table_path(dir, system_hash), std::ios::trunc);
    for (const auto& [N, c] : counts) {
        nlohmann::json j{{"n", n},
                         {"N", N},
                         {"count", c.get_str()},
                         {"provenance", provenance.count(N) ? provenance.at(N) : "direct"}};
        out << j.dump() << "\n";
    }
}

Rational Quasipolynomial::eval(long long N) const {
    long long r = ((N % period) + period) % period;
    const auto& c = branches[size_t(r)];
    Rational x(static_cast<long>(N));
    Rational acc(0);
    for (int k = degree; k >= 0; --k) acc = acc * x + c[size_t(k)];
    return acc;
}

Rational Quasipolynomial::leading_coefficient() const {
    return branches.at(0).at(size_t(degree));
}

nlohmann::json Quasipolynomial::to_json() const {
    nlohmann::json jb = nlohmann::json::array();
    for (const auto& br : branches) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& c : br) row.push_back(rat_to_string(c));
        jb.push_back(row);
    }
    return {{"degree", degree}, {"period", period}, {"branches", jb}};
}

Quasipolynomial Quasipolynomial::from_json(const nlohmann::json& j) {
    Quasipolynomial qp;
    qp.degree = j.at("degree");
    qp.period = j.at("period");
    for (const auto& row : j.at("branches")) {
        std::vector<Rational> br;
        for (const auto& s : row) br.push_back(parse_rational(s.get<std::string>()));
        qp.branches.push_back(std::move(br));
    }
    return qp;
}

Quasipolynomial interpolate_quasipolynomial(const FormSystem& sys, long long period,
                                            CountTable* table, int jobs) {
    if (period < 1) throw ValidationError("interpolate_quasipolynomial: period >= 1 required");
    int d = sys.d;
    CountTable local;
    if (!table) {
        local.n = sys.n;
        local.system_hash = sys.content_hash();
        table = &local;
    }

    // Candidate abscissae per residue class, cheapest counting cost first.
    // Direct N >= 0 costs N; reciprocity at -m costs m-2 (m >= 2) or nothing
    // (m = 1, where the interior count is identically 0).
    struct Cand {
        long long x, cost, direct_N;  // direct_N = -1 when no count needed
        bool reciprocal;
    };
    std::vector<std::vector<long long>> abscissae(static_cast<size_t>(period));
    std::vector<long long> needed;
    for (long long r = 0; r < period; ++r) {
        std::vector<Cand> cands;
        for (long long x = r, k = 0; k <= d + 2; x += period, ++k)
            cands.push_back({x, x, x, false});
        for (long long m = 1, k = 0; k <= d + 2; ++m) {
            if (((-m) % period + period) % period != r) continue;
            ++k;
            cands.push_back({-m, m <= 2 ? 0 : m - 2, m == 1 ? -1 : m - 2, true});
        }
        std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.cost != b.cost) return a.cost < b.cost;
            return std::llabs(a.x) < std::llabs(b.x);
        });
        for (int k = 0; k <= d; ++k) {
            abscissae[size_t(r)].push_back(cands[size_t(k)].x);
            if (cands[size_t(k)].direct_N >= 0) needed.push_back(cands[size_t(k)].direct_N);
        }
    }
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
    for (long long N : needed) {
        if (table->counts.count(N)) continue;
        table->record(N, count_points(sys, N, jobs), "direct");
    }

    Quasipolynomial qp;
    qp.degree = d;
    qp.period = period;
    Rational sign((d % 2 == 0) ? 1 : -1);
    for (long long r = 0; r < period; ++r) {
        std::vector<std::pair<long long, Rational>> pts;
        for (long long x : abscissae[size_t(r)]) {
            Rational y;
            if (x >= 0) {
                y = Rational(table->counts.at(x));
            } else if (x == -1) {
                y = sign * Rational(0);  // reciprocity: interior of the unit dilation is empty
            } else {
                y = sign * Rational(table->counts.at(-x - 2));
            }
            pts.push_back({x, y});
        }
        qp.branches.push_back(interpolate_poly(pts, d));
    }

    // Cross-check every cached direct count against the interpolation.
    for (const auto& [N, c] : table->counts)
        if (qp.eval(N) != Rational(c))
            throw ValidationError("quasipolynomial disagrees with direct count at N=" +
                                  std::to_string(N));
    return qp;
}

Rational volume(const Quasipolynomial& qp) {
    Rational lead = qp.branches.at(0).at(size_t(qp.degree));
    for (const auto& br : qp.branches)
        if (br.at(size_t(qp.degree)) != lead)
            throw ValidationError("volume: branches disagree in the leading coefficient");
    return lead;
}

}  // namespace magicsq
