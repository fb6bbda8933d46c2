#include "magicsq/census.hpp"

#include <algorithm>
#include <sstream>

#include "magicsq/detail/plan.hpp"

namespace magicsq {

std::vector<uint8_t> sieve_primes(long long N) {
    if (N < 0) throw ValidationError("sieve_primes: N >= 0 required");
    std::vector<uint8_t> s(size_t(N) + 1, 1);
    if (N >= 0) s[0] = 0;
    if (N >= 1) s[1] = 0;
    for (long long i = 2; i * i <= N; ++i)
        if (s[size_t(i)])
            for (long long j = i * i; j <= N; j += i) s[size_t(j)] = 0;
    return s;
}

namespace {

struct ResumeState {
    long long next_index = 0;
    Int total{0}, distinct{0};
};

std::string make_token(int n, long long N, long long idx, const Int& total,
                       const Int& distinct) {
    std::ostringstream os;
    os << "v1:" << n << ":" << N << ":" << idx << ":" << total.get_str() << ":"
       << distinct.get_str();
    return os.str();
}

ResumeState parse_token(const std::string& token, int n, long long N) {
    ResumeState st;
    if (token.empty()) return st;
    std::istringstream is(token);
    std::string ver, tn, tN, idx, tot, dis;
    if (!std::getline(is, ver, ':') || ver != "v1" || !std::getline(is, tn, ':') ||
        !std::getline(is, tN, ':') || !std::getline(is, idx, ':') ||
        !std::getline(is, tot, ':') || !std::getline(is, dis, ':'))
        throw ValidationError("census: malformed resume token");
    if (std::stoll(tn) != n || std::stoll(tN) != N)
        throw ValidationError("census: resume token is for different parameters");
    st.next_index = std::stoll(idx);
    st.total = Int(tot);
    st.distinct = Int(dis);
    return st;
}

// n = 3: center a plus signed offsets (b, c); the eight non-center entries
// are a +- b, a +- c, a +- (b+c), a +- (b-c).  All entries prime and <= N.
CensusResult census3(long long N, const CensusOptions& opts) {
    auto sieve = sieve_primes(N);
    std::vector<long long> centers;
    for (long long a = 2; a <= N; ++a)
        if (sieve[size_t(a)]) centers.push_back(a);

    ResumeState st = parse_token(opts.resume, 3, N);
    CensusResult res;
    res.n = 3;
    res.N = N;
    res.total = st.total;
    res.distinct_count = st.distinct;

    std::vector<long long> offs;  // signed offsets for the current center
    long long ops = 0;
    for (size_t ai = size_t(st.next_index); ai < centers.size(); ++ai) {
        if (opts.budget >= 0 && ops >= opts.budget) {
            res.complete = false;
            res.resume_token =
                make_token(3, N, (long long)ai, res.total, res.distinct_count);
            break;
        }
        long long a = centers[ai];
        long long lim = std::min(a, N - a);
        auto both_prime = [&](long long m) {
            return m <= lim && sieve[size_t(a - m)] && sieve[size_t(a + m)];
        };
        offs.clear();
        offs.push_back(0);
        for (long long m = 1; m <= lim; ++m)
            if (both_prime(m)) {
                offs.push_back(m);
                offs.push_back(-m);
            }
        for (long long b : offs)
            for (long long c : offs) {
                ++ops;
                if (!both_prime(std::llabs(b + c)) || !both_prime(std::llabs(b - c))) continue;
                res.total += 1;
                long long e[9] = {0, b, -b, c, -c, b + c, -(b + c), b - c, -(b - c)};
                std::sort(e, e + 9);
                bool dup = false;
                for (int i = 1; i < 9; ++i)
                    if (e[i] == e[i - 1]) { dup = true; break; }
                if (!dup) res.distinct_count += 1;
            }
    }
    res.operations = ops;
    return res;
}

// n = 4: depth-first search over the eight skeleton primes with the same
// interval pruning as the lattice-point counter, plus primality of the eight
// dependent cells at the leaves.
struct Census4 {
    const std::vector<uint8_t>& sieve;
    const std::vector<long long>& primes;
    const detail::CountPlan& p;
    long long ops = 0;
    Int total{0}, distinct{0};

    // values of the variables chosen so far, in depth order
    long long chosen[8] = {0};

    void leaf_check(int k, std::vector<long long>& partial, long long lo, long long hi) {
        // Dependent forms with no support at the last depth are already final.
        for (int f = 0; f < p.nf; ++f)
            if (p.coef[k][f] == 0 && !sieve[size_t(partial[f])]) return;
        auto it = std::lower_bound(primes.begin(), primes.end(), lo);
        for (; it != primes.end() && *it <= hi; ++it) {
            long long x = *it;
            ++ops;
            bool ok = true;
            for (int f = 0; f < p.nf && ok; ++f) {
                long long c = p.coef[k][f];
                if (c != 0 && !sieve[size_t(partial[f] + c * x)]) ok = false;
            }
            if (!ok) continue;
            total += 1;
            chosen[k] = x;
            long long entries[16];
            for (int j = 0; j < p.d; ++j) entries[j] = chosen[j];
            for (int f = 0; f < p.nf; ++f) entries[p.d + f] = partial[f] + p.coef[k][f] * x;
            std::sort(entries, entries + p.d + p.nf);
            bool dup = false;
            for (int i = 1; i < p.d + p.nf; ++i)
                if (entries[i] == entries[i - 1]) { dup = true; break; }
            if (!dup) distinct += 1;
        }
    }

    void dfs(int k, std::vector<long long>& partial) {
        long long lo, hi;
        if (!depth_interval(p, k, partial, lo, hi)) return;
        if (k == p.d - 1) {
            leaf_check(k, partial, lo, hi);
            return;
        }
        auto it = std::lower_bound(primes.begin(), primes.end(), lo);
        for (; it != primes.end() && *it <= hi; ++it) {
            long long x = *it;
            ++ops;
            chosen[k] = x;
            for (int f = 0; f < p.nf; ++f) partial[f] += p.coef[k][f] * x;
            dfs(k + 1, partial);
            for (int f = 0; f < p.nf; ++f) partial[f] -= p.coef[k][f] * x;
        }
    }
};

CensusResult census4(long long N, const CensusOptions& opts) {
    FormSystem sys = build_system(4);
    auto sieve = sieve_primes(N);
    std::vector<long long> primes;
    for (long long v = 2; v <= N; ++v)
        if (sieve[size_t(v)]) primes.push_back(v);
    detail::CountPlan plan = detail::make_count_plan(sys, N);

    ResumeState st = parse_token(opts.resume, 4, N);
    CensusResult res;
    res.n = 4;
    res.N = N;
    res.total = st.total;
    res.distinct_count = st.distinct;

    Census4 engine{sieve, primes, plan};
    long long lo, hi;
    std::vector<long long> zero(plan.nf, 0);
    if (!depth_interval(plan, 0, zero, lo, hi)) {
        res.operations = 0;
        return res;
    }
    // The budget is checked between top-level subtrees, which keeps resume
    // tokens simple; a single subtree may overshoot slightly.
    std::vector<long long> partial(plan.nf);
    for (size_t idx = size_t(st.next_index); idx < primes.size(); ++idx) {
        if (opts.budget >= 0 && engine.ops >= opts.budget) {
            res.complete = false;
            res.resume_token = make_token(4, N, (long long)idx, res.total + engine.total,
                                          res.distinct_count + engine.distinct);
            break;
        }
        long long x = primes[idx];
        if (x < lo || x > hi) continue;
        engine.chosen[0] = x;
        for (int f = 0; f < plan.nf; ++f) partial[f] = plan.coef[0][f] * x;
        engine.dfs(1, partial);
    }
    res.total += engine.total;
    res.distinct_count += engine.distinct;
    res.operations = engine.ops;
    return res;
}

}  // namespace

nlohmann::json CensusResult::to_json() const {
    nlohmann::json j{{"n", n},
                     {"N", N},
                     {"total", total.get_str()},
                     {"distinct", distinct_count.get_str()},
                     {"complete", complete},
                     {"operations", operations}};
    if (!complete) j["resume_token"] = resume_token;
    return j;
}

CensusResult census(int n, long long N, const CensusOptions& opts) {
    if (N < 0) throw ValidationError("census: N >= 0 required");
    if (n == 3) return census3(N, opts);
    if (n == 4) return census4(N, opts);
    throw ValidationError("census: implemented for n = 3 and n = 4");
}

RepeatBound repeated_entry_bound_check(int n, long long N) {
    if (n != 3) throw ValidationError("repeated_entry_bound_check: n = 3 only");
    if (N < 1) throw ValidationError("repeated_entry_bound_check: N >= 1 required");
    RepeatBound rb;
    rb.N = N;
    for (long long a = 0; a <= N; ++a) {
        long long lim = std::min(a, N - a);
        for (long long b = -lim; b <= lim; ++b)
            for (long long c = -lim; c <= lim; ++c) {
                if (std::llabs(b + c) > lim || std::llabs(b - c) > lim) continue;
                rb.total += 1;
                long long e[9] = {0, b, -b, c, -c, b + c, -(b + c), b - c, -(b - c)};
                std::sort(e, e + 9);
                bool dup = false;
                for (int i = 1; i < 9; ++i)
                    if (e[i] == e[i - 1]) { dup = true; break; }
                if (dup) rb.repeats += 1;
            }
    }
    rb.ratio = Rational(rb.repeats).get_d() / (double(N) * double(N));
    return rb;
}

}  // namespace magicsq
