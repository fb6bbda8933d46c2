#include "magicsq/complexity.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "magicsq/linalg.hpp"

namespace magicsq {

namespace {

bool in_span_i64(const std::vector<std::vector<long long>>& rows,
                 const std::vector<long long>& target) {
    if (rows.empty()) return false;
    auto with = rows;
    with.push_back(target);
    return rank_small(rows) == rank_small(with);
}

struct PartitionSearch {
    const std::vector<std::vector<long long>>* vecs;  // all form rows
    std::vector<long long> target;
    std::vector<int> others;  // candidate form indices, fixed order
    int max_blocks = 0;
    std::vector<std::vector<int>> blocks;  // current assignment (form indices)
    std::vector<std::vector<int>> found;

    bool assign(size_t k) {
        if (k == others.size()) {
            found = blocks;
            return true;
        }
        int f = others[k];
        int used = (int)blocks.size();
        int limit = used < max_blocks ? used + 1 : used;  // existing blocks, or open one
        for (int b = 0; b < limit; ++b) {
            if (b == used) blocks.emplace_back();
            blocks[b].push_back(f);
            std::vector<std::vector<long long>> rows;
            for (int idx : blocks[b]) rows.push_back((*vecs)[idx]);
            if (!in_span_i64(rows, target)) {
                if (assign(k + 1)) return true;
            }
            blocks[b].pop_back();
            if (b == used) blocks.pop_back();
        }
        return false;
    }
};

}  // namespace

bool in_linear_span(const IntMatrix& rows, const std::vector<long long>& target) {
    if (rows.rows == 0) return false;
    IntMatrix with(rows.rows + 1, rows.cols);
    with.a.assign(rows.a.begin(), rows.a.end());
    for (long long v : target) with.a.push_back(Int(static_cast<long>(v)));
    return rank_over_rationals(rows) == rank_over_rationals(with);
}

bool verify_certificate(const FormSystem& sys, const PartitionCertificate& cert,
                        std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (cert.form_index < 0 || cert.form_index >= sys.t) return fail("bad form index");
    std::set<int> seen;
    size_t total = 0;
    for (const auto& b : cert.blocks) {
        total += b.size();
        for (int f : b) {
            if (f < 0 || f >= sys.t || f == cert.form_index) return fail("bad block member");
            if (!seen.insert(f).second) return fail("duplicate block member");
        }
    }
    if (total != size_t(sys.t - 1)) return fail("blocks do not cover the other forms");
    for (size_t bi = 0; bi < cert.blocks.size(); ++bi) {
        const auto& b = cert.blocks[bi];
        IntMatrix rows((int)b.size(), sys.d);
        for (size_t r = 0; r < b.size(); ++r)
            for (int c = 0; c < sys.d; ++c) rows.at((int)r, c) = static_cast<long>(sys.forms[b[r]].coeffs[c]);
        if (in_linear_span(rows, sys.forms[cert.form_index].coeffs))
            return fail("block " + std::to_string(bi) + " spans the target form");
    }
    return true;
}

std::optional<int> i_complexity(const FormSystem& sys, int form_index, int s_max) {
    if (sys.t > 16)
        throw ValidationError(
            "i_complexity: exhaustive search guarded to t <= 16 forms; use certificate mode");
    if (form_index < 0 || form_index >= sys.t) throw ValidationError("i_complexity: bad index");
    std::vector<std::vector<long long>> vecs;
    for (const auto& f : sys.forms) vecs.push_back(f.coeffs);
    PartitionSearch ps;
    ps.vecs = &vecs;
    ps.target = vecs[form_index];
    for (int i = 0; i < sys.t; ++i)
        if (i != form_index) ps.others.push_back(i);
    for (int s = 0; s <= s_max; ++s) {
        ps.max_blocks = s + 1;
        ps.blocks.clear();
        if (ps.assign(0)) return s;
    }
    return std::nullopt;
}

namespace {

// Exhaustive variant that also returns the successful partition.
std::pair<int, std::vector<std::vector<int>>> i_complexity_with_cert(
    const FormSystem& sys, int form_index, const std::vector<std::vector<long long>>& vecs) {
    PartitionSearch ps;
    ps.vecs = &vecs;
    ps.target = vecs[form_index];
    for (int i = 0; i < sys.t; ++i)
        if (i != form_index) ps.others.push_back(i);
    for (int s = 0; s < sys.t; ++s) {
        ps.max_blocks = s + 1;
        ps.blocks.clear();
        if (ps.assign(0)) return {s, ps.found};
    }
    throw ValidationError("i_complexity: no partition found (degenerate system)");
}

// The three verified two-block partition families used for n >= 5.  "e1" and
// "e3" are the forms at cells 1 and 3 (parameters 1 and 3), the split that
// keeps every block's span clear of the target.
PartitionCertificate certificate_for(const FormSystem& sys, int fi) {
    int n = sys.n;
    PartitionCertificate cert;
    cert.form_index = fi;
    int cell = fi + 1;
    int nth_trivial = sys.skeleton[n - 1];  // cell n: last parameter of row 1
    int first_nontrivial = 2 * n;           // cell 2n: first non-skeleton cell
    std::vector<int> trivials, nontrivials;
    for (int i = 0; i < sys.t; ++i)
        (sys.is_skeleton_cell(i + 1) ? trivials : nontrivials).push_back(i);
    std::vector<int> b1, b2;
    if (sys.is_skeleton_cell(cell) && cell != nth_trivial) {
        for (int i : trivials)
            if (i != fi) b1.push_back(i);
        b2 = nontrivials;
    } else if (cell == nth_trivial) {
        b1 = {0, 2};
        for (int i : nontrivials)
            if (i + 1 != first_nontrivial) b1.push_back(i);
        for (int i : trivials)
            if (i != fi && i != 0 && i != 2) b2.push_back(i);
        b2.push_back(first_nontrivial - 1);
    } else {
        b1 = {0, 2};
        for (int i : nontrivials)
            if (i != fi) b1.push_back(i);
        for (int i : trivials)
            if (i != 0 && i != 2) b2.push_back(i);
    }
    std::sort(b1.begin(), b1.end());
    std::sort(b2.begin(), b2.end());
    cert.blocks = {b1, b2};
    return cert;
}

}  // namespace

nlohmann::json ComplexityReport::to_json() const {
    nlohmann::json jc = nlohmann::json::array();
    for (const auto& c : certificates)
        jc.push_back({{"form_index", c.form_index}, {"blocks", c.blocks}});
    return {{"n", n},
            {"s", s},
            {"witness_form", witness_form},
            {"exhaustive", exhaustive},
            {"per_form", per_form},
            {"certificates", jc}};
}

ComplexityReport system_complexity(const FormSystem& sys) {
    ComplexityReport rep;
    rep.n = sys.n;
    if (sys.t <= 16) {
        std::vector<std::vector<long long>> vecs;
        for (const auto& f : sys.forms) vecs.push_back(f.coeffs);
        rep.exhaustive = true;
        rep.s = 0;
        rep.witness_form = 0;
        for (int i = 0; i < sys.t; ++i) {
            auto [si, part] = i_complexity_with_cert(sys, i, vecs);
            rep.per_form.push_back(si);
            PartitionCertificate cert;
            cert.form_index = i;
            cert.blocks = part;
            rep.certificates.push_back(std::move(cert));
            if (si > rep.s) {
                rep.s = si;
                rep.witness_form = i;
            }
        }
        return rep;
    }

    // Certificate mode: verified two-block partitions give s <= 1 for every
    // form; one exhibited linear dependence gives s >= 1.
    rep.exhaustive = false;
    for (int i = 0; i < sys.t; ++i) {
        PartitionCertificate cert = certificate_for(sys, i);
        std::string why;
        if (!verify_certificate(sys, cert, &why))
            throw ValidationError("certificate for form " + std::to_string(i) +
                                  " failed verification: " + why);
        rep.per_form.push_back(1);
        rep.certificates.push_back(std::move(cert));
    }
    int dependent = -1;
    for (int i = 0; i < sys.t && dependent < 0; ++i) {
        IntMatrix others(sys.t - 1, sys.d);
        int r = 0;
        for (int j = 0; j < sys.t; ++j) {
            if (j == i) continue;
            for (int c = 0; c < sys.d; ++c) others.at(r, c) = static_cast<long>(sys.forms[j].coeffs[c]);
            ++r;
        }
        if (in_linear_span(others, sys.forms[i].coeffs)) dependent = i;
    }
    if (dependent < 0)
        throw ValidationError("no linear dependence found; lower bound s >= 1 not established");
    rep.s = 1;
    rep.witness_form = dependent;
    return rep;
}

IntMatrix row_reduce_nontrivial(const FormSystem& sys, std::vector<int>* designated_columns) {
    if (sys.n < 5) throw ValidationError("row_reduce_nontrivial: defined for n >= 5");
    IntMatrix nt = sys.nontrivial_matrix();
    int m = nt.rows;  // 2n
    if (rank_over_rationals(nt) != m)
        throw ValidationError("row_reduce_nontrivial: nontrivial block not of full row rank");

    // Explicit return type: abs() on a GMP value yields an expression template
    // referencing its argument, which must not outlive this frame.
    auto subdet = [&](const std::vector<int>& cols) -> Int {
        IntMatrix s(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) s.at(r, c) = nt.at(r, cols[c]);
        Int det = determinant(s);
        return abs(det);
    };

    // Greedy pivot columns (in a given scan order) from fraction-free
    // elimination give a full-rank starting subset.
    auto greedy_cols = [&](const std::vector<int>& order) {
        IntMatrix w(m, nt.cols);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < nt.cols; ++c) w.at(r, c) = nt.at(r, order[size_t(c)]);
        std::vector<int> picked;
        Int prev = 1;
        int rank = 0;
        for (int col = 0; col < w.cols && rank < m; ++col) {
            int piv = -1;
            for (int r = rank; r < m; ++r)
                if (w.at(r, col) != 0) { piv = r; break; }
            if (piv < 0) continue;
            if (piv != rank)
                for (int c = 0; c < w.cols; ++c) std::swap(w.at(piv, c), w.at(rank, c));
            for (int r = rank + 1; r < m; ++r) {
                for (int c = col + 1; c < w.cols; ++c)
                    w.at(r, c) = (w.at(rank, col) * w.at(r, c) - w.at(r, col) * w.at(rank, c)) / prev;
                w.at(r, col) = 0;
            }
            prev = w.at(rank, col);
            picked.push_back(order[size_t(col)]);
            ++rank;
        }
        return picked;
    };

    // Descend |det| to 1 by column swaps (single, then pairs on plateaus);
    // empty result when stuck in a local minimum.
    auto descend = [&](std::vector<int> cols) -> std::vector<int> {
        Int best = subdet(cols);
        for (int iter = 0; best != 1 && iter < 1000; ++iter) {
            Int round_best = best;
            std::vector<int> round_cols;
            std::vector<char> inside(size_t(nt.cols), 0);
            for (int c : cols) inside[size_t(c)] = 1;
            for (int ci = 0; ci < m; ++ci) {
                for (int j = 0; j < nt.cols; ++j) {
                    if (inside[size_t(j)]) continue;
                    auto cand = cols;
                    cand[size_t(ci)] = j;
                    Int v = subdet(cand);
                    if (v != 0 && v < round_best) {
                        round_best = v;
                        round_cols = cand;
                    }
                }
            }
            if (round_cols.empty()) {
                bool improved = false;
                for (int ci = 0; ci < m && !improved; ++ci)
                    for (int cj = ci + 1; cj < m && !improved; ++cj)
                        for (int j1 = 0; j1 < nt.cols && !improved; ++j1) {
                            if (inside[size_t(j1)]) continue;
                            for (int j2 = j1 + 1; j2 < nt.cols && !improved; ++j2) {
                                if (inside[size_t(j2)]) continue;
                                auto cand = cols;
                                cand[size_t(ci)] = j1;
                                cand[size_t(cj)] = j2;
                                Int v = subdet(cand);
                                if (v != 0 && v < best) {
                                    best = v;
                                    cols = cand;
                                    improved = true;
                                }
                            }
                        }
                if (!improved) return {};
            } else {
                best = round_best;
                cols = round_cols;
            }
        }
        return best == 1 ? cols : std::vector<int>{};
    };

    // Local search can stall, so restart from shuffled scan orders
    // (deterministic seed: the result is reproducible).
    std::vector<int> cols;
    std::vector<int> order(size_t(nt.cols));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(20260814);
    for (int attempt = 0; attempt < 100 && cols.empty(); ++attempt) {
        cols = descend(greedy_cols(order));
        std::shuffle(order.begin(), order.end(), rng);
    }
    if (cols.empty())
        throw ValidationError("row_reduce_nontrivial: no unimodular column subset found");
    std::sort(cols.begin(), cols.end());

    // R = S^-1 * NT, solved column by column; integrality is guaranteed by
    // |det S| = 1 and asserted.
    RatMatrix S(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) S.at(r, c) = Rational(nt.at(r, cols[c]));
    IntMatrix out(m, nt.cols);
    for (int c = 0; c < nt.cols; ++c) {
        std::vector<Rational> b(m);
        for (int r = 0; r < m; ++r) b[r] = Rational(nt.at(r, c));
        auto x = solve_exact(S, b);
        if (!x) throw ValidationError("row_reduce_nontrivial: singular designated submatrix");
        for (int r = 0; r < m; ++r) {
            if ((*x)[r].get_den() != 1)
                throw ValidationError("row_reduce_nontrivial: non-integral reduction");
            out.at(r, c) = (*x)[r].get_num();
        }
    }
    if (designated_columns) *designated_columns = cols;
    return out;
}

}  // namespace magicsq
