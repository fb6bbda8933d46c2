#include "magicsq/forms.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "magicsq/linalg.hpp"

namespace magicsq {

namespace {

std::vector<long long> operator+(std::vector<long long> a, const std::vector<long long>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

std::vector<long long> operator-(std::vector<long long> a, const std::vector<long long>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

// Skeleton cells for n >= 5 (1-based, row-major): all of row 1, rows 2..n-2
// without their last cell, and row n-1 without columns 2, n-2, n.
std::vector<int> skeleton_cells(int n) {
    std::vector<int> cells;
    for (int j = 1; j <= n; ++j) cells.push_back(j);
    for (int i = 2; i <= n - 2; ++i)
        for (int j = 1; j <= n - 1; ++j) cells.push_back((i - 1) * n + j);
    for (int j = 1; j <= n - 1; ++j)
        if (j != 2 && j != n - 2) cells.push_back((n - 2) * n + j);
    return cells;
}

// Unique magic completion of the skeleton pattern.  Every non-skeleton cell is
// determined by one magic condition, in an order where each step's condition
// has exactly one unfilled cell; the last row-sum check comes out for free and
// is asserted.  Works over any additive type (values or coefficient vectors).
template <class T>
std::vector<std::vector<T>> complete_grid(int n, const std::vector<T>& vals, const T& zero) {
    if (n < 5) throw ValidationError("complete_grid: requires n >= 5");
    std::vector<int> cells = skeleton_cells(n);
    if (vals.size() != cells.size())
        throw ValidationError("complete_grid: expected " + std::to_string(cells.size()) +
                              " skeleton values");
    std::vector<std::vector<T>> g(n, std::vector<T>(n, zero));
    for (size_t k = 0; k < cells.size(); ++k) {
        int c = cells[k] - 1;
        g[c / n][c % n] = vals[k];
    }
    T S = zero;
    for (int j = 0; j < n; ++j) S = S + g[0][j];

    for (int i = 1; i <= n - 3; ++i) {  // rows 2..n-2: last cell via row sum
        T s = zero;
        for (int j = 0; j < n - 1; ++j) s = s + g[i][j];
        g[i][n - 1] = S - s;
    }
    for (int c = 0; c <= n - 2; ++c) {  // row n, skeleton-covered columns, via column sums
        if (c == 1 || c == n - 3) continue;
        T s = zero;
        for (int i = 0; i <= n - 2; ++i) s = s + g[i][c];
        g[n - 1][c] = S - s;
    }
    {  // (n,n) via main diagonal
        T s = zero;
        for (int i = 0; i < n - 1; ++i) s = s + g[i][i];
        g[n - 1][n - 1] = S - s;
    }
    {  // (n-1,2) via antidiagonal
        T s = zero;
        for (int i = 0; i < n; ++i)
            if (i != n - 2) s = s + g[i][n - 1 - i];
        g[n - 2][1] = S - s;
    }
    {  // (n-1,n) via column n
        T s = zero;
        for (int i = 0; i < n; ++i)
            if (i != n - 2) s = s + g[i][n - 1];
        g[n - 2][n - 1] = S - s;
    }
    {  // (n,2) via column 2
        T s = zero;
        for (int i = 0; i < n - 1; ++i) s = s + g[i][1];
        g[n - 1][1] = S - s;
    }
    {  // (n-1,n-2) via row n-1
        T s = zero;
        for (int j = 0; j < n; ++j)
            if (j != n - 3) s = s + g[n - 2][j];
        g[n - 2][n - 3] = S - s;
    }
    {  // (n,n-2) via column n-2, then the redundant row-n check
        T s = zero;
        for (int i = 0; i < n - 1; ++i) s = s + g[i][n - 3];
        g[n - 1][n - 3] = S - s;
        T last = zero;
        for (int j = 0; j < n; ++j) last = last + g[n - 1][j];
        if (!(last == S)) throw ValidationError("complete_grid: redundant row check failed");
    }
    return g;
}

const int kForms3[9][3] = {
    {1, 1, 0},  {1, -1, -1}, {1, 0, 1}, {1, -1, 1}, {1, 0, 0},
    {1, 1, -1}, {1, 0, -1},  {1, 1, 1}, {1, -1, 0},
};

const int kForms4[16][8] = {
    {1, 0, 0, 0, 0, 0, 0, 0},    {0, 1, 0, 0, 0, 0, 0, 0},     {0, 0, 1, 0, 0, 0, 0, 0},
    {0, 0, 0, 1, 0, 0, 0, 0},    {0, 0, 0, 0, 1, 0, 0, 0},     {0, 0, 0, 0, 0, 1, 0, 0},
    {0, 0, 0, 0, 0, 0, 1, 0},    {1, 1, 1, 1, -1, -1, -1, 0},  {0, 0, 0, 0, 0, 0, 0, 1},
    {1, 0, 0, -1, 1, 0, -1, 1},  {0, 1, 1, 2, -1, -1, 0, -1},  {0, 0, 0, 0, 0, 1, 1, -1},
    {0, 1, 1, 1, -1, 0, 0, -1},  {0, 0, 1, 2, -1, -1, 1, -1},  {1, 0, -1, -1, 1, 1, -1, 1},
    {0, 0, 0, -1, 1, 0, 0, 1},
};

}  // namespace

IntMatrix FormSystem::coefficient_matrix() const {
    IntMatrix m(t, d);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < d; ++j) m.at(i, j) = static_cast<long>(forms[i].coeffs[j]);
    return m;
}

bool FormSystem::is_skeleton_cell(int cell) const {
    return std::find(skeleton.begin(), skeleton.end(), cell) != skeleton.end();
}

IntMatrix FormSystem::nontrivial_matrix(std::vector<int>* cells) const {
    if (cells) cells->clear();
    std::vector<const LinearForm*> nt;
    for (const auto& f : forms)
        if (!is_skeleton_cell(f.cell)) nt.push_back(&f);
    IntMatrix m((int)nt.size(), d);
    for (size_t i = 0; i < nt.size(); ++i) {
        if (cells) cells->push_back(nt[i]->cell);
        for (int j = 0; j < d; ++j) m.at((int)i, j) = static_cast<long>(nt[i]->coeffs[j]);
    }
    return m;
}

std::string FormSystem::content_hash() const {
    std::ostringstream os;
    os << n << '|' << d << '|' << t << '|';
    for (const auto& f : forms) {
        os << f.cell << ':';
        for (long long c : f.coeffs) os << c << ',';
        os << ';';
    }
    os << '|';
    for (int c : skeleton) os << c << ',';
    os << '|';
    for (long long u : unit_point) os << u << ',';
    std::string s = os.str();
    unsigned long long h = 1469598103934665603ULL;  // FNV-1a 64
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

nlohmann::json FormSystem::to_json() const {
    nlohmann::json jf = nlohmann::json::array();
    for (const auto& f : forms) jf.push_back({{"cell", f.cell}, {"coeffs", f.coeffs}});
    return {{"n", n},          {"d", d},
            {"t", t},          {"forms", jf},
            {"skeleton", skeleton}, {"unit_point", unit_point},
            {"hash", content_hash()}};
}

FormSystem FormSystem::from_json(const nlohmann::json& j) {
    FormSystem s;
    s.n = j.at("n");
    s.d = j.at("d");
    s.t = j.at("t");
    for (const auto& jf : j.at("forms")) {
        LinearForm f;
        f.cell = jf.at("cell");
        f.coeffs = jf.at("coeffs").get<std::vector<long long>>();
        s.forms.push_back(std::move(f));
    }
    s.skeleton = j.at("skeleton").get<std::vector<int>>();
    s.unit_point = j.at("unit_point").get<std::vector<long long>>();
    return s;
}

ConstraintMatrix build_constraint_matrix(int n) {
    if (n < 3) throw ValidationError("build_constraint_matrix: n >= 3 required");
    ConstraintMatrix cm;
    cm.n = n;
    cm.A = IntMatrix(2 * n, n * n);
    auto cell = [n](int i, int j) { return i * n + j; };  // 0-based
    int r = 0;
    for (int i = 0; i + 1 < n; ++i, ++r) {
        for (int j = 0; j < n; ++j) {
            cm.A.at(r, cell(i, j)) = 1;
            cm.A.at(r, cell(i + 1, j)) = -1;
        }
        cm.row_labels.push_back("row" + std::to_string(i + 1) + "-row" + std::to_string(i + 2));
    }
    for (int j = 0; j + 1 < n; ++j, ++r) {
        for (int i = 0; i < n; ++i) {
            cm.A.at(r, cell(i, j)) = 1;
            cm.A.at(r, cell(i, j + 1)) = -1;
        }
        cm.row_labels.push_back("col" + std::to_string(j + 1) + "-col" + std::to_string(j + 2));
    }
    for (int i = 0; i < n; ++i) {
        cm.A.at(r, cell(i, i)) += 1;
        cm.A.at(r, cell(i, n - 1 - i)) -= 1;
    }
    cm.row_labels.push_back("maindiag-antidiag");
    ++r;
    for (int i = 0; i < n; ++i) {
        cm.A.at(r, cell(i, 0)) += 1;
        cm.A.at(r, cell(i, i)) -= 1;
    }
    cm.row_labels.push_back("col1-maindiag");
    return cm;
}

std::vector<std::vector<long long>> certificate_vectors(int n) {
    if (n < 3) throw ValidationError("certificate_vectors: n >= 3 required");
    std::vector<std::vector<long long>> out;
    auto cell = [n](int i, int j) { return i * n + j; };
    for (int k = 1; k <= n - 1; ++k) {  // ones on rows 1..k: violates row-difference k
        std::vector<long long> v(n * n, 0);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < n; ++j) v[cell(i, j)] = 1;
        out.push_back(std::move(v));
    }
    for (int k = 1; k <= n - 1; ++k) {  // ones on columns 1..k
        std::vector<long long> v(n * n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j) v[cell(i, j)] = 1;
        out.push_back(std::move(v));
    }
    {  // ones off the main diagonal: breaks diagonal balance only
        std::vector<long long> v(n * n, 1);
        for (int i = 0; i < n; ++i) v[cell(i, i)] = 0;
        out.push_back(std::move(v));
    }
    {  // indicator of both diagonals (2 at an odd center): breaks col1 = maindiag only
        std::vector<long long> v(n * n, 0);
        for (int i = 0; i < n; ++i) {
            v[cell(i, i)] += 1;
            v[cell(i, n - 1 - i)] += 1;
        }
        out.push_back(std::move(v));
    }
    return out;
}

FormSystem build_system(int n) {
    if (n < 3) throw ValidationError("build_system: n >= 3 required");
    FormSystem s;
    s.n = n;
    s.d = n * n - 2 * n;
    s.t = n * n;
    if (n == 3) {
        for (int i = 0; i < 9; ++i)
            s.forms.push_back({i + 1, {kForms3[i][0], kForms3[i][1], kForms3[i][2]}});
        s.skeleton = {5, 1, 3};
        s.unit_point = {1, 0, 0};
        return s;
    }
    if (n == 4) {
        for (int i = 0; i < 16; ++i)
            s.forms.push_back({i + 1, std::vector<long long>(kForms4[i], kForms4[i] + 8)});
        s.skeleton = {1, 2, 3, 4, 5, 6, 7, 9};
        s.unit_point = std::vector<long long>(8, 1);
        return s;
    }
    s.skeleton = skeleton_cells(n);
    std::vector<std::vector<long long>> params(s.d, std::vector<long long>(s.d, 0));
    for (int k = 0; k < s.d; ++k) params[k][k] = 1;
    auto grid = complete_grid<std::vector<long long>>(n, params, std::vector<long long>(s.d, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.forms.push_back({i * n + j + 1, grid[i][j]});
    s.unit_point = std::vector<long long>(s.d, 1);
    return s;
}

std::vector<std::vector<Int>> complete_skeleton(int n, const std::vector<Int>& values) {
    return complete_grid<Int>(n, values, Int(0));
}

bool verify_z_basis(const FormSystem& sys, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    int n = sys.n;
    if (n < 3) return fail("n < 3");
    if (sys.t != n * n || sys.d != n * n - 2 * n) return fail("wrong d or t for n");
    if ((int)sys.forms.size() != sys.t) return fail("wrong number of forms");
    for (int i = 0; i < sys.t; ++i) {
        if (sys.forms[i].cell != i + 1) return fail("forms not in cell order");
        if ((int)sys.forms[i].coeffs.size() != sys.d) return fail("bad form arity");
    }
    if ((int)sys.skeleton.size() != sys.d) return fail("skeleton size != d");
    std::set<int> sk(sys.skeleton.begin(), sys.skeleton.end());
    if ((int)sk.size() != sys.d) return fail("skeleton cells not distinct");
    for (int c : sys.skeleton)
        if (c < 1 || c > sys.t) return fail("skeleton cell out of range");
    if ((int)sys.unit_point.size() != sys.d) return fail("unit point size != d");

    // Every parametrized square satisfies all 2n magic conditions.
    ConstraintMatrix cm = build_constraint_matrix(n);
    IntMatrix M = sys.coefficient_matrix();
    for (int r = 0; r < cm.A.rows; ++r)
        for (int j = 0; j < sys.d; ++j) {
            Int acc = 0;
            for (int c = 0; c < cm.A.cols; ++c)
                if (cm.A.at(r, c) != 0) acc += cm.A.at(r, c) * M.at(c, j);
            if (acc != 0) return fail("constraint " + cm.row_labels[r] + " not satisfied");
        }

    if (rank_over_rationals(M) != sys.d) return fail("coefficient matrix rank != d");

    // The skeleton rows must be a Z-basis of the parameter lattice: the d x d
    // submatrix they form is unimodular (|det| = 1).
    IntMatrix S(sys.d, sys.d);
    for (int k = 0; k < sys.d; ++k)
        for (int j = 0; j < sys.d; ++j) S.at(k, j) = static_cast<long>(sys.forms[sys.skeleton[k] - 1].coeffs[j]);
    Int det = determinant(S);
    if (det != 1 && det != -1) return fail("skeleton submatrix not unimodular");

    for (const auto& f : sys.forms) {
        long long v = 0;
        for (int j = 0; j < sys.d; ++j) v += f.coeffs[j] * sys.unit_point[j];
        if (v != 1) return fail("unit point does not give the all-ones square");
    }
    return true;
}

}  // namespace magicsq
