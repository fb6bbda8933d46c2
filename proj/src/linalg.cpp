#include "magicsq/linalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace magicsq {

int rank_over_rationals(const IntMatrix& m) {
    IntMatrix w = m;
    int rank = 0;
    Int prev = 1;
    for (int col = 0; col < w.cols && rank < w.rows; ++col) {
        int piv = -1;
        for (int r = rank; r < w.rows; ++r)
            if (w.at(r, col) != 0) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int c = 0; c < w.cols; ++c) std::swap(w.at(piv, c), w.at(rank, c));
        for (int r = rank + 1; r < w.rows; ++r) {
            for (int c = col + 1; c < w.cols; ++c) {
                w.at(r, c) = (w.at(rank, col) * w.at(r, c) - w.at(r, col) * w.at(rank, c)) / prev;
            }
            w.at(r, col) = 0;
        }
        prev = w.at(rank, col);
        ++rank;
    }
    return rank;
}

Int determinant(const IntMatrix& m) {
    if (m.rows != m.cols) throw ValidationError("determinant: matrix not square");
    IntMatrix w = m;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < w.rows; ++k) {
        int piv = -1;
        for (int r = k; r < w.rows; ++r)
            if (w.at(r, k) != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != k) {
            sign = -sign;
            for (int c = 0; c < w.cols; ++c) std::swap(w.at(piv, c), w.at(k, c));
        }
        for (int r = k + 1; r < w.rows; ++r) {
            for (int c = k + 1; c < w.cols; ++c)
                w.at(r, c) = (w.at(k, k) * w.at(r, c) - w.at(r, k) * w.at(k, c)) / prev;
            w.at(r, k) = 0;
        }
        prev = w.at(k, k);
    }
    return sign < 0 ? Int(-w.at(w.rows - 1, w.rows - 1)) : w.at(w.rows - 1, w.rows - 1);
}

IntMatrix hermite_normal_form(const IntMatrix& m) {
    IntMatrix h = m;
    int row = 0;
    for (int col = 0; col < h.cols && row < h.rows; ++col) {
        // Euclidean reduction: repeatedly put the minimal |nonzero| entry of this
        // column (at or below `row`) on the pivot row and reduce the others by it.
        for (;;) {
            int piv = -1;
            for (int r = row; r < h.rows; ++r) {
                if (h.at(r, col) == 0) continue;
                if (piv < 0 ||
                    mpz_cmpabs(h.at(r, col).get_mpz_t(), h.at(piv, col).get_mpz_t()) < 0)
                    piv = r;
            }
            if (piv < 0) goto next_col;  // column already zero below
            if (piv != row)
                for (int c = 0; c < h.cols; ++c) std::swap(h.at(piv, c), h.at(row, c));
            {
                bool reduced_all = true;
                for (int r = row + 1; r < h.rows; ++r) {
                    if (h.at(r, col) == 0) continue;
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), h.at(r, col).get_mpz_t(), h.at(row, col).get_mpz_t());
                    for (int c = 0; c < h.cols; ++c) h.at(r, c) -= q * h.at(row, c);
                    if (h.at(r, col) != 0) reduced_all = false;
                }
                if (reduced_all) break;
            }
        }
        if (h.at(row, col) < 0)
            for (int c = 0; c < h.cols; ++c) h.at(row, c) = -h.at(row, c);
        for (int r = 0; r < row; ++r) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h.at(r, col).get_mpz_t(), h.at(row, col).get_mpz_t());
            if (q != 0)
                for (int c = 0; c < h.cols; ++c) h.at(r, c) -= q * h.at(row, c);
        }
        ++row;
    next_col:;
    }
    return h;
}

namespace {

unsigned long long mulmod(unsigned long long a, unsigned long long b, unsigned long long m) {
    return (unsigned long long)((__uint128_t)a * b % m);
}

unsigned long long powmod(unsigned long long a, unsigned long long e, unsigned long long m) {
    unsigned long long r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(unsigned long long n) {
    if (n < 2) return false;
    for (unsigned long long p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                                 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    unsigned long long d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // Deterministic Miller-Rabin bases for all 64-bit integers.
    for (unsigned long long a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                                 29ULL, 31ULL, 37ULL}) {
        unsigned long long x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

int rank_mod_p(const IntMatrix& m, unsigned long long p) {
    if (!is_prime_u64(p)) throw ValidationError("rank_mod_p: modulus is not prime");
    std::vector<std::vector<unsigned long long>> w(m.rows,
                                                   std::vector<unsigned long long>(m.cols));
    Int pz(static_cast<unsigned long>(p));
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) {
            Int v = m.at(r, c) % pz;
            if (v < 0) v += pz;
            w[r][c] = v.get_ui();
        }
    int rank = 0;
    for (int col = 0; col < m.cols && rank < m.rows; ++col) {
        int piv = -1;
        for (int r = rank; r < m.rows; ++r)
            if (w[r][col] != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(w[piv], w[rank]);
        unsigned long long inv = powmod(w[rank][col], p - 2, p);
        for (int c = col; c < m.cols; ++c) w[rank][c] = mulmod(w[rank][c], inv, p);
        for (int r = rank + 1; r < m.rows; ++r) {
            if (w[r][col] == 0) continue;
            unsigned long long f = p - w[r][col];
            for (int c = col; c < m.cols; ++c)
                w[r][c] = (w[r][c] + mulmod(f, w[rank][c], p)) % p;
        }
        ++rank;
    }
    return rank;
}

int rank_small(std::vector<std::vector<long long>> w) {
    int rows = (int)w.size();
    if (rows == 0) return 0;
    int cols = (int)w[0].size();
    int rank = 0;
    long long prev = 1;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (w[r][col] != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(w[piv], w[rank]);
        for (int r = rank + 1; r < rows; ++r) {
            for (int c = col + 1; c < cols; ++c)
                w[r][c] = (w[rank][col] * w[r][c] - w[r][col] * w[rank][c]) / prev;
            w[r][col] = 0;
        }
        prev = w[rank][col];
        ++rank;
    }
    return rank;
}

int rank_small_mod_p(std::vector<std::vector<long long>> w, long long p) {
    int rows = (int)w.size();
    if (rows == 0) return 0;
    int cols = (int)w[0].size();
    for (auto& row : w)
        for (auto& v : row) v = ((v % p) + p) % p;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (w[r][col] != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(w[piv], w[rank]);
        long long inv = (long long)powmod((unsigned long long)w[rank][col], p - 2, p);
        for (int c = col; c < cols; ++c) w[rank][c] = (__int128)w[rank][c] * inv % p;
        for (int r = rank + 1; r < rows; ++r) {
            if (w[r][col] == 0) continue;
            long long f = p - w[r][col];
            for (int c = col; c < cols; ++c)
                w[r][c] = (w[r][c] + (__int128)f * w[rank][c]) % p;
        }
        ++rank;
    }
    return rank;
}

std::optional<std::vector<Rational>> solve_exact(const RatMatrix& A,
                                                 const std::vector<Rational>& b) {
    if (A.rows != (int)b.size()) throw ValidationError("solve_exact: shape mismatch");
    RatMatrix w(A.rows, A.cols + 1);
    for (int r = 0; r < A.rows; ++r) {
        for (int c = 0; c < A.cols; ++c) w.at(r, c) = A.at(r, c);
        w.at(r, A.cols) = b[r];
    }
    std::vector<int> pivot_col(A.rows, -1);
    int rank = 0;
    for (int col = 0; col < A.cols && rank < A.rows; ++col) {
        int piv = -1;
        for (int r = rank; r < A.rows; ++r)
            if (w.at(r, col) != 0) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int c = 0; c <= A.cols; ++c) std::swap(w.at(piv, c), w.at(rank, c));
        Rational inv = 1 / w.at(rank, col);
        for (int c = col; c <= A.cols; ++c) w.at(rank, c) *= inv;
        for (int r = 0; r < A.rows; ++r) {
            if (r == rank || w.at(r, col) == 0) continue;
            Rational f = w.at(r, col);
            for (int c = col; c <= A.cols; ++c) w.at(r, c) -= f * w.at(rank, c);
        }
        pivot_col[rank] = col;
        ++rank;
    }
    for (int r = rank; r < A.rows; ++r)
        if (w.at(r, A.cols) != 0) return std::nullopt;  // inconsistent
    std::vector<Rational> x(A.cols, Rational(0));
    for (int r = 0; r < rank; ++r) x[pivot_col[r]] = w.at(r, A.cols);
    return x;
}

std::vector<Rational> interpolate_poly(const std::vector<std::pair<long long, Rational>>& points,
                                       int k) {
    if ((int)points.size() != k + 1)
        throw ValidationError("interpolate_poly: need exactly k+1 points");
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first)
                throw ValidationError("interpolate_poly: duplicate abscissa");

    // Newton divided differences, then expand to the monomial basis.
    int m = k + 1;
    std::vector<Rational> dd(m);
    for (int i = 0; i < m; ++i) dd[i] = points[i].second;
    std::vector<std::vector<Rational>> table(1, dd);
    for (int lvl = 1; lvl < m; ++lvl) {
        std::vector<Rational> next(m - lvl);
        for (int i = 0; i < m - lvl; ++i) {
            Rational dx(static_cast<long>(points[i + lvl].first - points[i].first));
            next[i] = (table[lvl - 1][i + 1] - table[lvl - 1][i]) / dx;
        }
        table.push_back(next);
    }
    std::vector<Rational> coeffs(m, Rational(0));
    std::vector<Rational> basis(m, Rational(0));  // product (x - x_0)...(x - x_{lvl-1})
    basis[0] = 1;
    int basis_deg = 0;
    for (int lvl = 0; lvl < m; ++lvl) {
        Rational c = table[lvl][0];
        for (int j = 0; j <= basis_deg; ++j) coeffs[j] += c * basis[j];
        if (lvl + 1 < m) {
            Rational x0(static_cast<long>(points[lvl].first));
            for (int j = basis_deg + 1; j > 0; --j) basis[j] = basis[j - 1] - x0 * basis[j];
            basis[0] = -x0 * basis[0];
            ++basis_deg;
        }
    }
    return coeffs;
}

}  // namespace magicsq
