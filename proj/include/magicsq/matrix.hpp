#pragma once

#include "magicsq/rational.hpp"

namespace magicsq {

// Dense row-major integer matrix.
struct IntMatrix {
    int rows = 0, cols = 0;
    std::vector<Int> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(size_t(r) * c) {}

    Int& at(int r, int c) { return a[size_t(r) * cols + c]; }
    const Int& at(int r, int c) const { return a[size_t(r) * cols + c]; }

    std::vector<Int> row(int r) const {
        return std::vector<Int>(a.begin() + size_t(r) * cols, a.begin() + size_t(r + 1) * cols);
    }

    bool operator==(const IntMatrix& o) const = default;
};

struct RatMatrix {
    int rows = 0, cols = 0;
    std::vector<Rational> a;

    RatMatrix() = default;
    RatMatrix(int r, int c) : rows(r), cols(c), a(size_t(r) * c) {}

    Rational& at(int r, int c) { return a[size_t(r) * cols + c]; }
    const Rational& at(int r, int c) const { return a[size_t(r) * cols + c]; }
};

}  // namespace magicsq
