#pragma once

#include <string>

#include <json.hpp>

#include "magicsq/matrix.hpp"

namespace magicsq {

// Linear form giving one cell's value in terms of the d free parameters.
struct LinearForm {
    int cell = 0;  // 1-based row-major cell index
    std::vector<long long> coeffs;
};

// The 2n homogeneous magic conditions as rows over the n^2 cells:
// n-1 consecutive-row differences, n-1 consecutive-column differences,
// main diagonal minus antidiagonal, column 1 minus main diagonal.
struct ConstraintMatrix {
    int n = 0;
    IntMatrix A;  // 2n x n^2
    std::vector<std::string> row_labels;
};

// A Z-basis presentation of the n x n magic squares: d = n^2 - 2n parameters,
// one linear form per cell, skeleton = d cells whose forms make up a
// unimodular block (their values determine the parameters integrally; for
// n >= 4 they are the parameters themselves), unit_point = parameter vector
// of the all-ones square.
struct FormSystem {
    int n = 0, d = 0, t = 0;
    std::vector<LinearForm> forms;  // indexed by cell-1
    std::vector<int> skeleton;
    std::vector<long long> unit_point;

    IntMatrix coefficient_matrix() const;
    // Rows for cells outside the skeleton; optionally reports their cell ids.
    IntMatrix nontrivial_matrix(std::vector<int>* cells = nullptr) const;
    bool is_skeleton_cell(int cell) const;

    std::string content_hash() const;
    nlohmann::json to_json() const;
    static FormSystem from_json(const nlohmann::json& j);
};

ConstraintMatrix build_constraint_matrix(int n);

// 2n vectors; the k-th satisfies constraint rows 1..k-1 and violates row k,
// certifying that no constraint is implied by the ones before it.
std::vector<std::vector<long long>> certificate_vectors(int n);

FormSystem build_system(int n);

// Fill an n x n magic square (n >= 5) from its d skeleton values; throws if
// the final redundant row-sum check fails (it cannot, by construction).
std::vector<std::vector<Int>> complete_skeleton(int n, const std::vector<Int>& values);

// Full consistency check: shapes, A * M = 0, rank d, unimodular skeleton
// submatrix, and every form evaluating to 1 at the unit point.
bool verify_z_basis(const FormSystem& sys, std::string* why = nullptr);

}  // namespace magicsq
