#pragma once

#include <tuple>
#include <vector>

#include "hypernorden/matrix.hpp"

namespace hypernorden {

/// Relative pivot threshold below which a matrix counts as singular.
inline constexpr double kSolvePivotTol = 1e-12;

/// Relative eigenvalue threshold below which an eigenvalue counts as zero.
inline constexpr double kInertiaZeroTol = 1e-10;

struct LuFactors {
  Matrix lu;              // combined L (unit diagonal) and U
  std::vector<int> perm;  // row permutation
};

/// LU factorization with partial (row) pivoting.
/// Throws SingularMatrixError when a pivot falls below kSolvePivotTol * max|A|.
LuFactors lu_factor(Matrix a);

Vector lu_solve(const LuFactors& f, Vector b);

/// Solve A x = b.
Vector solve(const Matrix& a, const Vector& b);

/// Dense inverse via LU.
Matrix invert(const Matrix& a);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi iteration (unsorted).
Vector jacobi_eigenvalues(Matrix a);

struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Signature counts of a symmetric matrix. Eigenvalues with |lambda| below
/// kInertiaZeroTol * max|A| count as zero. Throws DomainError on asymmetric
/// input (tolerance 1e-10, scaled by max|A| above 1).
Inertia inertia(const Matrix& a);

}  // namespace hypernorden
