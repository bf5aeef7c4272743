#pragma once

#include <cstddef>
#include <span>

#include "cascade/matrix.hpp"

namespace cascade::numerics {

struct SpectralResult {
  double radius = 0.0;
  Vector eigenvector;  // nonnegative, unit 1-norm on the dominant block
  std::size_t iterations = 0;
  bool converged = false;
};

inline constexpr double kPowerTolerance = 1e-10;
inline constexpr std::size_t kPowerMaxIterations = 10'000;

/// P = (I - C)^{-1} by LU with partial pivoting.
///
/// C must be square, nonnegative, with every column sum strictly below one;
/// that makes I - C a nonsingular M-matrix and P elementwise nonnegative.
/// Entries of P within 1e-12 of zero are clamped to exactly 0.
/// Throws NegativeEntry, NotSchur (column sum >= 1), or Singular.
Matrix invert_i_minus_c(const Matrix& c);

/// Dominant (Perron-Frobenius) eigenvalue of a square nonnegative matrix.
///
/// The matrix is split into strongly connected components; the radius is the
/// largest over the irreducible diagonal blocks. Each block runs power iteration
/// from the uniform vector on B + aI, a = max column sum of B, which keeps
/// periodic blocks from oscillating, and stops once the Collatz-Wielandt bounds
/// min_i (Bx)_i / x_i <= lambda <= max_i (Bx)_i / x_i are within tol.
/// `eigenvector` is the Perron vector of the dominant block, zero elsewhere.
/// Non-convergence is reported through `converged`, never thrown.
SpectralResult frobenius_eigenvalue(const Matrix& m, double tol = kPowerTolerance,
                                    std::size_t max_iter = kPowerMaxIterations);

/// True iff every column sum is < 1. Throws NegativeEntry if C has a negative entry.
bool is_schur_by_column_sums(const Matrix& c);

/// M[indices, indices]. Throws IndexOutOfRange on empty, duplicate or out-of-range indices.
Matrix principal_submatrix(const Matrix& m, std::span<const std::size_t> indices);

/// Solve A x = b by LU with partial pivoting. Throws Singular.
Vector solve(const Matrix& a, std::span<const double> b);

}  // namespace cascade::numerics
