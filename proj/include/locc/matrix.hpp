#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace locc {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Numerical comparison thresholds used throughout the library.
/// `rel` gates spectral cutoffs (singular values, eigenvalues) relative to the
/// largest one; `abs` gates entrywise and trace-level comparisons.
struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-9;
};

/// Number of singular values exceeding tol.rel times the largest one.
/// The zero matrix has rank 0. Throws std::invalid_argument on an empty matrix.
int numeric_rank(const Mat& m, Tolerance tol = {});

/// Kronecker product, row-major block convention: out((i*rb)+k, (j*cb)+l) =
/// a(i,j) * b(k,l).
Mat kron(const Mat& a, const Mat& b);

/// Orthogonal projector onto the range of a Hermitian PSD matrix (eigenvectors
/// with eigenvalue > tol.rel * lambda_max). Throws std::invalid_argument if the
/// input is not Hermitian within tol.abs.
Mat support_projector(const Mat& m, Tolerance tol = {});

/// True iff a = c*U for some scalar c != 0 and unitary U, i.e. a†a is a
/// nonzero multiple of the identity within tol.abs (relative to that multiple).
bool is_proportional_unitary(const Mat& a, Tolerance tol = {});

/// Entrywise comparison: max |a-b| <= atol. Shapes must match exactly.
bool approx_equal(const Mat& a, const Mat& b, double atol);

/// max |entry| <= atol.
bool is_zero(const Mat& m, double atol);

}  // namespace locc
