#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace cdr {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Raised when a matrix expected to be Hermitian positive definite is not.
class NotPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by solve() on a (numerically) singular system.
class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenPair {
  double value = 0.0;
  CVector vector;
};

namespace linalg {

/// (X + X^H) / 2
CMatrix hermitian_part(const CMatrix& x);

/// Kronecker product a ⊗ b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Column-major vectorization; vec(M W N) = (N^T ⊗ M) vec(W).
CVector vec(const CMatrix& w);
CMatrix unvec(const CVector& w, Eigen::Index rows);

/// Rotates v so that its largest-magnitude component is real and positive.
/// Ties resolve to the lowest index.
void fix_phase(CVector& v);

/// Upper-triangular J with J^H J = k.
///
/// Only the lower triangle of k is read. Throws NotPositiveDefinite on a
/// non-positive pivot.
CMatrix cholesky(const CMatrix& k);

/// Largest eigenvalue of a Hermitian matrix and a unit-norm eigenvector
/// with the phase convention of fix_phase().
EigenPair hermitian_eig_max(const CMatrix& h);

/// Maximizer of the generalized Rayleigh quotient x^H a x / x^H b x with
/// b positive definite. Solved by whitening b = J^H J, taking the principal
/// eigenvector u of J^-H a J^-1 and mapping back x = J^-1 u. The returned
/// vector is unit norm and phase-fixed.
EigenPair gen_eig_max(const CMatrix& a, const CMatrix& b);

/// General dense solve k x = y. Throws SingularMatrix when k is rank
/// deficient to working precision.
CVector solve(const CMatrix& k, const CVector& y);

/// x^H m x for Hermitian m (imaginary roundoff dropped).
double quad_form(const CMatrix& m, const CVector& x);

}  // namespace linalg
}  // namespace cdr
