#include "cdr/linalg.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace cdr::linalg {

CMatrix hermitian_part(const CMatrix& x) {
  return (x + x.adjoint()) * 0.5;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector vec(const CMatrix& w) {
  return Eigen::Map<const CVector>(w.data(), w.size());
}

CMatrix unvec(const CVector& w, Eigen::Index rows) {
  if (rows <= 0 || w.size() % rows != 0) {
    throw std::invalid_argument("unvec: length is not a multiple of rows");
  }
  return Eigen::Map<const CMatrix>(w.data(), rows, w.size() / rows);
}

void fix_phase(CVector& v) {
  if (v.size() == 0) return;
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > best_abs) {
      best_abs = m;
      best = i;
    }
  }
  if (best_abs > 0.0) {
    v *= std::conj(v(best)) / best_abs;
    v(best) = cplx(std::abs(v(best)), 0.0);
  }
}

CMatrix cholesky(const CMatrix& k) {
  if (k.rows() != k.cols()) throw std::invalid_argument("cholesky: matrix not square");
  Eigen::LLT<CMatrix, Eigen::Lower> llt(k);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("not positive definite");
  }
  return llt.matrixU();
}

EigenPair hermitian_eig_max(const CMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("hermitian_eig_max: matrix not square");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig_max: eigensolver did not converge");
  }
  const Eigen::Index top = h.rows() - 1;  // eigenvalues are ascending
  EigenPair out{es.eigenvalues()(top), es.eigenvectors().col(top)};
  out.vector.normalize();
  fix_phase(out.vector);
  return out;
}

EigenPair gen_eig_max(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("gen_eig_max: dimension mismatch");
  }
  const CMatrix j = cholesky(b);
  const auto upper = j.triangularView<Eigen::Upper>();
  // J^-H a J^-1 = (J^-H (J^-H a)^H)^H, both via triangular solves.
  const CMatrix left = upper.adjoint().solve(a);
  const CMatrix whitened = upper.adjoint().solve(CMatrix(left.adjoint())).adjoint();
  EigenPair top = hermitian_eig_max(whitened);
  CVector x = upper.solve(top.vector);
  x.normalize();
  fix_phase(x);
  return {top.value, std::move(x)};
}

CVector solve(const CMatrix& k, const CVector& y) {
  if (k.rows() != k.cols() || k.rows() != y.size()) {
    throw std::invalid_argument("solve: dimension mismatch");
  }
  Eigen::FullPivLU<CMatrix> lu(k);
  if (!lu.isInvertible()) throw SingularMatrix("singular matrix");
  return lu.solve(y);
}

double quad_form(const CMatrix& m, const CVector& x) {
  return x.dot(m * x).real();
}

}  // namespace cdr::linalg
