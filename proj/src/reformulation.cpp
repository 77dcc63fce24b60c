#include "cdr/reformulation.hpp"

#include <cmath>
#include <stdexcept>

namespace cdr {

namespace {

using linalg::hermitian_part;
using linalg::kron;

// J^-H x J^-1 for Hermitian x, via two triangular solves.
CMatrix congruence(const CMatrix& j, const CMatrix& x) {
  const auto upper = j.triangularView<Eigen::Upper>();
  const CMatrix left = upper.adjoint().solve(x);
  return upper.adjoint().solve(CMatrix(left.adjoint())).adjoint();
}

CMatrix as_row(const CRowVector& v) { return v; }
CMatrix as_row_t(const CVector& v) { return v.transpose(); }

}  // namespace

QuadraticForms build_forms(const ChannelSet& cs, double node_power, double relay_budget) {
  const int m = cs.antennas();
  if (m < 1) throw std::invalid_argument("empty channel set");
  if (!(node_power > 0.0) || !(relay_budget > 0.0)) {
    throw std::invalid_argument("powers must be positive");
  }
  const double p = node_power;
  const auto n = static_cast<Eigen::Index>(m) * m;
  const CMatrix eye_m = CMatrix::Identity(m, m);
  const CMatrix eye_n = CMatrix::Identity(n, n);

  QuadraticForms q;
  q.antennas = m;
  q.node_power = p;
  q.relay_power = relay_budget;
  q.channels = cs;

  // Power Gram: W h = (h^T ⊗ I) w and ||W||_F^2 = ||w||^2.
  const CMatrix t_rb = kron(as_row_t(cs.h_rb), eye_m);
  const CMatrix t_r1 = kron(as_row_t(cs.h_r1), eye_m);
  q.gram = hermitian_part(p * t_rb.adjoint() * t_rb + p * t_r1.adjoint() * t_r1 + eye_n);
  try {
    q.J = linalg::cholesky(q.gram);
  } catch (const NotPositiveDefinite&) {
    throw NotPositiveDefinite("constraint Gram not positive definite");
  }

  // BS link: h_br W h_r1 = (h_r1^T ⊗ h_br) w, h_br W = (I ⊗ h_br) w.
  const CMatrix s1 = kron(as_row_t(cs.h_r1), as_row(cs.h_br));
  const CMatrix n1 = kron(eye_m, as_row(cs.h_br));
  const CMatrix q1 = s1.adjoint() * s1;
  const CMatrix b1 = n1.adjoint() * n1;

  // UE2 link.
  const CMatrix via_ue1 = kron(as_row_t(cs.h_r1), as_row(cs.h_2r));
  const CMatrix via_bs = kron(as_row_t(cs.h_rb), as_row(cs.h_2r));
  q.a = via_ue1.adjoint();
  q.C1 = kron(eye_m, as_row(cs.h_2r));
  q.f = (cs.h_2b * via_ue1 - cs.h_21 * via_bs).adjoint();
  const double h21_sq = std::norm(cs.h_21);
  const CMatrix interference = h21_sq * q.C1.adjoint() * q.C1 + q.a * q.a.adjoint();

  const double reg = 1.0 / relay_budget;
  q.A = hermitian_part(congruence(q.J, p * q1 + b1) + reg * eye_n);
  q.B = hermitian_part(congruence(q.J, b1) + reg * eye_n);
  q.C = hermitian_part(congruence(q.J, interference + p * q.f * q.f.adjoint()) +
                       h21_sq * reg * eye_n);
  q.D = hermitian_part(congruence(q.J, interference) + h21_sq * reg * eye_n);
  return q;
}

CVector whiten(const QuadraticForms& forms, const Beamformer& w) {
  return forms.J.triangularView<Eigen::Upper>() * linalg::vec(w);
}

Beamformer lift(const QuadraticForms& forms, const CVector& w_tilde) {
  const double norm = w_tilde.norm();
  if (norm == 0.0) throw std::invalid_argument("zero vector");
  const CVector scaled = w_tilde * (std::sqrt(forms.relay_power) / norm);
  const CVector w = forms.J.triangularView<Eigen::Upper>().solve(scaled);
  return linalg::unvec(w, forms.antennas);
}

ObjectiveValue objective_G(const QuadraticForms& forms, const CVector& w_tilde) {
  if (w_tilde.squaredNorm() == 0.0) throw std::invalid_argument("zero vector");
  using linalg::quad_form;
  ObjectiveValue v;
  v.g1 = quad_form(forms.A, w_tilde) / quad_form(forms.B, w_tilde);
  v.g2 = quad_form(forms.C, w_tilde) / quad_form(forms.D, w_tilde);
  v.G = v.g1 * v.g2;
  return v;
}

CMatrix kkt_lhs(const QuadraticForms& forms, const CVector& w_tilde) {
  using linalg::quad_form;
  return quad_form(forms.B, w_tilde) * forms.D + quad_form(forms.D, w_tilde) * forms.B;
}

CMatrix kkt_rhs(const QuadraticForms& forms, const CVector& w_tilde) {
  using linalg::quad_form;
  return quad_form(forms.C, w_tilde) * forms.A + quad_form(forms.A, w_tilde) * forms.C;
}

double kkt_residual(const QuadraticForms& forms, const CVector& w_tilde) {
  const double g = objective_G(forms, w_tilde).G;
  const CVector rw = kkt_rhs(forms, w_tilde) * w_tilde;
  const CVector vw = kkt_lhs(forms, w_tilde) * w_tilde;
  const double denom = rw.norm();
  if (denom == 0.0) return 0.0;
  return (g * vw - rw).norm() / denom;
}

Solution make_solution(const QuadraticForms& forms, const CVector& direction,
                       std::string algorithm) {
  Solution s;
  s.algorithm = std::move(algorithm);
  const double norm = direction.norm();
  if (norm == 0.0) throw std::invalid_argument("zero vector");
  s.w_tilde = direction * (std::sqrt(forms.relay_power) / norm);
  s.W = lift(forms, s.w_tilde);
  s.rates = sum_rate(forms.channels, s.W, forms.node_power);
  s.objective = objective_G(forms, s.w_tilde).G;
  return s;
}

}  // namespace cdr
