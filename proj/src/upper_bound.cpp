#include "cdr/upper_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cdr/scalar_opt.hpp"

namespace cdr {

namespace {

struct Spectrum {
  Eigen::VectorXd values;  // clamped at 0
  CMatrix vectors;
};

Spectrum psd_spectrum(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitian_part(m));
  Spectrum s{es.eigenvalues().cwiseMax(0.0), es.eigenvectors()};
  return s;
}

// Eigenvalues of outer ⊗ I + ... laid out on the index l*M + k.
void kron_grid(const Spectrum& outer, const Spectrum& inner, Eigen::VectorXd& outer_vals,
               Eigen::VectorXd& inner_vals) {
  const auto m = inner.values.size();
  outer_vals.resize(m * m);
  inner_vals.resize(m * m);
  for (Eigen::Index l = 0; l < m; ++l) {
    for (Eigen::Index k = 0; k < m; ++k) {
      outer_vals(l * m + k) = outer.values(l);
      inner_vals(l * m + k) = inner.values(k);
    }
  }
}

double half_log2p1(double x) { return 0.5 * std::log2(1.0 + x); }

}  // namespace

BoundEvaluator::BoundEvaluator(const ChannelSet& cs, double node_power)
    : node_power_(node_power), h21_sq_(std::norm(cs.h_21)) {
  if (!(node_power > 0.0)) throw std::invalid_argument("node power must be positive");

  // Sub-problem 1: B1 = I ⊗ h_br^H h_br, E1 ∝ (conj(h_r1) h_r1^T) ⊗ I.
  const Spectrum u1 = psd_spectrum(cs.h_br.adjoint() * cs.h_br);
  const Spectrum v1 = psd_spectrum(cs.h_r1.conjugate() * cs.h_r1.transpose());
  kron_grid(v1, u1, y1_, x1_);
  const CMatrix basis1 = linalg::kron(v1.vectors, u1.vectors);
  const CMatrix s1 = linalg::kron(CMatrix(cs.h_r1.transpose()), CMatrix(cs.h_br));
  const CVector g = basis1.adjoint() * s1.adjoint();
  g_weight_ = g.cwiseAbs2();

  // Sub-problem 2: C1^H C1 = I ⊗ h_2r^H h_2r, E2 ∝ (conj(h_rb) h_rb^T) ⊗ I.
  const Spectrum u2 = psd_spectrum(cs.h_2r.adjoint() * cs.h_2r);
  const Spectrum v2 = psd_spectrum(cs.h_rb.conjugate() * cs.h_rb.transpose());
  kron_grid(v2, u2, y2_, x2_);
  const CMatrix basis2 = linalg::kron(v2.vectors, u2.vectors);
  const CMatrix via_ue1 = linalg::kron(CMatrix(cs.h_r1.transpose()), CMatrix(cs.h_2r));
  const CMatrix via_bs = linalg::kron(CMatrix(cs.h_rb.transpose()), CMatrix(cs.h_2r));
  a_ = basis2.adjoint() * via_ue1.adjoint();
  f_ = basis2.adjoint() * (cs.h_2b * via_ue1 - cs.h_21 * via_bs).adjoint();
}

double BoundEvaluator::subrate1(double kappa1, double p1) const {
  if (!(kappa1 > 0.0)) throw std::invalid_argument("subrate1: kappa1 must be positive");
  if (p1 < 0.0) throw std::invalid_argument("subrate1: negative power");
  if (p1 == 0.0) return 0.0;
  double lambda = 0.0;
  for (Eigen::Index i = 0; i < g_weight_.size(); ++i) {
    const double den = x1_(i) + (node_power_ * y1_(i) + kappa1) / p1;
    lambda += g_weight_(i) / den;
  }
  return half_log2p1(node_power_ * lambda);
}

double BoundEvaluator::subrate2(double kappa2, double p2) const {
  if (!(kappa2 > 0.0)) throw std::invalid_argument("subrate2: kappa2 must be positive");
  if (p2 < 0.0) throw std::invalid_argument("subrate2: negative power");
  if (p2 == 0.0) return 0.0;
  if (h21_sq_ == 0.0) return std::numeric_limits<double>::infinity();
  double ff = 0.0;
  double aa = 0.0;
  cplx fa = 0.0;
  for (Eigen::Index i = 0; i < f_.size(); ++i) {
    const double den = h21_sq_ * (x2_(i) + (node_power_ * y2_(i) + kappa2) / p2);
    ff += std::norm(f_(i)) / den;
    aa += std::norm(a_(i)) / den;
    fa += std::conj(f_(i)) * a_(i) / den;
  }
  const double lambda = std::max(0.0, ff - std::norm(fa) / (1.0 + aa));
  return half_log2p1(node_power_ * lambda);
}

InnerMax BoundEvaluator::inner_max(double kappa1, double relay_budget,
                                   const BoundSearchConfig& cfg) const {
  const double kappa2 = 1.0 - kappa1;
  auto split = [&](double t) {
    const double p1 = std::clamp(t, 0.0, 1.0) * relay_budget;
    const double p2 = std::max(0.0, relay_budget - p1);
    return std::pair{subrate1(kappa1, p1), subrate2(kappa2, p2)};
  };
  const scalar_opt::Box box{{0.0}, {1.0}};
  const auto best = scalar_opt::maximize(
      [&](const scalar_opt::Point& x) {
        const auto [r1, r2] = split(x[0]);
        return r1 + r2;
      },
      box, cfg.power_points, cfg.inner_tol);
  const auto [r1, r2] = split(best.x[0]);
  InnerMax out;
  out.p1 = best.x[0] * relay_budget;
  out.r1 = r1;
  out.r2 = r2;
  out.value = r1 + r2;
  out.evaluations = best.evaluations;
  return out;
}

double subrate1(const ChannelSet& cs, double node_power, double kappa1, double p1) {
  return BoundEvaluator(cs, node_power).subrate1(kappa1, p1);
}

double subrate2(const ChannelSet& cs, double node_power, double kappa2, double p2) {
  return BoundEvaluator(cs, node_power).subrate2(kappa2, p2);
}

BoundBreakdown r_ub(const ChannelSet& cs, double node_power, double relay_budget,
                    const BoundSearchConfig& cfg) {
  if (!(relay_budget > 0.0)) throw std::invalid_argument("relay power must be positive");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5)) {
    throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  }
  const BoundEvaluator eval(cs, node_power);
  BoundBreakdown out;
  out.kappa_points = cfg.kappa_points;
  out.power_points = cfg.power_points;

  auto outer = [&](const scalar_opt::Point& x) {
    const InnerMax im = eval.inner_max(x[0], relay_budget, cfg);
    out.evaluations += im.evaluations;
    return -im.value;
  };
  const scalar_opt::Box box{{cfg.epsilon}, {1.0 - cfg.epsilon}};
  const auto coarse = scalar_opt::grid_search(outer, box, cfg.kappa_points);
  out.grid_min = -coarse.value;
  out.grid_kappa1 = coarse.x[0];

  double kappa1 = coarse.x[0];
  if (cfg.refine) {
    const auto fine = scalar_opt::nelder_mead(outer, box, coarse.x, cfg.outer_tol, 200);
    if (fine.value > coarse.value) kappa1 = fine.x[0];
  }

  const InnerMax at = eval.inner_max(kappa1, relay_budget, cfg);
  out.evaluations += at.evaluations;
  out.kappa1 = kappa1;
  out.p1 = at.p1;
  out.r1_at_opt = at.r1;
  out.r2_at_opt = at.r2;
  out.r_ub = at.r1 + at.r2;
  out.refine_delta = out.grid_min - out.r_ub;
  return out;
}

}  // namespace cdr
