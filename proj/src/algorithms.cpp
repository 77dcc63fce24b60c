#include "cdr/algorithms.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <Eigen/Cholesky>

#include "cdr/scalar_opt.hpp"

namespace cdr {

namespace {

using linalg::quad_form;

double half_log2(double g) { return 0.5 * std::log2(g); }

// Log-domain score; keeps the scalar searches in units of bits.
double rate_score(const QuadraticForms& forms, const CVector& direction) {
  if (direction.squaredNorm() == 0.0) return -std::numeric_limits<double>::infinity();
  return half_log2(objective_G(forms, direction).G);
}

CMatrix left_divide(const CMatrix& denom, const CMatrix& numer) {
  Eigen::LLT<CMatrix> llt(denom);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("not positive definite");
  return llt.solve(numer);
}

struct PowerResult {
  CVector vector;
  bool converged = false;
};

// Dominant eigenvector of a general square matrix. Each iterate is rotated
// onto the phase of the previous one so that a complex dominant eigenvalue
// does not register as motion.
PowerResult power_iteration(const CMatrix& m, CVector v, int max_iter, double tol) {
  v.normalize();
  for (int k = 0; k < max_iter; ++k) {
    CVector q = m * v;
    const double qn = q.norm();
    if (qn == 0.0) return {v, false};
    q /= qn;
    const cplx overlap = v.dot(q);
    if (std::abs(overlap) > 0.0) q *= std::conj(overlap) / std::abs(overlap);
    const double step = (q - v).norm();
    v = std::move(q);
    if (step < tol) return {v, true};
  }
  return {v, false};
}

// Projected gradient ascent of alpha g1 + (1 - alpha) g2 on the unit sphere.
CVector blended_ascent(const QuadraticForms& forms, double alpha, CVector w, int steps) {
  auto blend = [&](const CVector& x) {
    const ObjectiveValue v = objective_G(forms, x);
    return alpha * v.g1 + (1.0 - alpha) * v.g2;
  };
  w.normalize();
  double current = blend(w);
  double eta = 1.0;
  for (int s = 0; s < steps; ++s) {
    const double b = quad_form(forms.B, w);
    const double d = quad_form(forms.D, w);
    const ObjectiveValue v = objective_G(forms, w);
    CVector grad = alpha * (forms.A * w - v.g1 * forms.B * w) / b +
                   (1.0 - alpha) * (forms.C * w - v.g2 * forms.D * w) / d;
    grad -= w * w.dot(grad);  // tangent component
    if (grad.norm() == 0.0) break;
    bool improved = false;
    for (int t = 0; t < 40; ++t) {
      CVector trial = (w + eta * grad).normalized();
      const double value = blend(trial);
      if (value > current) {
        w = std::move(trial);
        current = value;
        improved = true;
        eta *= 2.0;
        break;
      }
      eta *= 0.5;
    }
    if (!improved) break;
  }
  return w;
}

}  // namespace

Solution max_snr1(const QuadraticForms& forms) {
  return make_solution(forms, linalg::gen_eig_max(forms.A, forms.B).vector, "maxsnr1");
}

Solution max_sinr2(const QuadraticForms& forms) {
  return make_solution(forms, linalg::gen_eig_max(forms.C, forms.D).vector, "maxsinr2");
}

Solution asa(const QuadraticForms& forms, const AsaConfig& cfg) {
  const CVector w1 = linalg::gen_eig_max(forms.A, forms.B).vector;
  const CVector w2 = linalg::gen_eig_max(forms.C, forms.D).vector;
  const CMatrix b_inv_a = left_divide(forms.B, forms.A);
  const CMatrix d_inv_c = left_divide(forms.D, forms.C);
  CVector start = w1 + w2;
  if (start.squaredNorm() < 1e-12) start = w1;

  struct Candidate {
    CVector direction;
    bool fallback = false;
  };
  auto principal = [&](double alpha) -> Candidate {
    if (alpha <= 0.0) return {w2, false};
    if (alpha >= 1.0) return {w1, false};
    const CMatrix pi = alpha * b_inv_a + (1.0 - alpha) * d_inv_c;
    PowerResult pr = power_iteration(pi, start, cfg.power_iterations, cfg.eig_tol);
    if (pr.converged) return {std::move(pr.vector), false};
    auto blend = [&](const CVector& x) {
      const ObjectiveValue v = objective_G(forms, x);
      return alpha * v.g1 + (1.0 - alpha) * v.g2;
    };
    const CVector& from = blend(w1) >= blend(w2) ? w1 : w2;
    return {blended_ascent(forms, alpha, from, cfg.fallback_steps), true};
  };

  const scalar_opt::Box box{{0.0}, {1.0}};
  auto score = [&](const scalar_opt::Point& x) {
    return rate_score(forms, principal(x[0]).direction);
  };
  const auto best = scalar_opt::maximize(score, box, cfg.grid_points, cfg.tol);
  const double alpha = best.x[0];
  Candidate chosen = principal(alpha);
  Solution s = make_solution(forms, chosen.direction, "asa");
  s.fallback = chosen.fallback;
  s.parameter = alpha;
  s.iterations = best.evaluations;
  return s;
}

CVector pia_initial_direction(const QuadraticForms& forms, PiaInit init) {
  switch (init) {
    case PiaInit::PureAmp:
      return whiten(forms, pure_amplification(forms.channels, forms.node_power,
                                               forms.relay_power));
    case PiaInit::MaxSnr1:
      return linalg::gen_eig_max(forms.A, forms.B).vector;
    case PiaInit::MaxSinr2:
      return linalg::gen_eig_max(forms.C, forms.D).vector;
    case PiaInit::Ones:
      return CVector::Ones(forms.dim());
  }
  return CVector::Ones(forms.dim());
}

Solution pia(const QuadraticForms& forms, const PiaConfig& cfg) {
  if (cfg.max_iter < 1) throw std::invalid_argument("pia: max_iter must be >= 1");
  const double radius = std::sqrt(forms.relay_power);
  const auto n = forms.dim();

  CVector w = pia_initial_direction(forms, cfg.init);
  w *= radius / w.norm();
  double g = objective_G(forms, w).G;
  CVector best = w;
  double peak_g = g;
  bool converged = false;
  bool ridge_used = false;
  int iterations = 0;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    iterations = it;
    const CMatrix v = kkt_lhs(forms, w);
    const CVector rhs = kkt_rhs(forms, w) * w;
    Eigen::LLT<CMatrix> llt(v);
    CVector q;
    if (llt.info() == Eigen::Success) {
      q = llt.solve(rhs);
    } else {
      const double ridge = 1e-12 * v.trace().real() / static_cast<double>(n);
      q = linalg::solve(v + ridge * CMatrix::Identity(n, n), rhs);
      ridge_used = true;
    }
    const double qn = q.norm();
    if (!(qn > 0.0) || !std::isfinite(qn)) break;
    w = q * (radius / qn);
    const double g_next = objective_G(forms, w).G;
    // G is flat to rounding near a fixed point; prefer the later iterate there.
    if (g_next >= peak_g * (1.0 - 1e-14)) best = w;
    peak_g = std::max(peak_g, g_next);
    const bool settled = std::abs(g_next - g) / g < cfg.rel_tol;
    g = g_next;
    if (settled) {
      converged = true;
      break;
    }
  }

  Solution s = make_solution(forms, best, "pia");
  s.iterations = iterations;
  s.converged = converged;
  s.fallback = ridge_used;
  return s;
}

Solution lss(const QuadraticForms& forms, const LssConfig& cfg) {
  const CVector w1 = linalg::gen_eig_max(forms.A, forms.B).vector;
  CVector w2 = linalg::gen_eig_max(forms.C, forms.D).vector;
  if (cfg.phase_align) {
    const cplx overlap = w1.dot(w2);
    if (std::abs(overlap) > 0.0) w2 *= std::conj(overlap) / std::abs(overlap);
  }

  constexpr double half_pi = std::numbers::pi / 2.0;
  constexpr double snap = 1e-14;
  // w~1 + tan(theta) e^{i phi} w~2, up to the positive factor cos(theta).
  auto direction = [&](double theta, double phi) -> CVector {
    if (std::abs(theta) < snap) return w1;
    if (half_pi - std::abs(theta) < snap) return w2;
    const cplx coeff = std::sin(theta) * std::polar(1.0, phi);
    return std::cos(theta) * w1 + coeff * w2;
  };

  scalar_opt::OptResult best;
  double theta = 0.0;
  double phi = 0.0;
  if (cfg.complex_coefficient) {
    const scalar_opt::Box box{{-half_pi, 0.0}, {half_pi, std::numbers::pi}};
    best = scalar_opt::maximize(
        [&](const scalar_opt::Point& x) { return rate_score(forms, direction(x[0], x[1])); },
        box, cfg.grid_points, cfg.tol);
    theta = best.x[0];
    phi = best.x[1];
  } else {
    const scalar_opt::Box box{{-half_pi}, {half_pi}};
    best = scalar_opt::maximize(
        [&](const scalar_opt::Point& x) { return rate_score(forms, direction(x[0], 0.0)); },
        box, cfg.grid_points, cfg.tol);
    theta = best.x[0];
  }

  Solution s = make_solution(forms, direction(theta, phi), "lss");
  s.parameter = (half_pi - std::abs(theta) < snap) ? std::copysign(
                                                         std::numeric_limits<double>::infinity(),
                                                         theta)
                                                   : std::tan(theta);
  s.iterations = best.evaluations;
  return s;
}

}  // namespace cdr
