#pragma once

#include "cdr/model.hpp"

namespace cdr {

struct BoundSearchConfig {
  int kappa_points = 21;
  int power_points = 21;
  double epsilon = 1e-3;     // kappa1 is searched on [eps, 1 - eps]
  double outer_tol = 1e-4;   // Nelder-Mead tolerance on the outer min, bits
  double inner_tol = 1e-12;  // Nelder-Mead tolerance on the inner max, bits
  bool refine = true;        // Nelder-Mead on kappa1 after the grid
};

struct BoundBreakdown {
  double r_ub = 0.0;
  double kappa1 = 0.0;
  double p1 = 0.0;
  double r1_at_opt = 0.0;
  double r2_at_opt = 0.0;

  double kappa2() const { return 1.0 - kappa1; }

  // diagnostics
  int kappa_points = 0;
  int power_points = 0;
  double grid_min = 0.0;       // outer minimum over the kappa grid alone
  double grid_kappa1 = 0.0;
  double refine_delta = 0.0;   // grid_min - r_ub, >= 0
  int evaluations = 0;         // subrate pairs evaluated
};

struct InnerMax {
  double value = 0.0;  // R1(kappa1, P1) + R2(kappa2, P_R - P1)
  double p1 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  int evaluations = 0;
};

/// Split-beamformer sub-rates of one channel realization.
///
/// Each sub-problem is a generalized Rayleigh quotient with a rank-one
/// numerator once the (tight) power constraint replaces the unit noise
/// term:
///   R1 = 1/2 log2(1 + P g^H (B1 + E1/P1)^-1 g),
///   R2 = 1/2 log2(1 + P f^H (|h21|^2 C1^H C1 + a a^H + |h21|^2 E2/P2)^-1 f).
/// Every denominator term except a a^H is a Kronecker sum of two rank-one
/// M x M matrices, so it is diagonal in the product of their eigenbases;
/// a a^H is folded in with Sherman-Morrison. Evaluations cost O(M^2).
class BoundEvaluator {
 public:
  BoundEvaluator(const ChannelSet& cs, double node_power);

  /// R1(kappa1, P1); 0 at P1 = 0. Throws std::invalid_argument unless kappa1 > 0.
  double subrate1(double kappa1, double p1) const;
  /// R2(kappa2, P2); 0 at P2 = 0. Throws std::invalid_argument unless kappa2 > 0.
  double subrate2(double kappa2, double p2) const;

  /// max over P1 in [0, P_R] of R1(kappa1, P1) + R2(1 - kappa1, P_R - P1).
  InnerMax inner_max(double kappa1, double relay_budget, const BoundSearchConfig& cfg) const;

 private:
  double node_power_;
  double h21_sq_;
  // sub-problem 1 spectra, index l*M + k
  Eigen::VectorXd x1_, y1_, g_weight_;
  // sub-problem 2
  Eigen::VectorXd x2_, y2_;
  CVector f_, a_;
};

double subrate1(const ChannelSet& cs, double node_power, double kappa1, double p1);
double subrate2(const ChannelSet& cs, double node_power, double kappa2, double p2);

/// min over kappa1 of max over P1 of R1(kappa1, P1) + R2(1 - kappa1, P_R - P1).
/// The kappa1 grid is followed (optionally) by Nelder-Mead on kappa1; each
/// outer evaluation solves the inner max by grid plus Nelder-Mead. Ties in
/// either grid go to the lowest index.
BoundBreakdown r_ub(const ChannelSet& cs, double node_power, double relay_budget,
                    const BoundSearchConfig& cfg = {});

}  // namespace cdr
