#pragma once

#include <string>

#include "cdr/linalg.hpp"
#include "cdr/model.hpp"

namespace cdr {

/// Whitened product-of-quotients form of the sum-rate problem.
///
/// With w = vec(W) (column-major) and the relay power Gram
///   K = P (h_rb^T ⊗ I)^H (h_rb^T ⊗ I) + P (h_r1^T ⊗ I)^H (h_r1^T ⊗ I) + I = J^H J,
/// the substitution w~ = J w turns the power budget into ||w~||^2 = P_R and
///   (1 + SNR1)(1 + SINR2) = (w~^H A w~ / w~^H B w~) (w~^H C w~ / w~^H D w~)
/// for every full-power w~. The "+1" noise terms are absorbed as
/// ||w~||^2 / P_R, which is why G is scale invariant.
///
/// Immutable after build_forms(); safe to share between threads.
struct QuadraticForms {
  int antennas = 0;
  double node_power = 0.0;
  double relay_power = 0.0;
  ChannelSet channels;

  CMatrix A, B, C, D;  // Hermitian, M^2 x M^2
  CMatrix gram;        // K
  CMatrix J;           // upper triangular, J^H J = K

  CVector a;    // (h_r1^T ⊗ h_2r)^H
  CMatrix C1;   // I ⊗ h_2r
  CVector f;    // f^H = h_2b (h_r1^T ⊗ h_2r) - h_21 (h_rb^T ⊗ h_2r)

  Eigen::Index dim() const { return A.rows(); }
};

struct ObjectiveValue {
  double G = 0.0;
  double g1 = 0.0;  // w~^H A w~ / w~^H B w~ = 1 + SNR1 at full power
  double g2 = 0.0;  // w~^H C w~ / w~^H D w~ = 1 + SINR2 at full power
};

/// Output of every beamforming solver.
struct Solution {
  std::string algorithm;
  CVector w_tilde;     // ||w~||^2 = P_R
  Beamformer W;        // lifted, relay_power(W) = P_R
  RatePair rates;
  double objective = 0.0;  // G(w~)
  int iterations = 0;
  bool converged = true;
  bool fallback = false;   // solver used its numerical fallback path
  double parameter = 0.0;  // alpha for ASA, b for LSS
};

QuadraticForms build_forms(const ChannelSet& cs, double node_power, double relay_budget);

/// J vec(W); no rescaling.
CVector whiten(const QuadraticForms& forms, const Beamformer& w);

/// unvec(J^-1 sqrt(P_R) w~ / ||w~||). Throws on a zero vector.
Beamformer lift(const QuadraticForms& forms, const CVector& w_tilde);

ObjectiveValue objective_G(const QuadraticForms& forms, const CVector& w_tilde);

/// ||G V w~ - R w~|| / ||R w~|| with V = (w~^H B w~) D + (w~^H D w~) B and
/// R = (w~^H C w~) A + (w~^H A w~) C; zero exactly at stationary points of G.
double kkt_residual(const QuadraticForms& forms, const CVector& w_tilde);

/// V(w~) and R(w~) as used by kkt_residual and the power iteration.
CMatrix kkt_lhs(const QuadraticForms& forms, const CVector& w_tilde);
CMatrix kkt_rhs(const QuadraticForms& forms, const CVector& w_tilde);

/// Scales a direction to ||w~||^2 = P_R, lifts it and evaluates rates and G.
Solution make_solution(const QuadraticForms& forms, const CVector& direction,
                       std::string algorithm);

}  // namespace cdr
