#pragma once

#include "cdr/reformulation.hpp"

namespace cdr {

enum class PiaInit { PureAmp, MaxSnr1, MaxSinr2, Ones };

struct PiaConfig {
  int max_iter = 20;
  double rel_tol = 1e-8;
  PiaInit init = PiaInit::PureAmp;
};

struct AsaConfig {
  int grid_points = 51;
  double tol = 1e-6;
  int power_iterations = 200;
  double eig_tol = 1e-10;
  int fallback_steps = 50;
};

struct LssConfig {
  int grid_points = 51;
  double tol = 1e-6;
  bool phase_align = false;         // rotate w~2 so that w~1^H w~2 is real positive
  bool complex_coefficient = false;  // search b = tan(theta) e^{i phi} instead of real b
};

/// Principal generalized eigenvector of (A, B) at full power; maximizes SNR1.
Solution max_snr1(const QuadraticForms& forms);

/// Principal generalized eigenvector of (C, D) at full power; maximizes SINR2.
Solution max_sinr2(const QuadraticForms& forms);

/// Adaptive subspace averaging.
///
/// For each alpha in [0, 1] takes the dominant eigenvector of
///   Pi(alpha) = alpha B^-1 A + (1 - alpha) D^-1 C
/// and scores it with the true objective G. alpha is chosen by a grid that
/// contains both endpoints followed by Nelder-Mead. At alpha = 0 and 1 the
/// eigenvector is the generalized one used by the single-flow baselines.
/// Elsewhere it comes from power iteration on Pi(alpha); if that does not
/// settle, alpha g1 + (1 - alpha) g2 is climbed by projected ascent from the
/// better baseline instead and Solution::fallback is set.
Solution asa(const QuadraticForms& forms, const AsaConfig& cfg = {});

/// Fixed-point (power) iteration on G V(w~) w~ = R(w~) w~:
///   q = V(w~)^-1 R(w~) w~,  w~ <- sqrt(P_R) q / ||q||,
/// until the relative change of G drops below rel_tol or max_iter steps.
/// Returns the best iterate seen. Solution::fallback marks a ridge-regularized
/// solve of a numerically singular V.
Solution pia(const QuadraticForms& forms, const PiaConfig& cfg = {});

/// Best member of the real line w~1 + b w~2 spanned by the two baseline
/// directions. b = tan(theta) with theta on [-pi/2, pi/2], so b = 0 and
/// b = +-inf (pure w~2) are both grid points.
Solution lss(const QuadraticForms& forms, const LssConfig& cfg = {});

/// Starting direction for PIA (not normalized).
CVector pia_initial_direction(const QuadraticForms& forms, PiaInit init);

}  // namespace cdr
