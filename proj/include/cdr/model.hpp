#pragma once

#include <random>

#include "cdr/linalg.hpp"

namespace cdr {

/// Scenario constants. All powers are linear; every noise component has
/// unit variance.
struct SystemParams {
  int antennas = 1;           // relay antennas M
  double node_power = 1.0;    // P, shared by the BS and both UEs
  double relay_power = 1.0;   // P_R

  /// Throws std::invalid_argument if M < 1 or a power is not positive.
  void validate() const;
};

/// One realization of every link for the two slots. Channels are static
/// across the slots and no reciprocity is assumed between h_rb and h_br.
struct ChannelSet {
  CVector h_r1;      // UE1 -> relay (M x 1)
  CVector h_rb;      // BS -> relay (M x 1)
  CRowVector h_br;   // relay -> BS (1 x M)
  CRowVector h_2r;   // relay -> UE2 (1 x M)
  cplx h_21{};       // UE1 -> UE2, overheard in slot 1
  cplx h_2b{};       // BS -> UE2

  int antennas() const { return static_cast<int>(h_r1.size()); }
};

/// Relay processing matrix W (M x M); x_R = W y_R.
using Beamformer = CMatrix;

struct RatePair {
  double r1 = 0.0;   // bits/s/Hz, UE1 -> BS
  double r2 = 0.0;   // bits/s/Hz, BS -> UE2
  double sum = 0.0;
  bool degenerate = false;  // SINR2 denominator vanished
};

/// Draws every coefficient i.i.d. CN(0, 1): real and imaginary parts are
/// N(0, 1/2). Draw order is h_r1, h_rb, h_br, h_2r, h_21, h_2b with the real
/// part before the imaginary part of each entry.
ChannelSet sample_channels(const SystemParams& params, std::mt19937_64& rng);

/// SNR at the BS after cancelling its own slot-1 symbol:
/// P |h_br W h_r1|^2 / (||h_br W||^2 + 1).
double snr1(const ChannelSet& cs, const Beamformer& w, double node_power);

/// SINR of x2 at UE2 after zero-forcing x1 out of the virtual two-antenna
/// observation [y2[1], y2[2]]. Returns +inf in the probability-zero case
/// h_21 = 0 and h_2r W h_r1 = 0.
double sinr2(const ChannelSet& cs, const Beamformer& w, double node_power);

/// E[x_R^H x_R] = P (||W h_rb||^2 + ||W h_r1||^2) + ||W||_F^2.
double relay_power(const ChannelSet& cs, const Beamformer& w, double node_power);

/// c W with real c > 0 chosen so that relay_power equals relay_budget.
/// Throws std::invalid_argument("zero beamformer") for W = 0.
Beamformer scale_to_power(const ChannelSet& cs, const Beamformer& w, double node_power,
                          double relay_budget);

/// Half-rate log terms for the two flows; the 1/2 accounts for the two slots.
RatePair sum_rate(const ChannelSet& cs, const Beamformer& w, double node_power);
RatePair rates_from_sinr(double snr1_value, double sinr2_value);

/// Scaled identity at full relay power.
Beamformer pure_amplification(const ChannelSet& cs, double node_power, double relay_budget);

}  // namespace cdr
