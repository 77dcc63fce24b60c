#include "cdr/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cdr {

void SystemParams::validate() const {
  if (antennas < 1) throw std::invalid_argument("antennas must be >= 1");
  if (!(node_power > 0.0)) throw std::invalid_argument("node power must be positive");
  if (!(relay_power > 0.0)) throw std::invalid_argument("relay power must be positive");
}

namespace {

cplx draw_cn(std::normal_distribution<double>& normal, std::mt19937_64& rng) {
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

void check_dims(const ChannelSet& cs, const Beamformer& w) {
  const auto m = cs.h_r1.size();
  if (w.rows() != m || w.cols() != m || cs.h_rb.size() != m || cs.h_br.size() != m ||
      cs.h_2r.size() != m) {
    throw std::invalid_argument("beamformer and channel dimensions disagree");
  }
}

}  // namespace

ChannelSet sample_channels(const SystemParams& params, std::mt19937_64& rng) {
  params.validate();
  const int m = params.antennas;
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));

  ChannelSet cs;
  cs.h_r1.resize(m);
  cs.h_rb.resize(m);
  cs.h_br.resize(m);
  cs.h_2r.resize(m);
  for (int i = 0; i < m; ++i) cs.h_r1(i) = draw_cn(normal, rng);
  for (int i = 0; i < m; ++i) cs.h_rb(i) = draw_cn(normal, rng);
  for (int i = 0; i < m; ++i) cs.h_br(i) = draw_cn(normal, rng);
  for (int i = 0; i < m; ++i) cs.h_2r(i) = draw_cn(normal, rng);
  cs.h_21 = draw_cn(normal, rng);
  cs.h_2b = draw_cn(normal, rng);
  return cs;
}

double snr1(const ChannelSet& cs, const Beamformer& w, double node_power) {
  check_dims(cs, w);
  const CRowVector bw = cs.h_br * w;
  const cplx signal = (bw * cs.h_r1).value();
  return node_power * std::norm(signal) / (bw.squaredNorm() + 1.0);
}

double sinr2(const ChannelSet& cs, const Beamformer& w, double node_power) {
  check_dims(cs, w);
  const CRowVector uw = cs.h_2r * w;
  const cplx via_ue1 = (uw * cs.h_r1).value();
  const cplx via_bs = (uw * cs.h_rb).value();
  const double num = node_power * std::norm(cs.h_2b * via_ue1 - cs.h_21 * via_bs);
  const double den = std::norm(cs.h_21) * (uw.squaredNorm() + 1.0) + std::norm(via_ue1);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

double relay_power(const ChannelSet& cs, const Beamformer& w, double node_power) {
  check_dims(cs, w);
  return node_power * ((w * cs.h_rb).squaredNorm() + (w * cs.h_r1).squaredNorm()) +
         w.squaredNorm();
}

Beamformer scale_to_power(const ChannelSet& cs, const Beamformer& w, double node_power,
                          double relay_budget) {
  const double current = relay_power(cs, w, node_power);
  if (current == 0.0) throw std::invalid_argument("zero beamformer");
  return w * std::sqrt(relay_budget / current);
}

RatePair rates_from_sinr(double snr1_value, double sinr2_value) {
  RatePair r;
  r.degenerate = !std::isfinite(sinr2_value);
  r.r1 = 0.5 * std::log2(1.0 + snr1_value);
  r.r2 = 0.5 * std::log2(1.0 + sinr2_value);
  r.sum = r.r1 + r.r2;
  return r;
}

RatePair sum_rate(const ChannelSet& cs, const Beamformer& w, double node_power) {
  return rates_from_sinr(snr1(cs, w, node_power), sinr2(cs, w, node_power));
}

Beamformer pure_amplification(const ChannelSet& cs, double node_power, double relay_budget) {
  const auto m = cs.h_r1.size();
  const double denom = node_power * cs.h_rb.squaredNorm() +
                       node_power * cs.h_r1.squaredNorm() + static_cast<double>(m);
  return Beamformer::Identity(m, m) * std::sqrt(relay_budget / denom);
}

}  // namespace cdr
