#include <doctest.h>

#include <cmath>

#include "cdr/algorithms.hpp"
#include "cdr/upper_bound.hpp"
#include "oracles.hpp"

using namespace cdr;

namespace {

CMatrix row_kron(const CVector& col_channel, const CRowVector& row_channel) {
  return linalg::kron(CMatrix(col_channel.transpose()), CMatrix(row_channel));
}

CMatrix id_kron(const CVector& col_channel, int m) {
  return linalg::kron(CMatrix(col_channel.transpose()), CMatrix::Identity(m, m));
}

// Sub-rates through a dense generalized eigenproblem, no spectral shortcuts.
double dense_subrate1(const ChannelSet& cs, double p, double kappa, double p1) {
  const int m = cs.antennas();
  const CMatrix s = row_kron(cs.h_r1, cs.h_br);
  const CMatrix b = linalg::kron(CMatrix::Identity(m, m), CMatrix(cs.h_br));
  const CMatrix e = p * id_kron(cs.h_r1, m).adjoint() * id_kron(cs.h_r1, m) +
                    kappa * CMatrix::Identity(m * m, m * m);
  const double lambda =
      linalg::gen_eig_max(p * s.adjoint() * s, b.adjoint() * b + e / p1).value;
  return 0.5 * std::log2(1.0 + lambda);
}

double dense_subrate2(const ChannelSet& cs, double p, double kappa, double p2) {
  const int m = cs.antennas();
  const CMatrix via_ue1 = row_kron(cs.h_r1, cs.h_2r);
  const CMatrix via_bs = row_kron(cs.h_rb, cs.h_2r);
  const CMatrix f = (cs.h_2b * via_ue1 - cs.h_21 * via_bs).adjoint();
  const CMatrix c1 = linalg::kron(CMatrix::Identity(m, m), CMatrix(cs.h_2r));
  const double h21 = std::norm(cs.h_21);
  const CMatrix e = p * id_kron(cs.h_rb, m).adjoint() * id_kron(cs.h_rb, m) +
                    kappa * CMatrix::Identity(m * m, m * m);
  const CMatrix den = h21 * c1.adjoint() * c1 + via_ue1.adjoint() * via_ue1 + (h21 / p2) * e;
  const double lambda = linalg::gen_eig_max(p * f * f.adjoint(), den).value;
  return 0.5 * std::log2(1.0 + lambda);
}

}  // namespace

TEST_SUITE("upper_bound") {

TEST_CASE("sub-rates are monotone in power and noise fraction") {
  for (int t = 0; t < 20; ++t) {
    const int m = 1 + t % 4;
    const ChannelSet cs = oracle::random_channels(m, 5000 + t);
    const BoundEvaluator ev(cs, 100.0);
    for (double p : {0.5, 5.0, 50.0}) {
      for (double k : {0.9, 0.5, 0.1, 0.01}) {
        CHECK(ev.subrate1(k, 2.0 * p) >= ev.subrate1(k, p));
        CHECK(ev.subrate1(k / 2.0, p) >= ev.subrate1(k, p));
        CHECK(ev.subrate2(k, 2.0 * p) >= ev.subrate2(k, p));
        CHECK(ev.subrate2(k / 2.0, p) >= ev.subrate2(k, p));
      }
    }
    CHECK(ev.subrate1(0.5, 0.0) == 0.0);
    CHECK(ev.subrate2(0.5, 0.0) == 0.0);
    CHECK_THROWS_AS(ev.subrate1(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ev.subrate2(0.0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("spectral sub-rates agree with the dense eigenproblem") {
  for (int t = 0; t < 30; ++t) {
    const int m = 1 + t % 4;
    const ChannelSet cs = oracle::random_channels(m, 5100 + t);
    const double p = std::pow(10.0, (t % 4) * 0.8);
    for (double k : {0.001, 0.3, 0.999}) {
      for (double pk : {0.01 * p, 0.5 * p, p}) {
        CHECK(subrate1(cs, p, k, pk) == doctest::Approx(dense_subrate1(cs, p, k, pk)).epsilon(1e-9));
        CHECK(subrate2(cs, p, k, pk) == doctest::Approx(dense_subrate2(cs, p, k, pk)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("sub-rates match constrained random search at M = 2") {
  constexpr long kSamples = 200000;
  for (int t = 0; t < 3; ++t) {
    const ChannelSet cs = oracle::random_channels(2, 5200 + t);
    const double p = 100.0;
    const double kappa = 0.3 + 0.2 * t;
    const double budget = 40.0 + 20.0 * t;

    // sub-problem 1: tight constraint P||W h_r1||^2 + kappa ||W||^2 = P1
    auto project1 = [&](const CMatrix& w) {
      const double used = p * (w * cs.h_r1).squaredNorm() + kappa * w.squaredNorm();
      return CMatrix(w * std::sqrt(budget / used));
    };
    auto score1 = [&](const CMatrix& w) {
      return 0.5 * std::log2(1.0 + oracle::snr1_signal_model(cs, w, p));
    };
    const double search1 = oracle::projected_random_search(2, kSamples, 5300 + t, score1, project1);
    const double exact1 = subrate1(cs, p, kappa, budget);
    CHECK(exact1 >= search1 - 1e-12);
    CHECK(exact1 <= search1 + 1e-3);

    // sub-problem 2: P||W h_rb||^2 + kappa ||W||^2 = P2
    auto project2 = [&](const CMatrix& w) {
      const double used = p * (w * cs.h_rb).squaredNorm() + kappa * w.squaredNorm();
      return CMatrix(w * std::sqrt(budget / used));
    };
    auto score2 = [&](const CMatrix& w) {
      return 0.5 * std::log2(1.0 + oracle::sinr2_zero_forcing(cs, w, p));
    };
    const double search2 = oracle::projected_random_search(2, kSamples, 5400 + t, score2, project2);
    const double exact2 = subrate2(cs, p, kappa, budget);
    CHECK(exact2 >= search2 - 1e-12);
    CHECK(exact2 <= search2 + 1e-3);
  }
}

TEST_CASE("inner max dominates random power splits") {
  for (int t = 0; t < 10; ++t) {
    const ChannelSet cs = oracle::random_channels(2 + t % 3, 5500 + t);
    const BoundEvaluator ev(cs, 100.0);
    const BoundSearchConfig cfg;
    auto rng = oracle::rng_for(5600 + t);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double k1 : {0.05, 0.5, 0.95}) {
      const InnerMax in = ev.inner_max(k1, 100.0, cfg);
      CHECK(in.value == doctest::Approx(in.r1 + in.r2).epsilon(1e-12));
      CHECK(in.p1 >= 0.0);
      CHECK(in.p1 <= 100.0);
      for (int s = 0; s < 50; ++s) {
        const double p1 = 100.0 * u(rng);
        CHECK(in.value >= ev.subrate1(k1, p1) + ev.subrate2(1.0 - k1, 100.0 - p1) - 1e-12);
      }
    }
  }
}

TEST_CASE("breakdown is self-consistent") {
  const ChannelSet cs = oracle::random_channels(3, 5700);
  const BoundBreakdown b = r_ub(cs, 100.0, 100.0);
  CHECK(b.r_ub == doctest::Approx(b.r1_at_opt + b.r2_at_opt).epsilon(1e-12));
  CHECK(b.kappa1 + b.kappa2() == 1.0);
  CHECK(b.kappa1 >= 1e-3);
  CHECK(b.kappa1 <= 1.0 - 1e-3);
  CHECK(b.p1 >= 0.0);
  CHECK(b.p1 <= 100.0);
  CHECK(b.refine_delta >= 0.0);
  CHECK(b.grid_min - b.r_ub == doctest::Approx(b.refine_delta));
  CHECK(b.kappa_points == 21);
  CHECK(b.power_points == 21);
  CHECK(b.evaluations > 0);
  CHECK(b.r1_at_opt == doctest::Approx(subrate1(cs, 100.0, b.kappa1, b.p1)).epsilon(1e-12));
}

TEST_CASE("finite over a power sweep") {
  const ChannelSet cs = oracle::random_channels(4, 5800);
  double prev = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double p = std::pow(10.0, -1.0 + 0.2 * i);
    const double v = r_ub(cs, p, p).r_ub;
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
    CHECK(v >= prev - 1e-3);  // no jumps downward as power grows
    prev = v;
  }
}

TEST_CASE("a coarser kappa grid cannot lower the grid minimum") {
  for (int t = 0; t < 10; ++t) {
    const ChannelSet cs = oracle::random_channels(2 + t % 2, 5900 + t);
    BoundSearchConfig fine;
    fine.refine = false;
    BoundSearchConfig coarse = fine;
    coarse.kappa_points = 11;  // every 11-point node is a 21-point node
    const double g_fine = r_ub(cs, 100.0, 100.0, fine).grid_min;
    const double g_coarse = r_ub(cs, 100.0, 100.0, coarse).grid_min;
    CHECK(g_coarse >= g_fine - 1e-12);
  }
}

TEST_CASE("bound dominates every solver") {
  for (int t = 0; t < 40; ++t) {
    const int m = t % 2 == 0 ? 2 : 4;
    const double p = t % 4 < 2 ? 10.0 : 100.0;
    const ChannelSet cs = oracle::random_channels(m, 6000 + t);
    const double bound = r_ub(cs, p, p).r_ub;
    const QuadraticForms q = build_forms(cs, p, p);
    for (const Solution& s : {max_snr1(q), max_sinr2(q), asa(q), pia(q), lss(q)}) {
      CHECK(s.rates.sum <= bound + 1e-6);
    }
    CHECK(sum_rate(cs, pure_amplification(cs, p, p), p).sum <= bound + 1e-6);
  }
}

TEST_CASE("missing direct link") {
  ChannelSet cs = oracle::random_channels(2, 6100);
  cs.h_21 = 0.0;
  const BoundEvaluator ev(cs, 10.0);
  CHECK(std::isinf(ev.subrate2(0.5, 1.0)));
}

}  // TEST_SUITE
