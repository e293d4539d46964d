#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "noma/analytic.hpp"
#include "oracles.hpp"

using namespace noma;

namespace {

SystemConfig make(int n, double alpha1, double rho, double g, double f1 = 162.0, double f2 = 162.0,
                  double tp = 1e-3) {
  SystemParams p;
  p.n_antennas = n;
  p.alpha1 = alpha1;
  p.snr_linear = rho;
  p.gamma_th = g;
  p.t_packet_s = tp;
  p.mobility_u1 = MobilityProfile::from_doppler(f1);
  p.mobility_u2 = MobilityProfile::from_doppler(f2);
  return SystemConfig(p);
}

}  // namespace

TEST_CASE("cdf_gamma1 single antenna closed form") {
  // N = 1: F = 1 - e^{-g/(rho a1)} / (1 + g a2 / a1)
  for (double a1 : {0.2, 0.5, 0.9}) {
    for (double g : {0.1, 1.0, 3.0}) {
      const double rho = 50.0;
      const double expected = 1.0 - std::exp(-g / (rho * a1)) / (1.0 + g * (1.0 - a1) / a1);
      CHECK(cdf_gamma1(make(1, a1, rho, g), g) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("cdf_gamma1 agrees with the incomplete-gamma form and quadrature") {
  for (int n : {1, 2, 8, 32}) {
    for (double a1 : {0.1, 0.6, 0.95}) {
      for (double rho : {1.0, 100.0, 1e4}) {
        for (double g : {0.05, 1.0, 20.0}) {
          const double f = cdf_gamma1(make(n, a1, rho, g), g);
          CHECK(std::abs(f - oracle::cdf1_gamma_form(n, rho, a1, g)) < 1e-10);
          CHECK(std::abs(f - oracle::cdf1_quadrature(n, rho, a1, g)) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("cdf_gamma1 keeps relative precision for tiny outage") {
  const double g = 0.1;
  const double f = cdf_gamma1(make(8, 0.9, 1e4, g), g);
  CHECK(f > 0.0);
  CHECK(f < 1e-12);
  CHECK(f == doctest::Approx(oracle::cdf1_quadrature(8, 1e4, 0.9, g)).epsilon(1e-6));
}

TEST_CASE("cdf_gamma1 limits and errors") {
  const auto cfg = make(4, 0.5, 100.0, 1.0);
  CHECK(cdf_gamma1(cfg, 0.0) == 0.0);
  CHECK(cdf_gamma1(cfg, 1e9) == doctest::Approx(1.0));
  CHECK_THROWS_AS(cdf_gamma1(cfg, -1.0), std::domain_error);
  CHECK_THROWS_AS(cdf_gamma1(cfg, std::nan("")), std::domain_error);
  // Monotone in the threshold.
  double prev = 0.0;
  for (double g = 0.01; g < 100.0; g *= 1.5) {
    const double f = cdf_gamma1(cfg, g);
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("cdf_gamma2 is the Erlang CDF") {
  for (int n : {1, 2, 8, 128}) {
    const auto cfg = make(n, 0.3, 20.0, 1.0);
    for (double g : {0.1, 1.0, 14.0, 100.0, 2000.0}) {
      CHECK(std::abs(cdf_gamma2(cfg, g) - oracle::erlang_cdf(n, g / (20.0 * 0.7))) < 1e-13);
    }
  }
  CHECK(cdf(Stage::Stage2, make(2, 0.3, 20.0, 1.0), 1.0) == cdf_gamma2(make(2, 0.3, 20.0, 1.0), 1.0));
}

TEST_CASE("lcr_gamma2 against the Erlang crossing rate") {
  for (int n : {1, 2, 8}) {
    const auto cfg = make(n, 0.4, 10.0, 1.0, 30.0, 162.0);
    for (double g : {0.5, 3.0, 12.0}) {
      CHECK(lcr_gamma2(cfg, g) == doctest::Approx(oracle::lcr_erlang(n, 162.0, g / 6.0)).epsilon(1e-12));
    }
  }
  CHECK(lcr_gamma2(make(2, 0.4, 10.0, 1.0, 30.0, 0.0), 1.0) == 0.0);
}

TEST_CASE("lcr_gamma1 against Rice integration") {
  for (int n : {1, 2, 8}) {
    for (double a1 : {0.3, 0.7}) {
      for (double g : {0.3, 1.0, 4.0}) {
        for (auto [f1, f2] : {std::pair{162.0, 162.0}, std::pair{50.0, 162.0}, std::pair{162.0, 0.0},
                              std::pair{0.0, 162.0}}) {
          const double rho = 100.0;
          const double expected = oracle::lcr1_rice(n, rho, a1, g, f1, f2);
          CHECK(lcr_gamma1(make(n, a1, rho, g, f1, f2), g) == doctest::Approx(expected).epsilon(1e-7));
        }
      }
    }
  }
}

TEST_CASE("lcr_gamma1 reduces to the single-user rate as interference vanishes") {
  const double g = 1.0;
  const double rho = 100.0;
  const double a1 = 1.0 - 1e-9;
  const double single = oracle::lcr_erlang(2, 162.0, g / (rho * a1));
  CHECK(lcr_gamma1(make(2, a1, rho, g), g) == doctest::Approx(single).epsilon(1e-6));
  CHECK(lcr_gamma1(make(2, 0.5, rho, g, 0.0, 0.0), g) == 0.0);
  CHECK_THROWS_AS(lcr_gamma1(make(2, 0.5, rho, g), 0.0), std::domain_error);
}

TEST_CASE("lcr_gamma1 is continuous as f1 goes to zero") {
  const double g = 1.0;
  const double at_zero = lcr_gamma1(make(4, 0.6, 100.0, g, 0.0, 162.0), g);
  const double near_zero = lcr_gamma1(make(4, 0.6, 100.0, g, 1e-6, 162.0), g);
  CHECK(near_zero == doctest::Approx(at_zero).epsilon(1e-6));
}

TEST_CASE("markov_per") {
  const auto p = markov_per(0.1, 50.0, 1e-3);
  CHECK(p.total == doctest::Approx(1.0 - std::exp(-0.05 / 0.9) * 0.9).epsilon(1e-14));
  CHECK(p.outage_term == 0.1);
  CHECK(p.lcr_penalty == doctest::Approx(0.05));
  CHECK_FALSE(p.degenerate);
  CHECK(markov_per(0.0, 0.0, 1e-3).total == 0.0);
  // Tiny values must not cancel to zero.
  CHECK(markov_per(1e-20, 1e-15, 1e-3).total == doctest::Approx(1e-20 + 1e-18).epsilon(1e-12));
  const auto d = markov_per(1.0, 10.0, 1e-3);
  CHECK(d.degenerate);
  CHECK(d.total == 1.0);
}

TEST_CASE("PER stages and the union bound") {
  const auto cfg = make(2, 0.6, 1000.0, 1.0);
  const auto s1 = per_stage1(cfg);
  const auto s2 = per_stage2_conditional(cfg);
  CHECK(s1.outage_term == cdf_gamma1(cfg, 1.0));
  CHECK(s1.lcr_penalty == doctest::Approx(1e-3 * lcr_gamma1(cfg, 1.0)));
  CHECK(s2.outage_term == cdf_gamma2(cfg, 1.0));
  const auto b = per_stage2_bound(cfg);
  CHECK(b.raw == doctest::Approx(s1.total + s2.total));
  CHECK(b.clamped == b.raw);

  const auto bad = make(1, 0.5, 1.0, 5.0);
  const auto bb = per_stage2_bound(bad);
  CHECK(bb.raw > 1.0);
  CHECK(bb.clamped == 1.0);
}

TEST_CASE("asymptotic PER tracks the exact form when the penalty is small") {
  const auto cfg = make(8, 0.5, 1e4, 1.0, 162.0, 162.0, 1e-4);
  const double exact = per_stage1(cfg).total;
  CHECK(per_stage1_asymptotic(cfg) == doctest::Approx(exact).epsilon(0.01));
  CHECK(per_stage2_asymptotic(cfg) ==
        doctest::Approx(per_stage1_asymptotic(cfg) + cdf_gamma2(cfg, 1.0) + 1e-4 * lcr_gamma2(cfg, 1.0)));
}
