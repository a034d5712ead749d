#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "support/oracles.hpp"
#include "tcomb/coherence.hpp"
#include "tcomb/errors.hpp"
#include "tcomb/sensitivity.hpp"
#include "tcomb/system.hpp"

using namespace tcomb;

namespace {

SystemSpec at_temperature(SystemSpec s, double t) {
  s.temperature_k = t;
  return s;
}

// (w0 / 2 lambda) (hbar lambda Q / kB T)^{1/3} with the oracle constants.
double oracle_n_opt(double f0, double ratio, double q, double t) {
  const double w0 = 2.0 * std::numbers::pi * f0;
  const double lambda = ratio * w0;
  return w0 / (2.0 * lambda) * std::cbrt(oracle::kHbar * lambda * q / (oracle::kBoltzmann * t));
}

}  // namespace

TEST_CASE("fig2 peak catalogue") {
  const SystemSpec spec = fig2_system();
  const auto cat = peak_catalog(spec, 100);
  CHECK(cat.q_star == 49);
  REQUIRE(cat.peaks.size() == 49);
  CHECK(cat.peaks.back().is_qstar);
  CHECK(cat.peaks.back().t_q == doctest::Approx(4.9e-4).epsilon(1e-12));
  CHECK(cat.missing == std::vector<int>{50});
  CHECK(cat.width_closed_form == doctest::Approx(4.9e-8).epsilon(0.01));
  for (std::size_t i = 1; i < cat.peaks.size(); ++i) {
    // Peaks sharpen towards the segment edge.
    CHECK(cat.peaks[i].gamma > cat.peaks[i - 1].gamma);
    CHECK(cat.peaks[i].height == 1.0);
  }

  const auto small = peak_catalog(spec, 4);
  REQUIRE(small.peaks.size() == 1);
  CHECK(small.peaks[0].q == 1);
  CHECK(small.missing == std::vector<int>{2});

  CHECK_THROWS_AS(peak_catalog(spec, 7), DomainError);
}

TEST_CASE("narrowest peak is Gaussian with the expansion width") {
  const SystemSpec spec = fig2_system();
  const int n = 100;
  const double tq = narrowest_peak_time(spec, n);
  const double gamma = peak_gamma(spec, n, 49);
  std::vector<double> ts, ls;
  TraceOptions opts;
  opts.pulses = n;
  for (int i = -200; i <= 200; ++i) {
    const double t = tq + i * (1.0 / gamma) / 200.0;
    ts.push_back(t);
    ls.push_back(std::exp(-0.5 * cpmg_chi(spec, opts, t)));
  }
  const auto fit = oracle::fit_gaussian(ts, ls, tq);
  CHECK(fit.gamma == doctest::Approx(gamma).epsilon(0.02));
  CHECK(fit.center == doctest::Approx(tq).epsilon(1e-9));
  CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-3));

  // Printed closed-form width is narrower than the fitted one by about sqrt(2).
  const double fitted_width = 2.0 * std::numbers::sqrt2 / fit.gamma;
  const double ratio = fitted_width / peak_width_closed_form(spec, n);
  CHECK(ratio > 1.3);
  CHECK(ratio < 1.5);
}

TEST_CASE("ideal sensitivity") {
  const SystemSpec spec = at_temperature(fig3_system(), 300.0);
  const double w = std::pow(2.0 * 100.0, 1.5) * 1e-3 * std::sqrt(oracle::kBoltzmann * 300.0 / oracle::kPlanck);
  CHECK(sensitivity_ideal(spec, 100) == doctest::Approx(2.3e-16 / w).epsilon(1e-12));
  CHECK(sensitivity_ideal(spec, 100) == doctest::Approx(3.25e-23).epsilon(0.01));

  std::vector<double> ns, etas;
  for (int n = 10; n <= 1000; n += 2) {
    ns.push_back(n);
    etas.push_back(sensitivity_ideal(spec, n));
  }
  CHECK(oracle::loglog_slope(ns, etas) == doctest::Approx(-1.5).epsilon(1e-9));
  CHECK(sensitivity_ideal(spec, 200) == doctest::Approx(sensitivity_ideal(spec, 100) / std::pow(2.0, 1.5)));

  CHECK_THROWS_AS(sensitivity_ideal(at_temperature(spec, 0.0), 100), DomainError);
  CHECK(high_temperature_regime(spec));
  CHECK_FALSE(high_temperature_regime(at_temperature(spec, 1e-6)));
}

TEST_CASE("penalties order the curves") {
  const SystemSpec spec = fig3_system();
  const auto curve = sensitivity_curve(spec, default_n_sweep());
  for (const auto& r : curve) {
    CAPTURE(r.pulses);
    CHECK(r.eta_t1 >= r.eta_ideal);
    CHECK(r.eta_t2 >= r.eta_ideal);
    CHECK(r.eta_q >= r.eta_ideal);
    CHECK(r.eta_all >= r.eta_t1);
    CHECK(r.eta_all >= r.eta_t2);
    CHECK(r.eta_all >= r.eta_q);
    CHECK(r.eta_all > 0.0);
    // Beyond the optimum the penalties grow like exp(N^3); an infinite eta is
    // only acceptable where the true value exceeds the double range.
    if (!std::isfinite(r.eta_all)) {
      const double log_penalty = 0.5 * finite_q_chi(spec, r.pulses, PenaltyRoute::closed) -
                                 std::log(background_coherence(r.pulses, r.t_qstar, spec)) +
                                 std::log(r.eta_ideal);
      CHECK(log_penalty > std::log(std::numeric_limits<double>::max()));
    }
  }
  const auto parallel = sensitivity_curve(spec, default_n_sweep(), PenaltyRoute::closed, 4);
  REQUIRE(parallel.size() == curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) CHECK(parallel[i].eta_all == curve[i].eta_all);

  SystemSpec low_contrast = spec;
  low_contrast.readout_contrast = 0.1;
  CHECK(sensitivity_full(low_contrast, 100) == doctest::Approx(10.0 * sensitivity_full(spec, 100)));
}

TEST_CASE("optimal pulse number") {
  const SystemSpec base = fig3_system();
  for (double t : {300.0, 1.0}) {
    CAPTURE(t);
    const SystemSpec spec = at_temperature(base, t);
    const double expected = oracle_n_opt(1e5, 1e-3, 1e9, t);
    CHECK(optimal_n_continuous(spec) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(optimal_N_analytic(at_temperature(base, 300.0)) == 126);
  CHECK(optimal_N_analytic(at_temperature(base, 1.0)) == 844);

  CHECK(eta_optimal_universal(base) == doctest::Approx(2.3e-23).epsilon(1e-12));
  SystemSpec better = base;
  better.quality_factor *= 100.0;
  CHECK(eta_optimal_universal(better) == doctest::Approx(eta_optimal_universal(base) / 10.0));

  // At the analytic optimum the closed-form penalty chi is exactly 1 and the
  // ideal sensitivity equals M / sqrt(f0 Q).
  const SystemSpec hot = at_temperature(base, 300.0);
  const double n = optimal_n_continuous(hot);
  const double lt2 = lambda_tilde_sq(hot);
  CHECK(4.0 * lt2 * n * n * n / (hot.omega0() * hot.omega0() * hot.quality_factor) ==
        doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(optimal_n_continuous(fig2_system()), DomainError);
}

TEST_CASE("numeric optimisation") {
  const SystemSpec spec = fig3_system();
  const SensitivityOptions q_only{Mechanisms::only_q(), PenaltyRoute::closed, {}};
  for (double t : {300.0, 1.0}) {
    const SystemSpec s = at_temperature(spec, t);
    const auto range = even_range(2, 4096);
    const auto r = optimize_sensitivity_numeric(s, range, q_only);
    CHECK(r.bracketed);
    CHECK(r.n_opt == optimal_N_analytic(s));
    // The Q-only optimum is e^{1/2} above M/sqrt(f0 Q).
    CHECK(r.eta_opt == doctest::Approx(std::exp(0.5) * r.eta_universal).epsilon(1e-3));
  }

  const auto narrow = even_range(2, 40);
  CHECK_THROWS_AS(optimize_sensitivity_numeric(spec, narrow, q_only), NoBracketError);
  const auto r = optimize_sensitivity_numeric(spec, narrow, q_only, false);
  CHECK_FALSE(r.bracketed);
  CHECK(r.n_opt == 40);

  const std::vector<int> unsorted{4, 2};
  CHECK_THROWS_AS(optimize_sensitivity_numeric(spec, unsorted, q_only), DomainError);
  const std::vector<int> odd{3, 5};
  CHECK_THROWS_AS(optimize_sensitivity_numeric(spec, odd, q_only), DomainError);
}

TEST_CASE("default sweep") {
  const auto n = default_n_sweep();
  CHECK(n.front() == 2);
  CHECK(n.back() == 2048);
  CHECK(std::is_sorted(n.begin(), n.end()));
  CHECK(std::find(n.begin(), n.end(), 256) != n.end());
  CHECK(std::find(n.begin(), n.end(), 258) == n.end());
  CHECK(std::find(n.begin(), n.end(), 272) != n.end());
}

TEST_CASE("mass shift inversion round trip") {
  // Shift the oscillator, read the exact coherence on the flank, invert.
  const SystemSpec spec = fig2_system();
  const int n = 100;
  const double tq = narrowest_peak_time(spec, n);
  const double gamma = peak_gamma(spec, n, 49);
  TraceOptions opts;
  opts.pulses = n;
  for (double offset : {0.5, 1.0, -1.0, 2.0}) {
    CAPTURE(offset);
    const double t = tq + offset / gamma;
    const double dm = 1e-7;
    const double l0 = std::exp(-0.5 * cpmg_chi(spec, opts, t));
    const double l1 = std::exp(-0.5 * cpmg_chi(spec.with_mass_shift(dm), opts, t));
    const double recovered = mass_shift_from_coherence((l1 - l0) / l0, gamma, t - tq, tq);
    CHECK(recovered == doctest::Approx(dm).epsilon(0.05));
  }
  CHECK_THROWS_AS(mass_shift_from_coherence(1e-3, gamma, 0.1 / gamma, tq), DomainError);
  CHECK_THROWS_AS(mass_shift_from_coherence(1e-3, gamma, 5.0 / gamma, tq), DomainError);
}
