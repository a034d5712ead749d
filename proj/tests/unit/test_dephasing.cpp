#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "support/oracles.hpp"
#include "tcomb/dephasing.hpp"
#include "tcomb/errors.hpp"
#include "tcomb/pulse_sequence.hpp"
#include "tcomb/spectrum.hpp"
#include "tcomb/system.hpp"

using namespace tcomb;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("pulse sequence validation") {
  CHECK_THROWS_AS(PulseSequence(1.0, {0.5, 0.4}), DomainError);
  CHECK_THROWS_AS(PulseSequence(1.0, {0.0}), DomainError);
  CHECK_THROWS_AS(PulseSequence(1.0, {1.0}), DomainError);
  CHECK_THROWS_AS(PulseSequence(-1.0, {}), DomainError);
  CHECK_THROWS_AS(PulseSequence::cpmg(-1, 1.0), DomainError);
  CHECK_THROWS_AS(PulseSequence::cpmg(3, 0.0), DomainError);
  CHECK(PulseSequence::cpmg(0, 1.0).pulse_count() == 0);

  const auto seq = PulseSequence::cpmg(4, 8.0);
  REQUIRE(seq.pulse_count() == 4);
  CHECK(seq.pulse_times()[0] == doctest::Approx(1.0));
  CHECK(seq.pulse_times()[3] == doctest::Approx(7.0));
}

TEST_CASE("modulation integral against a Simpson grid") {
  const double omega = 2.0 * std::numbers::pi * 1e5;
  SUBCASE("Hahn echo") {
    const double t = 3.3e-5;
    const auto seq = PulseSequence::cpmg(1, t);
    const auto exact = modulation_integral(seq, omega);
    const auto grid = oracle::grid_modulation_integral(seq.pulse_times(), t, omega);
    CHECK(std::abs(exact - grid) <= 1e-8 * t);
  }
  SUBCASE("irregular sequence") {
    const double t = 1.7e-4;
    const std::vector<double> times{1.1e-5, 2.9e-5, 6.0e-5, 1.2e-4, 1.65e-4};
    const PulseSequence seq(t, times);
    const auto exact = modulation_integral(seq, omega);
    const auto grid = oracle::grid_modulation_integral(times, t, omega, 400000);
    CHECK(std::abs(exact - grid) <= 1e-8 * t);
  }
  SUBCASE("free evolution") {
    const double t = 1e-3;
    const auto f = modulation_integral(PulseSequence::free_evolution(t), omega);
    const double expected = 2.0 * std::abs(std::sin(omega * t / 2.0)) / omega;
    CHECK(std::abs(f) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("closed form, general sequence and textbook filter agree") {
  const SystemSpec spec = fig2_system();
  const double w0 = spec.omega0();
  const double lt2 = lambda_tilde_sq(spec);
  const auto line = delta_spectrum(spec);
  for (int n : {2, 3, 8, 100, 101}) {
    for (double t : {1.234e-5, 9.87e-5, 4.9e-4, 1.0e-3 + 3e-7}) {
      CAPTURE(n);
      CAPTURE(t);
      if (cpmg_divergent(n, w0, t)) continue;
      const auto closed = chi_cpmg_closed(n, w0, lt2, t);
      const double general = chi_delta_general(PulseSequence::cpmg(n, t), line);
      const double textbook = lt2 * oracle::cpmg_filter_textbook(n, t, w0);
      CHECK(closed.odd_variant == (n % 2 == 1));
      if (closed.value > 1e-12) {
        CHECK(rel_diff(closed.value, general) < 1e-9);
        CHECK(rel_diff(closed.value, textbook) < 1e-9);
      } else {
        CHECK(std::abs(closed.value - general) < 1e-9);
      }
    }
  }
}

TEST_CASE("parity rule matters") {
  const SystemSpec spec = fig2_system();
  const double t = 1.37e-4;
  const double lt2 = lambda_tilde_sq(spec);
  const auto odd = chi_cpmg_closed(101, spec.omega0(), lt2, t);
  const double general = chi_delta_general(PulseSequence::cpmg(101, t), delta_spectrum(spec));
  CHECK(rel_diff(odd.value, general) < 1e-9);
  // The even-N expression would be wrong here.
  const double x = spec.omega0() * t / 202.0;
  const double sec1 = 1.0 / std::cos(x) - 1.0;
  const double even_formula =
      4.0 * lt2 / (spec.omega0() * spec.omega0()) * sec1 * sec1 * std::pow(std::sin(spec.omega0() * t / 2.0), 2);
  CHECK(rel_diff(even_formula, general) > 1e-3);
}

TEST_CASE("zeros and divergences") {
  const SystemSpec spec = fig2_system();
  const double w0 = spec.omega0();
  const double lt2 = lambda_tilde_sq(spec);
  const double t0 = spec.period();
  for (int n : {2, 10, 100}) {
    // Whole periods: full refocusing.
    for (int k : {1, 7, n / 2 - 1, n / 2 + 1}) {
      if (k < 1 || cpmg_divergent(n, w0, k * t0)) continue;
      CAPTURE(k);
      CHECK(chi_cpmg_closed(n, w0, lt2, k * t0).value < 1e-12);
    }
    // Odd multiples of N/2 periods put a pulse spacing at half a period.
    const double t_div = (n / 2) * t0;
    CHECK(cpmg_divergent(n, w0, t_div));
    CHECK(std::isinf(chi_cpmg_closed(n, w0, lt2, t_div).value));
    CHECK_FALSE(cpmg_divergent(n, w0, t_div * (1.0 + 1e-6)));
  }
  CHECK(chi_cpmg_closed(100, w0, lt2, 0.0).value == 0.0);
}

TEST_CASE("delta line through the quadrature entry point") {
  const SystemSpec spec = fig2_system();
  const auto seq = PulseSequence::cpmg(100, 4.9e-4 + 1e-8);
  const auto line = delta_spectrum(spec);
  const auto q = chi_spectral_quadrature(seq, line);
  CHECK(q.value == doctest::Approx(chi_delta_general(seq, line)).epsilon(1e-14));
  CHECK(q.error_estimate == 0.0);
}

TEST_CASE("Lorentzian chi against a brute-force integral") {
  SystemSpec spec = fig3_system();
  const double lt2 = lambda_tilde_sq(spec);
  for (int n : {100, 126}) {
    CAPTURE(n);
    const double t = (n / 2 - 1) * spec.period();
    const auto q = chi_spectral_quadrature(PulseSequence::cpmg(n, t), lorentzian_spectrum(spec));
    const double brute = oracle::brute_force_lorentzian_chi(n, t, lt2, spec.omega0(), spec.kappa());
    CHECK(rel_diff(q.value, brute) < 1e-4);
    CHECK(q.error_estimate <= std::max(1e-10, 1e-6 * q.value));
  }
}

TEST_CASE("generic Lorentzian path matches the CPMG path") {
  SystemSpec spec = fig3_system();
  const int n = 20;
  const double t = (n / 2 - 1) * spec.period();
  const auto cpmg = PulseSequence::cpmg(n, t);
  std::vector<double> times(cpmg.pulse_times().begin(), cpmg.pulse_times().end());
  times.front() = std::nextafter(times.front(), 0.0);
  const auto fast = chi_spectral_quadrature(cpmg, lorentzian_spectrum(spec));
  const auto slow = chi_spectral_quadrature(PulseSequence(t, times), lorentzian_spectrum(spec));
  CHECK(rel_diff(fast.value, slow.value) < 1e-5);
  const double brute = oracle::brute_force_lorentzian_chi(n, t, lambda_tilde_sq(spec), spec.omega0(), spec.kappa());
  CHECK(rel_diff(slow.value, brute) < 1e-4);
}

TEST_CASE("Lorentzian limits") {
  SystemSpec spec = fig2_system();
  const int n = 100;
  const double t = 4.9e-4 + 2e-7;  // off the refocusing point so the delta chi is not zero
  const auto seq = PulseSequence::cpmg(n, t);
  const double delta_chi = chi_delta_general(seq, delta_spectrum(spec));

  SUBCASE("high Q recovers the delta line") {
    spec.quality_factor = 1e15;
    const auto q = chi_spectral_quadrature(seq, lorentzian_spectrum(spec));
    CHECK(rel_diff(q.value, delta_chi) < 1e-4);
  }

  SUBCASE("chi at the refocusing point shrinks with Q") {
    const double tq = 49.0 * spec.period();
    const auto seq_q = PulseSequence::cpmg(n, tq);
    double previous = std::numeric_limits<double>::infinity();
    for (double q : {1e6, 1e7, 1e8, 1e9}) {
      spec.quality_factor = q;
      const double chi = chi_spectral_quadrature(seq_q, lorentzian_spectrum(spec)).value;
      CHECK(chi > 0.0);
      CHECK(chi < previous);
      previous = chi;
    }
  }

  SUBCASE("linear in lambda_tilde^2") {
    spec.quality_factor = 1e8;
    const double tq = 49.0 * spec.period();
    const auto seq_q = PulseSequence::cpmg(n, tq);
    auto line = lorentzian_spectrum(spec);
    const double base = chi_spectral_quadrature(seq_q, line).value;
    line.lambda_tilde_sq *= 3.0;
    CHECK(chi_spectral_quadrature(seq_q, line).value == doctest::Approx(3.0 * base).epsilon(1e-6));
  }
}

TEST_CASE("quadrature budget exhaustion is reported") {
  SystemSpec spec = fig3_system();
  const auto seq = PulseSequence::cpmg(126, 62.0 * spec.period());
  QuadratureOptions tight;
  tight.max_intervals = 4;
  tight.abs_tol = 1e-30;
  tight.rel_tol = 1e-15;
  try {
    (void)chi_spectral_quadrature(seq, lorentzian_spectrum(spec), tight);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.value()));
    CHECK(e.error_estimate() >= 0.0);
  }
}
