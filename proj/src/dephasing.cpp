#include "tcomb/dephasing.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <vector>

#include "tcomb/errors.hpp"

namespace tcomb {

namespace {

constexpr double kSmallArgument = 1e-6;

// sin(x)/x with the series below the small-argument threshold.
double sinc(double x) {
  if (std::abs(x) < 0.5 * kSmallArgument) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// Each segment contributes dt e^{i w mid} sinc(w dt / 2): exact for all w,
// including the w -> 0 limit sum_j (-1)^j dt_j.
std::complex<double> segment_sum(const PulseSequence& seq, double omega) {
  const auto pulses = seq.pulse_times();
  std::complex<double> sum{0.0, 0.0};
  double start = 0.0;
  double sign = 1.0;
  for (std::size_t j = 0; j <= pulses.size(); ++j) {
    const double end = j < pulses.size() ? pulses[j] : seq.total_time();
    const double dt = end - start;
    const double phase = omega * 0.5 * (start + end);
    sum += sign * dt * sinc(0.5 * omega * dt) * std::complex<double>(std::cos(phase), std::sin(phase));
    start = end;
    sign = -sign;
  }
  return sum;
}

// Telescoped form [(-1)^N e^{iwt} - 1 + 2 sum_k (-1)^{k-1} e^{iw t_k}] / (iw):
// one exponential per pulse, used once w t is well away from zero.
std::complex<double> telescoped_sum(const PulseSequence& seq, double omega) {
  const auto pulses = seq.pulse_times();
  std::complex<double> inner{0.0, 0.0};
  double sign = 1.0;
  for (double tk : pulses) {
    const double phase = omega * tk;
    inner += sign * std::complex<double>(std::cos(phase), std::sin(phase));
    sign = -sign;
  }
  const double end_phase = omega * seq.total_time();
  // sign now equals (-1)^N.
  const std::complex<double> numerator =
      sign * std::complex<double>(std::cos(end_phase), std::sin(end_phase)) - 1.0 + 2.0 * inner;
  return numerator / std::complex<double>(0.0, omega);
}

void silence_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

// |F|^2 of a CPMG sequence as a function of detuning nu from w0,
//   16 sin^4(x/2) c^2 / (w^2 cos^2 x),  x = w t / 2N,
// with c = sin(w t / 2) for even N and cos(w t / 2) for odd N. Every phase is
// split into its w0 part (evaluated once) plus its nu part, so the filter
// stays smooth in nu at detunings far below the ulp of w0.
class CpmgFilter {
 public:
  CpmgFilter(const PulseSequence& seq, double omega0)
      : seq_(&seq), omega0_(omega0), t_(seq.total_time()), n_(seq.pulse_count()) {
    const double half_phase = 0.5 * omega0 * t_;
    sin_half_ = std::sin(half_phase);
    cos_half_ = std::cos(half_phase);
    const double x0 = half_phase / n_;
    sin_x0_ = std::sin(x0);
    cos_x0_ = std::cos(x0);
    sin_quarter_ = std::sin(0.5 * x0);
    cos_quarter_ = std::cos(0.5 * x0);
  }

  double operator()(double nu) const {
    const double omega = omega0_ + nu;
    const double dphase = 0.5 * nu * t_;
    const double dx = dphase / n_;
    const double cos_x = cos_x0_ * std::cos(dx) - sin_x0_ * std::sin(dx);
    if (!(omega > 0.0) || std::abs(cos_x) < 1e-2) return std::norm(modulation_integral(*seq_, omega));
    const double s = sin_quarter_ * std::cos(0.5 * dx) + cos_quarter_ * std::sin(0.5 * dx);
    const double c = n_ % 2 == 0 ? sin_half_ * std::cos(dphase) + cos_half_ * std::sin(dphase)
                                 : cos_half_ * std::cos(dphase) - sin_half_ * std::sin(dphase);
    const double ratio = s * s / (omega * cos_x);
    return 16.0 * ratio * ratio * c * c;
  }

 private:
  const PulseSequence* seq_;
  double omega0_;
  double t_;
  int n_;
  double sin_half_, cos_half_, sin_x0_, cos_x0_, sin_quarter_, cos_quarter_;
};

bool is_cpmg(const PulseSequence& seq) {
  if (seq.pulse_count() < 1) return false;
  const auto reference = PulseSequence::cpmg(seq.pulse_count(), seq.total_time());
  return std::ranges::equal(seq.pulse_times(), reference.pulse_times());
}

struct LorentzianIntegrand {
  const PulseSequence* seq;
  const CpmgFilter* cpmg;  // null for a general sequence
  double omega0;
  double kappa;
  double amplitude;  // lambda_tilde^2 / pi

  // Integration variable is the detuning nu = w - w0 so the Lorentzian stays
  // resolvable for kappa far below the ulp of w0.
  double operator()(double nu) const {
    const double filter = cpmg != nullptr ? (*cpmg)(nu) : std::norm(modulation_integral(*seq, omega0 + nu));
    return amplitude * kappa / (nu * nu + kappa * kappa) * filter;
  }

  static double call(double nu, void* self) {
    return (*static_cast<const LorentzianIntegrand*>(self))(nu);
  }
};

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};
using Workspace = std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter>;

// Breakpoints in detuning: decade layers resolving the Lorentzian core,
// one-period panels of the fastest filter oscillation over the
// fundamental and third-harmonic region, then geometric panels to the edge.
std::vector<double> detuning_breakpoints(double omega0, double kappa, double t, double nu_hi) {
  const double lo = -omega0;
  const double period = 2.0 * std::numbers::pi / t;
  std::vector<double> pts{lo, nu_hi};
  if (lo < 0.0 && 0.0 < nu_hi) pts.push_back(0.0);
  for (double layer = kappa; layer > 0.0 && layer < period; layer *= 10.0) {
    if (layer < nu_hi) pts.push_back(layer);
    if (-layer > lo) pts.push_back(-layer);
  }
  const double fine_end = std::min(3.0 * omega0, nu_hi);
  const double first_fine = std::max(kappa * 10.0, period);
  for (double nu = first_fine; nu < fine_end; nu += period) pts.push_back(nu);
  for (double nu = -first_fine; nu > lo; nu -= period) pts.push_back(nu);
  for (double nu = std::max(fine_end, period) * 1.1; nu < nu_hi; nu *= 1.1) pts.push_back(nu);

  std::sort(pts.begin(), pts.end());
  std::vector<double> unique;
  unique.reserve(pts.size());
  for (double p : pts) {
    if (unique.empty() || p - unique.back() > 1e-12 * std::max(1.0, std::abs(p))) {
      unique.push_back(p);
    }
  }
  return unique;
}

}  // namespace

std::complex<double> modulation_integral(const PulseSequence& seq, double omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw DomainError("modulation_integral needs a finite omega >= 0");
  }
  if (omega * seq.total_time() < 1.0) return segment_sum(seq, omega);
  return telescoped_sum(seq, omega);
}

double chi_delta_general(const PulseSequence& seq, const NoiseSpectrum& spectrum) {
  const auto* line = std::get_if<DeltaLine>(&spectrum);
  if (line == nullptr) throw DomainError("chi_delta_general needs a delta-line spectrum");
  return line->lambda_tilde_sq * std::norm(modulation_integral(seq, line->omega0));
}

bool cpmg_divergent(int pulses, double omega0, double t) {
  if (pulses < 1) return false;
  const double x = omega0 * t / (2.0 * pulses);
  return std::abs(std::cos(x)) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x);
}

CpmgChi chi_cpmg_closed(int pulses, double omega0, double lambda_tilde_sq, double t) {
  if (pulses < 1) throw DomainError("CPMG closed form needs N >= 1");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and non-negative");
  const bool odd = pulses % 2 != 0;
  if (cpmg_divergent(pulses, omega0, t)) {
    return {std::numeric_limits<double>::infinity(), odd};
  }
  const double x = omega0 * t / (2.0 * pulses);
  const double half_x = std::sin(0.5 * x);
  // sec x - 1 = 2 sin^2(x/2) / cos x, free of cancellation at small x.
  const double sec_minus_one = 2.0 * half_x * half_x / std::cos(x);
  const double half_phase = 0.5 * omega0 * t;
  const double carrier = odd ? std::cos(half_phase) : std::sin(half_phase);
  const double value = 4.0 * lambda_tilde_sq / (omega0 * omega0) * sec_minus_one * sec_minus_one *
                       carrier * carrier;
  return {value, odd};
}

QuadratureResult chi_spectral_quadrature(const PulseSequence& seq, const NoiseSpectrum& spectrum,
                                         const QuadratureOptions& options) {
  if (std::holds_alternative<DeltaLine>(spectrum)) {
    return {chi_delta_general(seq, spectrum), 0.0};
  }
  const auto& lor = std::get<Lorentzian>(spectrum);
  if (!(lor.kappa > 0.0) || !std::isfinite(lor.kappa)) {
    throw DomainError("Lorentzian needs a finite kappa > 0");
  }
  const double t = seq.total_time();
  if (t == 0.0) return {0.0, 0.0};

  silence_gsl();
  const int n = std::max(1, seq.pulse_count());
  const double nu_hi = std::max(50.0 * lor.kappa, 20.0 * 2.0 * std::numbers::pi * n / t);
  std::vector<double> pts = detuning_breakpoints(lor.omega0, lor.kappa, t, nu_hi);

  const std::size_t panels = pts.size() - 1;
  std::optional<CpmgFilter> cpmg;
  if (is_cpmg(seq)) cpmg.emplace(seq, lor.omega0);
  LorentzianIntegrand integrand{&seq, cpmg ? &*cpmg : nullptr, lor.omega0, lor.kappa,
                                lor.lambda_tilde_sq / std::numbers::pi};
  gsl_function fn{&LorentzianIntegrand::call, &integrand};

  // A single 61-point rule per panel sizes the total, then each panel is
  // refined on its own against an equal share of the absolute budget.
  std::vector<double> rough(panels);
  double rough_total = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    double err = 0.0, resabs = 0.0, resasc = 0.0;
    gsl_integration_qk61(&fn, pts[i], pts[i + 1], &rough[i], &err, &resabs, &resasc);
    rough_total += std::abs(rough[i]);
  }
  const double budget = 0.5 * std::max(options.abs_tol, options.rel_tol * rough_total);
  const std::size_t limit = std::max<std::size_t>(64, options.max_intervals / std::max<std::size_t>(1, panels));
  Workspace workspace(gsl_integration_workspace_alloc(limit));

  double window = 0.0;
  double window_err = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double panel_abs = budget / static_cast<double>(panels);
    double value = 0.0;
    double err = 0.0;
    gsl_integration_qag(&fn, pts[i], pts[i + 1], panel_abs, 0.5 * options.rel_tol, limit, GSL_INTEG_GAUSS61,
                        workspace.get(), &value, &err);
    window += value;
    window_err += err;
  }

  // Tail beyond the window; the integrand falls off at least as nu^-4.
  double tail = 0.0;
  double tail_err = 0.0;
  Workspace tail_workspace(gsl_integration_workspace_alloc(2000));
  gsl_integration_qagiu(&fn, nu_hi, 0.1 * options.abs_tol, options.rel_tol, 2000,
                        tail_workspace.get(), &tail, &tail_err);

  const double value = window + tail;
  const double error = window_err + tail_err;
  const double allowed = std::max(options.abs_tol, options.rel_tol * std::abs(value));
  if (!std::isfinite(value) || error > allowed) {
    throw QuadratureError("spectral quadrature did not converge (estimate " + std::to_string(value) +
                              ", error " + std::to_string(error) + ")",
                          value, error);
  }
  return {value, error};
}

}  // namespace tcomb
