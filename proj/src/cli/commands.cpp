#include "tcomb/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include "tcomb/csv.hpp"
#include "tcomb/errors.hpp"
#include "tcomb/estimator.hpp"
#include "tcomb/parallel.hpp"

namespace tcomb::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Appends comma-separated fields terminated by a newline.
class CsvRow {
 public:
  explicit CsvRow(std::string& sink) : sink_(sink) {}
  ~CsvRow() { sink_ += '\n'; }
  CsvRow& operator<<(double v) { return field(format_double(v)); }
  CsvRow& operator<<(int v) { return field(std::to_string(v)); }
  CsvRow& operator<<(long v) { return field(std::to_string(v)); }
  CsvRow& operator<<(long long v) { return field(std::to_string(v)); }
  CsvRow& operator<<(unsigned long v) { return field(std::to_string(v)); }
  CsvRow& operator<<(unsigned long long v) { return field(std::to_string(v)); }
  CsvRow& operator<<(const std::string& v) { return field(v); }
  CsvRow& operator<<(const char* v) { return field(v); }

 private:
  CsvRow& field(const std::string& text) {
    if (!first_) sink_ += ',';
    sink_ += text;
    first_ = false;
    return *this;
  }
  std::string& sink_;
  bool first_ = true;
};

SystemSpec at_temperature(const SystemSpec& spec, double temperature) {
  SystemSpec s = spec;
  s.temperature_k = temperature;
  return s;
}

void write_output(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << content;
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");
}

void warn_low_occupation(const SystemSpec& spec, std::ostream& err) {
  if (!high_temperature_regime(spec)) {
    err << "warning: n_th < 10 at T = " << format_double(spec.temperature_k)
        << " K; the ideal sensitivity formula assumes n_th >> 1\n";
  }
}

}  // namespace

std::vector<double> comb_time_grid(const RunConfig& config, std::ostream& err) {
  const auto n = static_cast<std::size_t>(config.n_points);
  const double span = config.t_max_s - config.t_min_s;
  const double omega0 = config.system.omega0();
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = i + 1 == n ? config.t_max_s
                          : config.t_min_s + span * static_cast<double>(i) / static_cast<double>(n - 1);
    if (cpmg_divergent(config.pulses, omega0, t)) {
      const double original = t;
      for (int step = 0; step < 64 && cpmg_divergent(config.pulses, omega0, t); ++step) {
        t = std::nextafter(t, std::numeric_limits<double>::infinity());
      }
      err << "note: grid point " << i << " t = " << format_double(original)
          << " s sits on a closed-form divergence; nudged to " << format_double(t) << " s\n";
    }
    times[i] = t;
  }
  return times;
}

std::string comb_csv(const RunConfig& config, std::ostream& err) {
  TraceOptions options;
  options.pulses = config.pulses;
  options.spectrum = config.spectrum;
  options.route = config.chi_route;
  options.mechanisms = config.mechanisms;
  options.workers = config.workers;
  const auto times = comb_time_grid(config, err);
  const CoherenceTrace trace = coherence_trace(config.system, options, times);

  std::string csv = "t_seconds,omega0_t_over_2pi,L_ideal,L_bg,L_total\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    CsvRow(csv) << trace.times[i] << trace.times[i] * config.system.f0_hz << trace.l_ideal[i]
                << trace.l_bg[i] << trace.l_total[i];
  }
  return csv;
}

std::string peaks_csv(const RunConfig& config, std::ostream& summary) {
  PeakOptions options;
  options.mechanisms = config.mechanisms;
  options.workers = config.workers;
  const PeakCatalog catalog = peak_catalog(config.system, config.pulses, options);

  std::string csv = "q,t_q_seconds,gamma_q,width_eq4,width_expansion,height,missing,is_qstar\n";
  for (const auto& peak : catalog.peaks) {
    CsvRow row(csv);
    row << peak.q << peak.t_q << peak.gamma;
    if (peak.is_qstar) row << catalog.width_closed_form;
    else row << "";
    row << peak.width_expansion << peak.height << 0 << (peak.is_qstar ? 1 : 0);
  }
  for (int q : catalog.missing) {
    CsvRow(csv) << q << q * config.system.period() << std::numeric_limits<double>::infinity() << ""
                << 0.0 << 0.0 << 1 << 0;
  }

  summary << "pulses = " << catalog.pulses << '\n' << "q_star = " << catalog.q_star << '\n';
  summary << "missing = ";
  for (std::size_t i = 0; i < catalog.missing.size(); ++i) summary << (i ? "," : "") << catalog.missing[i];
  summary << '\n';
  if (catalog.q_star >= 1) {
    const auto& star = catalog.peaks[static_cast<std::size_t>(catalog.q_star - 1)];
    summary << "t_qstar_seconds = " << format_double(star.t_q) << '\n'
            << "gamma_qstar = " << format_double(star.gamma) << '\n'
            << "width_eq4 = " << format_double(catalog.width_closed_form) << '\n'
            << "width_expansion = " << format_double(star.width_expansion) << '\n'
            << "width_ratio_expansion_over_closed_form = " << format_double(star.width_expansion / catalog.width_closed_form)
            << '\n';
  }
  return csv;
}

std::string sensitivity_csv(const RunConfig& config, std::ostream& err) {
  const auto n_values = config.sweep_n_values();
  std::string csv = "temperature_k,N,t_qstar_seconds,eta_ideal,eta_T1,eta_T2,eta_Q,eta_all\n";
  for (double temperature : config.sweep_temperatures()) {
    const SystemSpec spec = at_temperature(config.system, temperature);
    warn_low_occupation(spec, err);
    const SensitivityCurve curve = sensitivity_curve(spec, n_values, config.penalty_route, config.workers);
    for (const auto& r : curve) {
      CsvRow(csv) << temperature << r.pulses << r.t_qstar << r.eta_ideal << r.eta_t1 << r.eta_t2 << r.eta_q
                  << r.eta_all;
    }
  }
  return csv;
}

std::string optimize_csv(const RunConfig& config, std::ostream& summary) {
  std::string csv =
      "temperature_k,n_opt_analytic,n_opt_continuous,n_opt_numeric,eta_opt_numeric,eta_opt_eq8,"
      "chi_qstar_closed,chi_qstar_quadrature\n";
  const SensitivityOptions options{
      config.optimize_mode == OptimizeMode::all ? Mechanisms::all() : Mechanisms::only_q(),
      config.penalty_route, {}};
  for (double temperature : config.sweep_temperatures()) {
    const SystemSpec spec = at_temperature(config.system, temperature);
    const int n_analytic = optimal_N_analytic(spec);
    const int n_max = config.optimize_n_max > 0 ? config.optimize_n_max : std::max(2048, 4 * n_analytic);
    const auto range = even_range(config.optimize_n_min, n_max);
    const OptimizeResult best = optimize_sensitivity_numeric(spec, range, options, true, config.workers);
    const double chi_closed = finite_q_chi(spec, n_analytic, PenaltyRoute::closed);
    const double chi_quad = finite_q_chi(spec, n_analytic, PenaltyRoute::quadrature);
    CsvRow(csv) << temperature << n_analytic << optimal_n_continuous(spec) << best.n_opt << best.eta_opt
                << best.eta_universal << chi_closed << chi_quad;
    summary << "T = " << format_double(temperature) << " K\n"
            << "  N_opt_analytic = " << n_analytic << '\n'
            << "  N_opt_numeric = " << best.n_opt << '\n'
            << "  eta_opt_numeric = " << format_double(best.eta_opt) << " g/sqrt(Hz)\n"
            << "  eta_opt_eq8 = " << format_double(best.eta_universal) << " g/sqrt(Hz)\n"
            << "  chi_qstar_closed = " << format_double(chi_closed) << '\n'
            << "  chi_qstar_quadrature = " << format_double(chi_quad) << '\n';
  }
  return csv;
}

std::string estimate_csv(const RunConfig& config, std::ostream& summary) {
  MeasurementPlan base;
  base.pulses = config.pulses;
  base.measurement_time = config.measurement_time_s;
  base.flank_offset = config.flank_offset;
  base.runs = config.runs;
  base.contrast = config.system.readout_contrast;
  base.mass_shift = config.mass_shift;
  base.workers = 1;

  std::vector<EstimateReport> reports(static_cast<std::size_t>(config.n_seeds));
  parallel_for(reports.size(), config.workers, [&](std::size_t i) {
    MeasurementPlan plan = base;
    plan.seed = config.seed + i;
    reports[i] = estimate_mass_shift(config.system, plan);
  });

  std::string csv = "seed,measurement_time_s,L_ref,L_pert,sigma_L_ref,dm_over_m,sigma_dm_over_m\n";
  double sum = 0.0;
  double sum_sigma = 0.0;
  for (const auto& r : reports) {
    CsvRow(csv) << static_cast<unsigned long long>(r.seed) << r.measurement_time << r.reference.l_hat
                << r.perturbed.l_hat << r.reference.sigma << r.dm_over_m << r.sigma_dm_over_m;
    sum += r.dm_over_m;
    sum_sigma += r.sigma_dm_over_m;
  }
  const double n = static_cast<double>(reports.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& r : reports) ss += (r.dm_over_m - mean) * (r.dm_over_m - mean);
  const double stddev = reports.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const auto& first = reports.front();
  const double achieved = (sum_sigma / n) * std::sqrt(first.total_time);
  const double predicted = first.predicted_sigma * std::sqrt(first.total_time);

  summary << "n_seeds = " << reports.size() << '\n'
          << "true_dm_over_m = " << format_double(config.mass_shift) << '\n'
          << "mean_dm_over_m = " << format_double(mean) << '\n'
          << "std_dm_over_m = " << format_double(stddev) << '\n'
          << "standard_error_of_mean = " << format_double(stddev / std::sqrt(n)) << '\n'
          << "mean_sigma_dm_over_m = " << format_double(sum_sigma / n) << '\n'
          << "total_time_s = " << format_double(first.total_time) << '\n'
          << "achieved_sigma_sqrt_ttot = " << format_double(achieved) << " 1/sqrt(Hz)\n"
          << "predicted_sigma_sqrt_ttot = " << format_double(predicted) << " 1/sqrt(Hz)\n"
          << "achieved_over_predicted = " << format_double(achieved / predicted) << '\n';
  return csv;
}

int run_command(const std::string& name, const RunConfig& config, Streams streams) {
  try {
    validate_config(config);
    const bool csv_to_stdout = config.out.empty() || config.out == "-";
    std::ostream& summary = csv_to_stdout ? streams.err : streams.out;
    std::string csv;
    if (name == "comb") csv = comb_csv(config, streams.err);
    else if (name == "peaks") csv = peaks_csv(config, summary);
    else if (name == "sensitivity") csv = sensitivity_csv(config, streams.err);
    else if (name == "optimize") csv = optimize_csv(config, summary);
    else if (name == "estimate") csv = estimate_csv(config, summary);
    else throw ConfigError("unknown command '" + name + "'");
    write_output(config.out, csv, streams.out);
    return kSuccess;
  } catch (const ConfigError& e) {
    streams.err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    streams.err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    streams.err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const NoBracketError& e) {
    streams.err << "error: " << e.what() << '\n';
    return kComputeError;
  } catch (const QuadratureError& e) {
    streams.err << "error: " << e.what() << '\n';
    return kComputeError;
  } catch (const OperatingPointError& e) {
    streams.err << "error: " << e.what() << '\n';
    return kComputeError;
  }
}

}  // namespace tcomb::cli
