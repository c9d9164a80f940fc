#include "rmill/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace rmill {

std::vector<SpectrumPoint> amplitude_spectrum(const std::vector<double>& samples,
                                              double dt, double f_max) {
  const std::size_t n = samples.size();
  if (n < 4) throw ConfigError("too few samples for a spectrum");
  std::vector<double> windowed(n);
  double window_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w =
        0.5 * (1.0 - std::cos(2.0 * M_PI * i / static_cast<double>(n - 1)));
    windowed[i] = w * samples[i];
    window_sum += w;
  }
  const double duration = n * dt;
  const int k_max = std::min<int>(static_cast<int>(f_max * duration),
                                  static_cast<int>(n / 2));
  std::vector<SpectrumPoint> spectrum;
  spectrum.reserve(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    const double omega = 2.0 * M_PI * k / static_cast<double>(n);
    // Goertzel recurrence
    const double coeff = 2.0 * std::cos(omega);
    double s0 = 0, s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      s0 = windowed[i] + coeff * s1 - s2;
      s2 = s1;
      s1 = s0;
    }
    const double re = s1 - s2 * std::cos(omega);
    const double im = s2 * std::sin(omega);
    const double mag = std::sqrt(re * re + im * im);
    spectrum.push_back({k / duration, 2.0 * mag / window_sum});
  }
  return spectrum;
}

double peak_frequency(const std::vector<SpectrumPoint>& spectrum, double f_lo,
                      double f_hi) {
  double best_f = 0, best_a = -1;
  for (const auto& pt : spectrum) {
    if (pt.frequency < f_lo || pt.frequency > f_hi) continue;
    if (pt.amplitude > best_a) {
      best_a = pt.amplitude;
      best_f = pt.frequency;
    }
  }
  return best_f;
}

Window fully_engaged_window(const Scenario& scenario) {
  const double feed = scenario.cutting.feed_speed();
  const double x_start = scenario.path.front().xy.x();
  const double x_full =
      scenario.workpiece.material_min.x() + scenario.cutting.R;
  Window w;
  w.t1 = scenario.path.back().t;
  if (feed <= 0) {
    w.t0 = 0;
    return w;
  }
  w.t0 = std::min((x_full - x_start) / feed +
                      2.0 * scenario.cutting.tooth_period(),
                  w.t1);
  return w;
}

std::vector<double> deviation_series(const SimulationTrace& trace,
                                     const std::vector<PathPoint>& desired_path) {
  std::vector<double> dev(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double desired_y = path_position(desired_path, trace.tau[i]).y();
    dev[i] = trace.nominal[i].y() + trace.defl[i].y() - desired_y;
  }
  return dev;
}

RunReport evaluate_run(const Scenario& scenario,
                       const std::vector<PathPoint>& desired_path,
                       const SimulationResult& result) {
  const SimulationTrace& trace = result.trace;
  const Window window = fully_engaged_window(scenario);

  const std::vector<double> dev = deviation_series(trace, desired_path);
  std::vector<double> dev_window;
  dev_window.reserve(dev.size());
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (trace.tau[i] >= window.t0 && trace.tau[i] <= window.t1)
      dev_window.push_back(dev[i]);
  if (dev_window.size() < 8)
    throw ConfigError("fully engaged window holds too few samples");

  double mean = 0;
  for (double v : dev_window) mean += v;
  mean /= static_cast<double>(dev_window.size());

  std::vector<double> centered(dev_window.size());
  for (std::size_t i = 0; i < dev_window.size(); ++i)
    centered[i] = dev_window[i] - mean;
  const auto spectrum = amplitude_spectrum(centered, trace.dt, 120.0);

  // machined wall against the desired line, windowed in x
  const double wall_y = path_position(desired_path, window.t1).y() +
                        scenario.cutting.R;
  const double x_lo = path_position(desired_path, window.t0).x();
  const double x_hi = path_position(desired_path, window.t1).x();
  const auto profile =
      machined_profile(result.grid, path_position(desired_path, 0.0).y(), +1);
  double max_profile_err = 0;
  for (const auto& pt : profile) {
    if (pt.x < x_lo || pt.x > x_hi) continue;
    max_profile_err = std::max(max_profile_err, std::abs(pt.y - wall_y));
  }

  RunReport report;
  report.low_frequency = peak_frequency(spectrum, 1.0, 100.0);
  report.static_deviation = std::abs(mean);
  report.max_deviation = max_profile_err;
  report.diagnostics["window_t0"] = window.t0;
  report.diagnostics["window_t1"] = window.t1;
  report.diagnostics["first_mode_hz"] = trace.first_mode_hz;
  report.diagnostics["tooth_passing_hz"] = trace.tooth_passing_hz;
  report.diagnostics["mean_deviation_y"] = mean;
  report.diagnostics["spectral_bin_hz"] =
      1.0 / (static_cast<double>(dev_window.size()) * trace.dt);
  return report;
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace rmill
