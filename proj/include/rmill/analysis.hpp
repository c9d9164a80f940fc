#pragma once

#include "rmill/dynamic_sim.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rmill {

struct SpectrumPoint {
  double frequency;  // Hz
  double amplitude;
};

/// Hann-windowed discrete Fourier magnitudes of uniformly sampled data at
/// frequencies k / (N * dt) up to f_max. Amplitudes are window-compensated
/// so a pure sinusoid reads close to its amplitude.
std::vector<SpectrumPoint> amplitude_spectrum(const std::vector<double>& samples,
                                              double dt, double f_max);

/// Frequency of the largest amplitude within [f_lo, f_hi].
double peak_frequency(const std::vector<SpectrumPoint>& spectrum, double f_lo,
                      double f_hi);

struct Window {
  double t0 = 0;
  double t1 = 0;
};

/// Portion of the run with the tool fully engaged: from one radius past the
/// stock edge (plus a two-tooth-period margin) to the end of the commanded
/// path.
Window fully_engaged_window(const Scenario& scenario);

struct RunReport {
  double low_frequency = 0;     // Hz
  double static_deviation = 0;  // m
  double max_deviation = 0;     // m
  double runtime = 0;           // s
  std::map<std::string, double> diagnostics;
};

/// Table-style accuracy measures of one run, evaluated over the fully
/// engaged window against the desired path:
///   static deviation: |mean| of the y deviation of the loaded tool centre,
///   max deviation: peak machined-profile error against the desired wall,
///   low frequency: spectral peak of the y deviation below 100 Hz.
RunReport evaluate_run(const Scenario& scenario,
                       const std::vector<PathPoint>& desired_path,
                       const SimulationResult& result);

/// y deviation of the loaded tool centre from the desired path, per sample.
std::vector<double> deviation_series(const SimulationTrace& trace,
                                     const std::vector<PathPoint>& desired_path);

/// FNV-1a 64-bit over a byte string; used to stamp outputs with the exact
/// input configuration.
std::uint64_t fnv1a_hash(const std::string& bytes);

}  // namespace rmill
