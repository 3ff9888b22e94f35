#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "chatterkit/dataset.hpp"

namespace chatterkit {

// Single-degree-of-freedom regenerative delay oscillator
//   x'' + 2 zeta wn x' + wn^2 x = kappa wn^2 (x(t - tau) - x(t)) + forcing
struct TurningModelParams {
  double natural_freq_hz = 1000.0;
  double damping_ratio = 0.02;
  double stiffness_ratio = 0.0;   // kappa
  double spindle_period_s = 0.1;  // tau
  double noise_level = 0.01;      // white force noise, deflection units
  double forcing = 0.0;           // deterministic force amplitude
  double duration_s = 0.5;
  double fs = 10000.0;
  int substeps = 4;  // integration steps per output sample
};

// Milling adds an interrupted-cutting gate: the regenerative coefficient is
// active for the first `duty` fraction of each tooth period tau / teeth.
struct MillingModelParams {
  TurningModelParams base;
  int tooth_count = 2;
  double duty = 0.05;
};

// Fixed-step RK4 with linear interpolation of the delayed state. Label is
// growth-based: unstable when tail-window RMS > 3x head-window RMS.
TimeSeriesRecord simulate_turning(const TurningModelParams& params, std::uint64_t seed);
TimeSeriesRecord simulate_milling(const MillingModelParams& params, std::uint64_t seed);

// Classic minimum of the turning stability lobes for this oscillator.
double kappa_lobe_floor(double damping_ratio);

// Frozen parameter sets: "stable", "hopf" (quasi-periodic chatter) and
// "flip" (period-2 chatter with a subharmonic line at half the tooth-pass
// frequency).
MillingModelParams milling_preset(const std::string& name);

// Delay-coordinate section sampled once per forcing period.
std::vector<std::array<double, 2>> poincare_section(const Eigen::VectorXd& x, int period_samples,
                                                    int delay = 6);

struct TagSpec {
  std::string tag;
  std::string kind = "turning";  // turning | milling
  int count_stable = 100;
  int count_unstable = 100;
  double natural_freq_hz = 1000.0;
  double damping_ratio = 0.02;
  double rpm_min = 500.0, rpm_max = 800.0;
  double kappa_stable_min = 0.1, kappa_stable_max = 0.5;    // times the lobe floor
  double kappa_unstable_min = 1.6, kappa_unstable_max = 2.6;
  double noise_level = 0.01;
  double forcing = 0.0;
  double duration_s = 0.5;
  double fs = 10000.0;
  int tooth_count = 2;
  double duty = 0.05;
  double rms_stable_min = 0.05, rms_stable_max = 0.15;  // post-scale targets, 0 = raw
  double rms_unstable_min = 5.0, rms_unstable_max = 15.0;
};

struct CorpusSpec {
  std::vector<TagSpec> tags;
};

CorpusSpec load_corpus_spec(const std::filesystem::path& path);

// The shipped five-tag benchmark: four turning-like cases with distinct
// chatter bands plus one milling-like case.
CorpusSpec demo_corpus_spec(int records_per_tag = 200);

// Writes one manifest per tag (<tag>.manifest) plus the series files, and
// returns the manifest paths.
std::vector<std::filesystem::path> generate_benchmark(const CorpusSpec& spec, std::uint64_t seed,
                                                      const std::filesystem::path& out_dir);

}  // namespace chatterkit
