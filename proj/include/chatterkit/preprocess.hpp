#pragma once

#include <Eigen/Dense>
#include <vector>

namespace chatterkit {

struct FilterSpec {
  double cutoff_hz = 0.0;
  int order = 10;
  int decimation_factor = 1;
};

struct Biquad {
  double b0, b1, b2;  // numerator
  double a1, a2;      // denominator (a0 = 1)
};

// Butterworth low-pass as second-order sections (bilinear transform,
// unit DC gain per section). Odd orders get one first-order section.
std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double fs);

// Zero-phase (forward-backward) filtering with odd-reflection padding.
Eigen::VectorXd lowpass_filter(const Eigen::VectorXd& x, double fs, const FilterSpec& spec);

// Stride sampling; caller is responsible for prior band limiting.
Eigen::VectorXd decimate(const Eigen::VectorXd& x, int factor);

}  // namespace chatterkit
