#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "chatterkit/spectral.hpp"

namespace chatterkit {

struct Peak {
  double abscissa = 0.0;
  double ordinate = 0.0;
};

struct PeakSet {
  std::vector<Peak> peaks;  // sorted by descending ordinate
  double mph = 0.0;
  double mpd = 0.0;
};

// p in [0, 100], linear interpolation between order statistics
double percentile(const Eigen::VectorXd& values, double p);

double min_peak_height(double y_min, double y_max, double alpha);

// MPH from the 5th/95th ordinate percentiles; candidates are strict 3-point
// local maxima; greedy acceptance by descending height discards candidates
// closer than mpd (abscissa units) to an accepted peak.
PeakSet detect_peaks(const SpectrumEstimate& spectrum, double alpha, double mpd);

struct FpaConfig {
  double alpha_fft = 0.1;  // shared by FFT and PSD
  double alpha_acf = 0.5;
  double mpd = 500.0;  // Hz for FFT/PSD, lag samples for ACF
  int n_peaks = 2;
  int acf_max_lag = 5000;  // clamped to len(x) - 1
  WelchOptions welch = {};
};

// (abscissa, ordinate) of the first n_peaks peaks of FFT, PSD and ACF in
// that order; missing peaks padded with zeros. 6 * n_peaks entries.
Eigen::VectorXd fpa_feature_vector(const Eigen::VectorXd& x, double fs, const FpaConfig& cfg = {});

std::vector<std::string> fpa_feature_names(int n_peaks);

}  // namespace chatterkit
