#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace chatterkit {

struct SpectrumEstimate {
  Eigen::VectorXd abscissa;  // Hz for FFT/PSD, lag samples for ACF
  Eigen::VectorXd ordinate;
};

std::vector<std::complex<double>> fft_forward(const Eigen::VectorXd& x);

// One-sided magnitude spectrum |X_k| at k*fs/N for k = 0..floor(N/2).
SpectrumEstimate fft_magnitude(const Eigen::VectorXd& x, double fs);

struct WelchOptions {
  int segments = 8;
  double overlap = 0.5;  // fraction of a segment
};

// One-sided Welch density (Hann window); integrates to the signal power.
SpectrumEstimate psd_estimate(const Eigen::VectorXd& x, double fs, const WelchOptions& opt = {});

// Mean-removed, biased autocorrelation normalized so acf(0) = 1.
SpectrumEstimate acf(const Eigen::VectorXd& x, int max_lag);

}  // namespace chatterkit
