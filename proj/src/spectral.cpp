#include "chatterkit/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

#include "chatterkit/error.hpp"

namespace chatterkit {

std::vector<std::complex<double>> fft_forward(const Eigen::VectorXd& x) {
  Eigen::FFT<double> fft;
  std::vector<double> in(x.data(), x.data() + x.size());
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  return out;
}

SpectrumEstimate fft_magnitude(const Eigen::VectorXd& x, double fs) {
  if (x.size() < 2) throw Error(Errc::empty_input, "fft_magnitude needs at least 2 samples");
  const auto spectrum = fft_forward(x);
  const Eigen::Index n = x.size();
  const Eigen::Index half = n / 2 + 1;
  SpectrumEstimate est;
  est.abscissa.resize(half);
  est.ordinate.resize(half);
  for (Eigen::Index k = 0; k < half; ++k) {
    est.abscissa[k] = fs * static_cast<double>(k) / static_cast<double>(n);
    est.ordinate[k] = std::abs(spectrum[static_cast<std::size_t>(k)]);
  }
  return est;
}

SpectrumEstimate psd_estimate(const Eigen::VectorXd& x, double fs, const WelchOptions& opt) {
  if (x.size() < 8) throw Error(Errc::empty_input, "psd_estimate needs at least 8 samples");
  const Eigen::Index n = x.size();

  // segment length so that `segments` windows at the given overlap tile x
  Eigen::Index nperseg =
      static_cast<Eigen::Index>(std::floor(static_cast<double>(n) /
                                           (1.0 + (opt.segments - 1) * (1.0 - opt.overlap))));
  nperseg = std::max<Eigen::Index>(8, std::min(nperseg, n));
  const Eigen::Index hop =
      std::max<Eigen::Index>(1, static_cast<Eigen::Index>(
                                    std::floor(static_cast<double>(nperseg) * (1.0 - opt.overlap))));

  Eigen::VectorXd window(nperseg);
  for (Eigen::Index i = 0; i < nperseg; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                     static_cast<double>(nperseg - 1));
  const double norm = window.squaredNorm();

  const Eigen::Index half = nperseg / 2 + 1;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(half);
  int count = 0;
  Eigen::FFT<double> fft;
  std::vector<double> buf(static_cast<std::size_t>(nperseg));
  std::vector<std::complex<double>> spec;
  for (Eigen::Index start = 0; start + nperseg <= n; start += hop) {
    for (Eigen::Index i = 0; i < nperseg; ++i)
      buf[static_cast<std::size_t>(i)] = x[start + i] * window[i];
    fft.fwd(spec, buf);
    for (Eigen::Index k = 0; k < half; ++k) {
      double p = std::norm(spec[static_cast<std::size_t>(k)]) / (fs * norm);
      if (k != 0 && !(nperseg % 2 == 0 && k == half - 1)) p *= 2.0;  // one-sided fold
      acc[k] += p;
    }
    ++count;
  }

  SpectrumEstimate est;
  est.abscissa.resize(half);
  for (Eigen::Index k = 0; k < half; ++k)
    est.abscissa[k] = fs * static_cast<double>(k) / static_cast<double>(nperseg);
  est.ordinate = acc / static_cast<double>(count);
  return est;
}

SpectrumEstimate acf(const Eigen::VectorXd& x, int max_lag) {
  const Eigen::Index n = x.size();
  if (n < 2) throw Error(Errc::empty_input, "acf needs at least 2 samples");
  if (max_lag < 1 || max_lag >= n)
    throw Error(Errc::lag_too_large, "acf needs 1 <= max_lag < len(x)");

  const Eigen::VectorXd xc = x.array() - x.mean();
  const double denom = xc.squaredNorm();

  SpectrumEstimate est;
  est.abscissa = Eigen::VectorXd::LinSpaced(max_lag + 1, 0.0, static_cast<double>(max_lag));
  est.ordinate.resize(max_lag + 1);
  if (denom <= 0.0) {
    // constant input: define acf as 1 at lag 0 and 0 elsewhere
    est.ordinate.setZero();
    est.ordinate[0] = 1.0;
    return est;
  }

  // circular FFT correlation on a zero-padded copy
  Eigen::Index nfft = 1;
  while (nfft < 2 * n) nfft <<= 1;
  std::vector<double> padded(static_cast<std::size_t>(nfft), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) padded[static_cast<std::size_t>(i)] = xc[i];
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, padded);
  for (auto& v : spec) v = std::norm(v);
  std::vector<double> corr;
  fft.inv(corr, spec);
  for (int k = 0; k <= max_lag; ++k)
    est.ordinate[k] = corr[static_cast<std::size_t>(k)] / denom;
  // clamp tiny round-off excursions outside [-1, 1]
  est.ordinate = est.ordinate.cwiseMax(-1.0).cwiseMin(1.0);
  return est;
}

}  // namespace chatterkit
