#include "chatterkit/fpa.hpp"

#include <algorithm>
#include <cmath>

#include "chatterkit/error.hpp"

namespace chatterkit {

double percentile(const Eigen::VectorXd& values, double p) {
  if (values.size() == 0) throw Error(Errc::empty_input, "percentile of empty vector");
  std::vector<double> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end());
  const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double min_peak_height(double y_min, double y_max, double alpha) {
  return y_min + alpha * (y_max - y_min);
}

PeakSet detect_peaks(const SpectrumEstimate& spectrum, double alpha, double mpd) {
  if (spectrum.ordinate.size() == 0) throw Error(Errc::empty_input, "detect_peaks on empty spectrum");
  const Eigen::VectorXd& y = spectrum.ordinate;
  const Eigen::VectorXd& f = spectrum.abscissa;

  PeakSet result;
  result.mpd = mpd;
  result.mph = min_peak_height(percentile(y, 5.0), percentile(y, 95.0), alpha);

  std::vector<Eigen::Index> candidates;
  for (Eigen::Index i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] > y[i + 1] && y[i] >= result.mph) candidates.push_back(i);

  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return y[a] > y[b]; });

  for (const Eigen::Index i : candidates) {
    bool clear = true;
    for (const Peak& kept : result.peaks) {
      if (std::abs(f[i] - kept.abscissa) < mpd) {
        clear = false;
        break;
      }
    }
    if (clear) result.peaks.push_back({f[i], y[i]});
  }
  return result;
}

Eigen::VectorXd fpa_feature_vector(const Eigen::VectorXd& x, double fs, const FpaConfig& cfg) {
  const int max_lag = std::min<int>(cfg.acf_max_lag, static_cast<int>(x.size()) - 1);
  const SpectrumEstimate transforms[3] = {
      fft_magnitude(x, fs),
      psd_estimate(x, fs, cfg.welch),
      acf(x, max_lag),
  };
  const double alphas[3] = {cfg.alpha_fft, cfg.alpha_fft, cfg.alpha_acf};

  Eigen::VectorXd features = Eigen::VectorXd::Zero(6 * cfg.n_peaks);
  Eigen::Index pos = 0;
  for (int t = 0; t < 3; ++t) {
    const PeakSet peaks = detect_peaks(transforms[t], alphas[t], cfg.mpd);
    for (int p = 0; p < cfg.n_peaks; ++p) {
      if (static_cast<std::size_t>(p) < peaks.peaks.size()) {
        features[pos++] = peaks.peaks[static_cast<std::size_t>(p)].abscissa;
        features[pos++] = peaks.peaks[static_cast<std::size_t>(p)].ordinate;
      } else {
        pos += 2;  // already zero
      }
    }
  }
  return features;
}

std::vector<std::string> fpa_feature_names(int n_peaks) {
  std::vector<std::string> names;
  for (const char* transform : {"fft", "psd", "acf"}) {
    for (int p = 1; p <= n_peaks; ++p) {
      names.push_back(std::string(transform) + "_peak" + std::to_string(p) + "_x");
      names.push_back(std::string(transform) + "_peak" + std::to_string(p) + "_y");
    }
  }
  return names;
}

}  // namespace chatterkit
