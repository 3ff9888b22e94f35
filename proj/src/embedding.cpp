#include "chatterkit/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "chatterkit/error.hpp"
#include "chatterkit/spectral.hpp"

namespace chatterkit {

DelayEstimate estimate_delay(const Eigen::VectorXd& x, double fs) {
  if (x.size() < 4) throw Error(Errc::signal_too_short, "estimate_delay needs >= 4 samples");
  if ((x.array() - x[0]).abs().maxCoeff() == 0.0)
    throw Error(Errc::constant_signal, "estimate_delay on a constant signal");

  const SpectrumEstimate spectrum = fft_magnitude(x, fs);
  const Eigen::Index bins = spectrum.ordinate.size();
  Eigen::Index best = 1;
  for (Eigen::Index k = 2; k < bins; ++k)
    if (spectrum.ordinate[k] > spectrum.ordinate[best]) best = k;

  DelayEstimate result;
  // flat spectra have no meaningful dominant bin; fall back to delay 1
  std::vector<double> mags(spectrum.ordinate.data() + 1, spectrum.ordinate.data() + bins);
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2),
                   mags.end());
  const double median = mags[mags.size() / 2];
  result.degenerate = spectrum.ordinate[best] < 5.0 * median;

  const double dominant_hz = spectrum.abscissa[best];
  if (dominant_hz <= 0.0) {
    result.delay = 1;
    result.degenerate = true;
    return result;
  }
  result.delay = std::max(1, static_cast<int>(std::lround(fs / (4.0 * dominant_hz))));
  return result;
}

namespace {

// strided nearest-neighbor search keeps the test tractable on long records
constexpr int kFnnMaxPoints = 2000;

}  // namespace

DimensionEstimate estimate_dimension_fnn(const Eigen::VectorXd& x, int delay, double threshold,
                                         int max_dimension) {
  if (delay < 1) throw Error(Errc::invalid_argument, "delay must be >= 1");
  if (x.size() <= 10 * static_cast<Eigen::Index>(delay))
    throw Error(Errc::signal_too_short, "estimate_dimension_fnn needs len(x) > 10*delay");

  const double rtol = 15.0;
  const double scale =
      std::sqrt((x.array() - x.mean()).square().sum() / static_cast<double>(x.size()));
  // periodic signals revisit states to round-off precision; such neighbours
  // carry no geometric information and temporally adjacent ones are biased
  const double dup2 = 1e-16 * scale * scale;

  DimensionEstimate result;
  for (int m = 1; m <= max_dimension; ++m) {
    const Eigen::Index usable = x.size() - static_cast<Eigen::Index>(m) * delay;
    if (usable < 2) break;
    const Eigen::Index stride = std::max<Eigen::Index>(1, usable / kFnnMaxPoints);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < usable; i += stride) idx.push_back(i);

    int false_neighbors = 0;
    int total = 0;
    for (const Eigen::Index i : idx) {
      double best_dist = -1.0;
      Eigen::Index best_j = -1;
      for (const Eigen::Index j : idx) {
        if (std::abs(j - i) <= delay) continue;
        double d2 = 0.0;
        for (int c = 0; c < m; ++c) {
          const double diff = x[i + c * delay] - x[j + c * delay];
          d2 += diff * diff;
        }
        if (d2 <= dup2) continue;
        if (best_j < 0 || d2 < best_dist) {
          best_dist = d2;
          best_j = j;
        }
      }
      if (best_j < 0 || best_dist <= 0.0) continue;
      const double extra = x[i + m * delay] - x[best_j + m * delay];
      ++total;
      if (extra * extra / best_dist > rtol * rtol) ++false_neighbors;
    }
    if (total > 0 && static_cast<double>(false_neighbors) / total < threshold) {
      result.dimension = std::max(2, m);
      return result;
    }
  }
  result.dimension = max_dimension;
  result.capped = true;
  return result;
}

Eigen::MatrixXd takens_embed(const Eigen::VectorXd& x, const EmbeddingParams& params) {
  if (params.dimension < 2) throw Error(Errc::invalid_argument, "embedding dimension must be >= 2");
  if (params.delay < 1) throw Error(Errc::invalid_argument, "embedding delay must be >= 1");
  const Eigen::Index count =
      x.size() - static_cast<Eigen::Index>(params.dimension - 1) * params.delay;
  if (count < params.dimension + 1)
    throw Error(Errc::signal_too_short, "embedding leaves too few points");
  Eigen::MatrixXd cloud(count, params.dimension);
  for (Eigen::Index i = 0; i < count; ++i)
    for (int c = 0; c < params.dimension; ++c) cloud(i, c) = x[i + static_cast<Eigen::Index>(c) * params.delay];
  return cloud;
}

}  // namespace chatterkit
