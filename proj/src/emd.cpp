#include "chatterkit/emd.hpp"

#include <cmath>

#include "chatterkit/error.hpp"
#include "chatterkit/rng.hpp"
#include "chatterkit/spectral.hpp"

namespace chatterkit {

namespace {

struct Extrema {
  std::vector<Eigen::Index> maxima;
  std::vector<Eigen::Index> minima;
};

Extrema find_extrema(const Eigen::VectorXd& x) {
  Extrema ext;
  const Eigen::Index n = x.size();
  Eigen::Index i = 1;
  while (i + 1 < n) {
    if (x[i] == x[i + 1]) {  // plateau: compare against its far side
      Eigen::Index j = i + 1;
      while (j + 1 < n && x[j] == x[j + 1]) ++j;
      if (j + 1 < n) {
        const Eigen::Index mid = (i + j) / 2;
        if (x[i] > x[i - 1] && x[j] > x[j + 1]) ext.maxima.push_back(mid);
        if (x[i] < x[i - 1] && x[j] < x[j + 1]) ext.minima.push_back(mid);
      }
      i = j;
      continue;
    }
    if (x[i] > x[i - 1] && x[i] > x[i + 1]) ext.maxima.push_back(i);
    if (x[i] < x[i - 1] && x[i] < x[i + 1]) ext.minima.push_back(i);
    ++i;
  }
  return ext;
}

int count_zero_crossings(const Eigen::VectorXd& x) {
  int crossings = 0;
  double prev = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    if (prev != 0.0 && ((prev > 0.0) != (x[i] > 0.0))) ++crossings;
    prev = x[i];
  }
  return crossings;
}

// natural cubic spline through (t, v), evaluated at 0..n-1
Eigen::VectorXd spline_envelope(const std::vector<double>& t, const std::vector<double>& v,
                                Eigen::Index n) {
  const std::size_t m = t.size();
  if (m == 2) {
    Eigen::VectorXd env(n);
    const double slope = (v[1] - v[0]) / (t[1] - t[0]);
    for (Eigen::Index i = 0; i < n; ++i) env[i] = v[0] + slope * (static_cast<double>(i) - t[0]);
    return env;
  }

  // tridiagonal solve for second derivatives (natural ends)
  std::vector<double> h(m - 1), alpha(m, 0.0), l(m), mu(m), z(m), c(m);
  for (std::size_t i = 0; i + 1 < m; ++i) h[i] = t[i + 1] - t[i];
  for (std::size_t i = 1; i + 1 < m; ++i)
    alpha[i] = 3.0 * ((v[i + 1] - v[i]) / h[i] - (v[i] - v[i - 1]) / h[i - 1]);
  l[0] = 1.0; mu[0] = 0.0; z[0] = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    l[i] = 2.0 * (t[i + 1] - t[i - 1]) - h[i - 1] * mu[i - 1];
    mu[i] = h[i] / l[i];
    z[i] = (alpha[i] - h[i - 1] * z[i - 1]) / l[i];
  }
  c[m - 1] = 0.0;
  for (std::size_t j = m - 2; j + 1 > 0; --j) c[j] = z[j] - mu[j] * c[j + 1];

  Eigen::VectorXd env(n);
  std::size_t seg = 0;
  for (Eigen::Index idx = 0; idx < n; ++idx) {
    const double ti = static_cast<double>(idx);
    while (seg + 2 < m && ti > t[seg + 1]) ++seg;
    const double dt = ti - t[seg];
    const double b = (v[seg + 1] - v[seg]) / h[seg] - h[seg] * (c[seg + 1] + 2.0 * c[seg]) / 3.0;
    const double d = (c[seg + 1] - c[seg]) / (3.0 * h[seg]);
    env[idx] = v[seg] + b * dt + c[seg] * dt * dt + d * dt * dt * dt;
  }
  return env;
}

// knots with up to two extrema mirrored past each signal end
void mirrored_knots(const std::vector<Eigen::Index>& idx, const Eigen::VectorXd& x,
                    Eigen::Index n, std::vector<double>& t, std::vector<double>& v) {
  t.clear();
  v.clear();
  const std::size_t m = idx.size();
  const std::size_t wings = std::min<std::size_t>(2, m);
  for (std::size_t k = wings; k > 0; --k) {
    t.push_back(-static_cast<double>(idx[k - 1]));
    v.push_back(x[idx[k - 1]]);
  }
  for (const Eigen::Index i : idx) {
    t.push_back(static_cast<double>(i));
    v.push_back(x[i]);
  }
  for (std::size_t k = 0; k < wings; ++k) {
    t.push_back(2.0 * static_cast<double>(n - 1) - static_cast<double>(idx[m - 1 - k]));
    v.push_back(x[idx[m - 1 - k]]);
  }
}

bool mean_envelope(const Eigen::VectorXd& x, Eigen::VectorXd& mean, int& extrema_count) {
  const Extrema ext = find_extrema(x);
  extrema_count = static_cast<int>(ext.maxima.size() + ext.minima.size());
  if (ext.maxima.size() < 2 || ext.minima.size() < 2) return false;
  std::vector<double> t, v;
  mirrored_knots(ext.maxima, x, x.size(), t, v);
  const Eigen::VectorXd upper = spline_envelope(t, v, x.size());
  mirrored_knots(ext.minima, x, x.size(), t, v);
  const Eigen::VectorXd lower = spline_envelope(t, v, x.size());
  mean = 0.5 * (upper + lower);
  return true;
}

}  // namespace

ImfSet emd_sift(const Eigen::VectorXd& x, const EmdOptions& opt) {
  if (x.size() < 8) throw Error(Errc::signal_too_short, "emd needs at least 8 samples");
  if ((x.array() - x[0]).abs().maxCoeff() == 0.0)
    throw Error(Errc::constant_signal, "emd on a constant signal");

  ImfSet result;
  Eigen::VectorXd residue = x;
  const double negligible = 1e-12 * std::sqrt(x.squaredNorm() / static_cast<double>(x.size()));
  for (int imf_index = 0; imf_index < opt.max_imfs; ++imf_index) {
    if (std::sqrt(residue.squaredNorm() / static_cast<double>(residue.size())) <= negligible)
      break;  // residue is numerical dust
    Eigen::VectorXd h = residue;
    Eigen::VectorXd mean;
    int extrema_count = 0;
    if (!mean_envelope(h, mean, extrema_count)) break;  // residue done

    for (int iter = 0; iter < opt.max_sift_iterations; ++iter) {
      const Eigen::VectorXd h_next = h - mean;
      // pointwise Huang ratio; the guard keeps zero crossings of h finite
      const double guard = 1e-12 * h.squaredNorm() / static_cast<double>(h.size()) + 1e-300;
      double sd = 0.0;
      for (Eigen::Index i = 0; i < h.size(); ++i) {
        const double diff = h[i] - h_next[i];
        sd += diff * diff / (h[i] * h[i] + guard);
      }
      const int zc = count_zero_crossings(h_next);
      int ec = 0;
      Eigen::VectorXd next_mean;
      const bool can_continue = mean_envelope(h_next, next_mean, ec);
      h = h_next;
      if (!can_continue) break;
      mean = std::move(next_mean);
      if (sd < opt.sd_threshold && std::abs(ec - zc) <= 1) break;
    }
    result.imfs.push_back(h);
    residue -= h;
  }
  result.residue = residue;
  return result;
}

ImfSet eemd(const Eigen::VectorXd& x, int ensemble_size, double noise_std_fraction,
            std::uint64_t seed, const EmdOptions& opt) {
  if (ensemble_size < 1) throw Error(Errc::invalid_argument, "ensemble size must be >= 1");
  const double n = static_cast<double>(x.size());
  const double sd = std::sqrt((x.array() - x.mean()).square().sum() / n);
  if (sd == 0.0) throw Error(Errc::constant_signal, "eemd on a constant signal");
  const double noise_sd = noise_std_fraction * sd;

  std::vector<ImfSet> members(static_cast<std::size_t>(ensemble_size));
  for (int m = 0; m < ensemble_size; ++m) {
    Eigen::VectorXd noisy = x;
    if (noise_sd > 0.0) {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(m)));
      for (Eigen::Index i = 0; i < noisy.size(); ++i) noisy[i] += noise_sd * rng.normal();
    }
    members[static_cast<std::size_t>(m)] = emd_sift(noisy, opt);
  }

  std::size_t max_imfs = 0;
  for (const auto& member : members) max_imfs = std::max(max_imfs, member.imfs.size());

  ImfSet result;
  result.ensemble_size = ensemble_size;
  result.noise_std_fraction = noise_std_fraction;
  result.imfs.assign(max_imfs, Eigen::VectorXd::Zero(x.size()));
  result.residue = Eigen::VectorXd::Zero(x.size());
  for (const auto& member : members) {
    for (std::size_t i = 0; i < member.imfs.size(); ++i) result.imfs[i] += member.imfs[i];
    result.residue += member.residue;
  }
  const double scale = 1.0 / static_cast<double>(ensemble_size);
  for (auto& imf : result.imfs) imf *= scale;
  result.residue *= scale;
  return result;
}

int select_informative_imf(const ImfSet& imfs, const Eigen::VectorXd& x, double fs) {
  if (imfs.imfs.empty()) throw Error(Errc::empty_input, "no IMFs to select from");
  const Eigen::VectorXd ref = fft_magnitude(x, fs).ordinate;
  const double ref_norm = ref.norm();
  int best = 0;
  double best_overlap = -1.0;
  for (std::size_t i = 0; i < imfs.imfs.size(); ++i) {
    const Eigen::VectorXd spec = fft_magnitude(imfs.imfs[i], fs).ordinate;
    const double denom = ref_norm * spec.norm();
    const double overlap = denom > 0.0 ? ref.dot(spec) / denom : 0.0;
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best = static_cast<int>(i);
    }
  }
  return best;
}

Eigen::VectorXd eemd_feature_vector(const Eigen::VectorXd& imf, const Eigen::VectorXd& x,
                                    bool* degenerate) {
  if (imf.size() == 0 || x.size() == 0)
    throw Error(Errc::empty_input, "eemd_feature_vector on empty input");
  const double n = static_cast<double>(imf.size());
  const double imf_energy = imf.squaredNorm();
  const double sig_energy = x.squaredNorm();
  const double mean = imf.mean();
  const Eigen::ArrayXd centered = imf.array() - mean;
  const double var = centered.square().sum() / n;
  const double sd = std::sqrt(var);
  const double rms = std::sqrt(imf_energy / n);
  const double peak = imf.array().abs().maxCoeff();

  Eigen::VectorXd features = Eigen::VectorXd::Zero(7);
  features[0] = sig_energy > 0.0 ? imf_energy / sig_energy : 0.0;
  features[1] = imf.maxCoeff() - imf.minCoeff();
  features[2] = sd;
  features[3] = rms;
  const bool is_degenerate = sd <= 0.0;
  if (degenerate != nullptr) *degenerate = is_degenerate;
  if (!is_degenerate) {
    features[4] = peak / rms;
    features[5] = centered.cube().sum() / n / (sd * sd * sd);
    features[6] = centered.square().square().sum() / n / (var * var);
  }
  return features;
}

std::vector<std::string> eemd_feature_names() {
  return {"energy_ratio", "peak_to_peak", "std", "rms", "crest_factor", "skewness", "kurtosis"};
}

}  // namespace chatterkit
