#include "chatterkit/preprocess.hpp"

#include <cmath>
#include <complex>

#include "chatterkit/error.hpp"

namespace chatterkit {

std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double fs) {
  if (order < 1) throw Error(Errc::invalid_argument, "filter order must be >= 1");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 * fs))
    throw Error(Errc::invalid_cutoff, "cutoff must lie in (0, fs/2)");

  const double warped = 2.0 * fs * std::tan(M_PI * cutoff_hz / fs);
  std::vector<Biquad> sections;
  sections.reserve(static_cast<std::size_t>((order + 1) / 2));

  // conjugate analog pole pairs mapped through the bilinear transform
  for (int k = 0; k < order / 2; ++k) {
    const double theta = M_PI * (2.0 * k + 1.0) / (2.0 * order) + M_PI / 2.0;
    const std::complex<double> pole =
        warped * std::complex<double>(std::cos(theta), std::sin(theta));
    const std::complex<double> zp = (2.0 * fs + pole) / (2.0 * fs - pole);
    const double a1 = -2.0 * zp.real();
    const double a2 = std::norm(zp);
    const double g = (1.0 + a1 + a2) / 4.0;
    sections.push_back({g, 2.0 * g, g, a1, a2});
  }
  if (order % 2 == 1) {
    const double pole = -warped;
    const double zp = (2.0 * fs + pole) / (2.0 * fs - pole);
    const double g = (1.0 - zp) / 2.0;
    sections.push_back({g, g, 0.0, -zp, 0.0});
  }
  return sections;
}

namespace {

// direct-form II transposed, states preset to the DC steady state of the
// first sample so step edges do not ring
void run_sections(Eigen::VectorXd& x, const std::vector<Biquad>& sections) {
  for (const auto& s : sections) {
    double s1 = (1.0 - s.b0) * x[0];
    double s2 = (s.b2 - s.a2) * x[0];
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double in = x[i];
      const double out = s.b0 * in + s1;
      s1 = s.b1 * in - s.a1 * out + s2;
      s2 = s.b2 * in - s.a2 * out;
      x[i] = out;
    }
  }
}

}  // namespace

Eigen::VectorXd lowpass_filter(const Eigen::VectorXd& x, double fs, const FilterSpec& spec) {
  const auto sections = butterworth_lowpass(spec.order, spec.cutoff_hz, fs);
  const Eigen::Index n = x.size();
  if (n < 2) throw Error(Errc::empty_input, "lowpass_filter needs at least 2 samples");

  // padding must cover the cascade's settle time, which scales with the
  // cutoff period and the pole count
  const Eigen::Index settle = static_cast<Eigen::Index>(
      std::ceil(3.0 * (fs / spec.cutoff_hz) * std::max(1.0, spec.order / 2.0)));
  const Eigen::Index pad = std::min<Eigen::Index>(
      n - 1, std::max<Eigen::Index>(settle, 3 * (2 * static_cast<Eigen::Index>(sections.size()) + 1)));
  // Detrend to zero endpoints so the odd extension is offset-free and C1
  // at both joints; the line rides through the unit-DC-gain cascade.
  const double x0 = x[0];
  const double slope = (x[n - 1] - x0) / static_cast<double>(n - 1);
  Eigen::VectorXd detrended(n);
  for (Eigen::Index i = 0; i < n; ++i) detrended[i] = x[i] - (x0 + slope * static_cast<double>(i));

  Eigen::VectorXd ext(n + 2 * pad);
  for (Eigen::Index i = 0; i < pad; ++i) ext[i] = -detrended[pad - i];
  ext.segment(pad, n) = detrended;
  for (Eigen::Index i = 0; i < pad; ++i) ext[pad + n + i] = -detrended[n - 2 - i];

  run_sections(ext, sections);
  ext.reverseInPlace();
  run_sections(ext, sections);
  ext.reverseInPlace();

  Eigen::VectorXd out = ext.segment(pad, n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] += x0 + slope * static_cast<double>(i);
  return out;
}

Eigen::VectorXd decimate(const Eigen::VectorXd& x, int factor) {
  if (factor < 1) throw Error(Errc::zero_factor, "decimation factor must be >= 1");
  const Eigen::Index out_len = (x.size() + factor - 1) / factor;
  Eigen::VectorXd out(out_len);
  for (Eigen::Index i = 0; i < out_len; ++i) out[i] = x[i * factor];
  return out;
}

}  // namespace chatterkit
