#include "chatterkit/wpt.hpp"

#include <cmath>

#include "chatterkit/error.hpp"
#include "chatterkit/spectral.hpp"

namespace chatterkit {

namespace {

const std::map<std::string, std::vector<double>>& scaling_coefficients() {
  static const std::map<std::string, std::vector<double>> table = {
      {"db1", {0.70710678118654757, 0.70710678118654757}},
      {"db2",
       {-0.12940952255126037, 0.22414386804201339, 0.83651630373780794, 0.48296291314453416}},
      {"db3",
       {0.035226291885709533, -0.085441273882026658, -0.13501102001025458, 0.45987750211849154,
        0.80689150931109255, 0.33267055295008263}},
      {"db4",
       {-0.010597401785069032, 0.032883011666885197, 0.030841381835560764, -0.18703481171909309,
        -0.027983769416859854, 0.63088076792985892, 0.71484657055291567, 0.23037781330889651}},
      {"db5",
       {0.0033357252854737712, -0.012580751999081999, -0.0062414902127982744,
        0.077571493840045719, -0.032244869584638375, -0.24229488706638203, 0.13842814590132074,
        0.72430852843777294, 0.60382926979718965, 0.16010239797419293}},
  };
  return table;
}

inline Eigen::Index coeff_offset(Eigen::Index taps) { return -((taps - 1) / 2); }

inline Eigen::Index coeff_count(Eigen::Index n, Eigen::Index taps) {
  return (n - 1) / 2 - coeff_offset(taps) + 1;
}

// a[i] = sum_n x[n] f[n - 2k], k = i + offset
Eigen::VectorXd analyze(const Eigen::VectorXd& x, const Eigen::VectorXd& f) {
  const Eigen::Index taps = f.size();
  const Eigen::Index offset = coeff_offset(taps);
  Eigen::VectorXd out(coeff_count(x.size(), taps));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const Eigen::Index k2 = 2 * (i + offset);
    const Eigen::Index lo = std::max<Eigen::Index>(0, k2);
    const Eigen::Index hi = std::min<Eigen::Index>(x.size() - 1, k2 + taps - 1);
    double acc = 0.0;
    for (Eigen::Index n = lo; n <= hi; ++n) acc += x[n] * f[n - k2];
    out[i] = acc;
  }
  return out;
}

// adjoint of analyze: out[n] += sum_i c[i] f[n - 2(i + offset)]
void synthesize_into(Eigen::VectorXd& out, const Eigen::VectorXd& c, const Eigen::VectorXd& f) {
  const Eigen::Index taps = f.size();
  const Eigen::Index offset = coeff_offset(taps);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    const Eigen::Index k2 = 2 * (i + offset);
    const Eigen::Index lo = std::max<Eigen::Index>(0, k2);
    const Eigen::Index hi = std::min<Eigen::Index>(out.size() - 1, k2 + taps - 1);
    for (Eigen::Index n = lo; n <= hi; ++n) out[n] += c[i] * f[n - k2];
  }
}

inline int gray_code(int i) { return i ^ (i >> 1); }

}  // namespace

WaveletFilter wavelet_filter(const std::string& name) {
  const auto& table = scaling_coefficients();
  const auto it = table.find(name);
  if (it == table.end()) throw Error(Errc::unknown_wavelet, name);
  WaveletFilter filter;
  filter.name = name;
  const auto& h = it->second;
  const Eigen::Index taps = static_cast<Eigen::Index>(h.size());
  filter.lo.resize(taps);
  filter.hi.resize(taps);
  for (Eigen::Index n = 0; n < taps; ++n) {
    filter.lo[n] = h[static_cast<std::size_t>(n)];
    filter.hi[n] = (n % 2 == 0 ? 1.0 : -1.0) * h[static_cast<std::size_t>(taps - 1 - n)];
  }
  return filter;
}

WaveletPacketTree wpt_decompose(const Eigen::VectorXd& x, int level, const std::string& wavelet) {
  if (level < 1) throw Error(Errc::invalid_argument, "level must be >= 1");
  if (x.size() < (Eigen::Index{1} << level))
    throw Error(Errc::signal_too_short, "need len(x) >= 2^level");
  const WaveletFilter filter = wavelet_filter(wavelet);

  WaveletPacketTree tree;
  tree.level = level;
  tree.wavelet_name = wavelet;
  tree.level_lengths.push_back(x.size());

  std::vector<Eigen::VectorXd> nodes = {x};
  for (int depth = 0; depth < level; ++depth) {
    std::vector<Eigen::VectorXd> next;
    next.reserve(nodes.size() * 2);
    for (const auto& node : nodes) {
      next.push_back(analyze(node, filter.lo));
      next.push_back(analyze(node, filter.hi));
    }
    tree.level_lengths.push_back(next.front().size());
    nodes = std::move(next);
  }

  // natural (path) order -> frequency order
  tree.packets.resize(nodes.size());
  for (std::size_t p = 0; p < nodes.size(); ++p)
    tree.packets[p] = std::move(nodes[static_cast<std::size_t>(gray_code(static_cast<int>(p)))]);
  return tree;
}

Eigen::VectorXd energy_ratios(const WaveletPacketTree& tree) {
  Eigen::VectorXd energies(static_cast<Eigen::Index>(tree.packets.size()));
  for (std::size_t p = 0; p < tree.packets.size(); ++p)
    energies[static_cast<Eigen::Index>(p)] = tree.packets[p].squaredNorm();
  const double total = energies.sum();
  if (total <= 0.0) return Eigen::VectorXd::Zero(energies.size());
  return energies / total;
}

Eigen::VectorXd reconstruct_packet(const WaveletPacketTree& tree, int packet_index) {
  const int count = static_cast<int>(tree.packets.size());
  if (packet_index < 1 || packet_index > count)
    throw Error(Errc::index_out_of_range,
                "packet index " + std::to_string(packet_index) + " outside 1.." +
                    std::to_string(count));
  const WaveletFilter filter = wavelet_filter(tree.wavelet_name);
  const int natural = gray_code(packet_index - 1);

  Eigen::VectorXd current = tree.packets[static_cast<std::size_t>(packet_index - 1)];
  for (int depth = tree.level; depth >= 1; --depth) {
    const int branch = (natural >> (tree.level - depth)) & 1;
    Eigen::VectorXd parent =
        Eigen::VectorXd::Zero(tree.level_lengths[static_cast<std::size_t>(depth - 1)]);
    synthesize_into(parent, current, branch == 0 ? filter.lo : filter.hi);
    current = std::move(parent);
  }
  return current;
}

InformativePacketTable informative_packet_defaults() {
  return {
      {"turning-5.08cm", 3}, {"turning-6.35cm", 4},   {"turning-8.89cm", 6},
      {"turning-11.43cm", 10}, {"milling", 3},
  };
}

namespace {

const std::string& common_tag(const std::vector<TimeSeriesRecord>& records) {
  if (records.empty()) throw Error(Errc::empty_dataset, "no records");
  for (const auto& rec : records)
    if (rec.dataset_tag != records.front().dataset_tag)
      throw Error(Errc::invalid_argument, "records span multiple dataset tags");
  return records.front().dataset_tag;
}

}  // namespace

int select_informative_packet(const std::vector<TimeSeriesRecord>& records,
                              const InformativePacketTable& table) {
  const std::string& tag = common_tag(records);
  const auto it = table.find(tag);
  if (it == table.end())
    throw Error(Errc::missing_features, "no informative packet tabulated for tag " + tag);
  return it->second;
}

int select_informative_packet_auto(const std::vector<TimeSeriesRecord>& records, int level,
                                   const std::string& wavelet) {
  common_tag(records);
  Eigen::VectorXd mean_ratio = Eigen::VectorXd::Zero(Eigen::Index{1} << level);
  int unstable = 0;
  for (const auto& rec : records) {
    if (rec.label != StabilityLabel::Unstable) continue;
    mean_ratio += energy_ratios(wpt_decompose(rec.samples, level, wavelet));
    ++unstable;
  }
  if (unstable == 0)
    throw Error(Errc::no_unstable_records, "auto packet selection needs unstable records");
  Eigen::Index best = 0;
  mean_ratio.maxCoeff(&best);
  return static_cast<int>(best) + 1;
}

Eigen::VectorXd wpt_feature_vector(const Eigen::VectorXd& x, double fs, bool* degenerate) {
  if (x.size() == 0) throw Error(Errc::empty_input, "wpt_feature_vector on empty signal");
  const double n = static_cast<double>(x.size());
  const double mean = x.mean();
  const Eigen::ArrayXd centered = x.array() - mean;
  const double var = centered.square().sum() / n;
  const double sd = std::sqrt(var);
  const double rms = std::sqrt(x.array().square().sum() / n);
  const double peak = x.array().abs().maxCoeff();

  Eigen::VectorXd features = Eigen::VectorXd::Zero(14);
  features[0] = mean;
  features[1] = sd;
  features[2] = rms;
  features[3] = peak;

  const bool is_degenerate = sd <= 0.0;
  if (degenerate != nullptr) *degenerate = is_degenerate;
  if (!is_degenerate) {
    features[4] = centered.cube().sum() / n / (sd * sd * sd);
    features[5] = centered.square().square().sum() / n / (var * var);
    const double mean_abs = x.array().abs().mean();
    const double mean_sqrt_abs = x.array().abs().sqrt().mean();
    features[6] = peak / rms;
    features[7] = peak / (mean_sqrt_abs * mean_sqrt_abs);
    features[8] = rms / mean_abs;
    features[9] = peak / mean_abs;

    if (x.size() >= 2) {
      const SpectrumEstimate spectrum = fft_magnitude(x, fs);
      const Eigen::ArrayXd power = spectrum.ordinate.array().square();
      const double total = power.sum();
      if (total > 0.0) {
        const Eigen::ArrayXd freq = spectrum.abscissa.array();
        const double fc = (freq * power).sum() / total;
        const double msf = (freq.square() * power).sum() / total;
        features[10] = msf;
        features[11] = std::sqrt(std::max(0.0, msf - fc * fc));
        features[13] = fc;
      }
      features[12] = centered.head(x.size() - 1).matrix().dot(
                         centered.tail(x.size() - 1).matrix()) /
                     (var * n);
    }
  }
  return features;
}

std::vector<std::string> wpt_feature_names() {
  return {"mean",          "std",          "rms",           "peak",
          "skewness",      "kurtosis",     "crest_factor",  "clearance_factor",
          "shape_factor",  "impulse_factor", "mean_square_freq", "std_freq",
          "one_step_acf",  "freq_center"};
}

}  // namespace chatterkit
