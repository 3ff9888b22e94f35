#include "chatterkit/synth.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chatterkit/error.hpp"
#include "chatterkit/parallel.hpp"
#include "chatterkit/rng.hpp"

namespace chatterkit {

namespace {

struct DelayLine {
  std::vector<double> values;      // position history at integration steps
  std::vector<double> slopes;      // velocity history, same grid
  double dt;
  double delay;

  // cubic Hermite keeps the delayed-term error at the integrator's order;
  // linear interpolation would dominate the global error
  double at(double t) const {
    const double s = (t - delay) / dt;
    if (s <= 0.0) return 0.0;  // quiescent prehistory
    const auto i = static_cast<std::size_t>(s);
    if (i + 1 >= values.size()) return values.back();
    const double u = s - static_cast<double>(i);
    const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    const double h10 = u * (1.0 - u) * (1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    return h00 * values[i] + h10 * dt * slopes[i] + h01 * values[i + 1] +
           h11 * dt * slopes[i + 1];
  }
};

struct SimulationResult {
  Eigen::VectorXd samples;
  bool unstable = false;
};

// gate(t) in [0,1] multiplies the regenerative coefficient and the forcing
template <typename Gate>
SimulationResult integrate_delay_oscillator(const TurningModelParams& p, double delay_s,
                                            std::uint64_t seed, const Gate& gate) {
  if (p.fs <= 0.0 || p.duration_s <= 0.0 || p.damping_ratio <= 0.0 || p.damping_ratio >= 1.0)
    throw Error(Errc::invalid_argument, "bad oscillator parameters");
  if (p.fs * delay_s < 20.0)
    throw Error(Errc::unresolvable_delay, "need fs * delay >= 20 to resolve regeneration");

  const double wn = 2.0 * M_PI * p.natural_freq_hz;
  const double wn2 = wn * wn;
  const Eigen::Index n_out = static_cast<Eigen::Index>(std::llround(p.duration_s * p.fs));
  const int sub = std::max(1, p.substeps);
  const double h = 1.0 / (p.fs * sub);

  // force noise is held per output-sample interval so that refining the
  // integration step keeps the same realization
  Rng rng(mix_seed(seed, 0x51e9));
  std::vector<double> noise(static_cast<std::size_t>(n_out) + 1);
  for (auto& v : noise) v = p.noise_level * rng.normal();

  DelayLine history;
  history.dt = h;
  history.delay = delay_s;
  history.values.reserve(static_cast<std::size_t>(n_out) * sub + 1);
  history.slopes.reserve(static_cast<std::size_t>(n_out) * sub + 1);

  SimulationResult result;
  result.samples.resize(n_out);

  double x = 0.0, v = 0.0, t = 0.0;
  history.values.push_back(x);
  history.slopes.push_back(v);
  // the noise force is held over one output sample and passed in explicitly
  // so every stage of a step integrates the same piecewise-smooth system
  const auto accel = [&](double ti, double xi, double vi, double held_noise) {
    const double g = gate(ti);
    const double delayed = history.at(ti);
    const double force = wn2 * (held_noise + p.forcing * g);
    return -2.0 * p.damping_ratio * wn * vi - wn2 * xi +
           p.stiffness_ratio * wn2 * g * (delayed - xi) + force;
  };

  for (Eigen::Index i = 0; i < n_out; ++i) {
    const double held_noise = noise[static_cast<std::size_t>(i)];
    for (int s = 0; s < sub; ++s) {
      // rk4; the delayed state is far enough in the past that the stages
      // only read committed history
      const double k1x = v, k1v = accel(t, x, v, held_noise);
      const double k2x = v + 0.5 * h * k1v,
                   k2v = accel(t + 0.5 * h, x + 0.5 * h * k1x, v + 0.5 * h * k1v, held_noise);
      const double k3x = v + 0.5 * h * k2v,
                   k3v = accel(t + 0.5 * h, x + 0.5 * h * k2x, v + 0.5 * h * k2v, held_noise);
      const double k4x = v + h * k3v, k4v = accel(t + h, x + h * k3x, v + h * k3v, held_noise);
      x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      t += h;
      history.values.push_back(x);
      history.slopes.push_back(v);
    }
    result.samples[i] = x;
  }

  const Eigen::Index window = std::max<Eigen::Index>(1, n_out / 5);
  const double head = std::sqrt(result.samples.head(window).squaredNorm() / window);
  const double tail = std::sqrt(result.samples.tail(window).squaredNorm() / window);
  result.unstable = tail > 3.0 * head;
  return result;
}

TimeSeriesRecord make_record(const TurningModelParams& p, SimulationResult&& sim,
                             const char* kind) {
  TimeSeriesRecord rec;
  rec.id = kind;
  rec.samples = std::move(sim.samples);
  rec.fs = p.fs;
  rec.rpm = 60.0 / p.spindle_period_s;
  rec.depth_of_cut_mm = p.stiffness_ratio;
  rec.label = sim.unstable ? StabilityLabel::Unstable : StabilityLabel::Stable;
  rec.dataset_tag = kind;
  return rec;
}

}  // namespace

TimeSeriesRecord simulate_turning(const TurningModelParams& params, std::uint64_t seed) {
  auto sim = integrate_delay_oscillator(params, params.spindle_period_s, seed,
                                        [](double) { return 1.0; });
  return make_record(params, std::move(sim), "turning");
}

TimeSeriesRecord simulate_milling(const MillingModelParams& params, std::uint64_t seed) {
  if (params.tooth_count < 1) throw Error(Errc::invalid_argument, "tooth count must be >= 1");
  if (params.duty <= 0.0 || params.duty > 1.0)
    throw Error(Errc::invalid_argument, "duty must lie in (0, 1]");
  const double tooth_period = params.base.spindle_period_s / params.tooth_count;
  const double duty = params.duty;
  // smooth engagement edges keep the vector field C2, so the fixed-step
  // integrator converges under step refinement; full immersion is the
  // constant gate and reduces exactly to turning
  const double edge = 0.1 * duty;
  const bool full = duty >= 1.0;
  auto sim = integrate_delay_oscillator(
      params.base, tooth_period, seed, [tooth_period, duty, edge, full](double t) {
        if (full) return 1.0;
        const double phase = t / tooth_period;
        const double u = phase - std::floor(phase);
        const auto smooth = [](double s) {
          s = std::clamp(s, 0.0, 1.0);
          return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
        };
        return smooth(u / edge) - smooth((u - duty + edge) / edge);
      });
  return make_record(params.base, std::move(sim), "milling");
}

double kappa_lobe_floor(double damping_ratio) {
  return 2.0 * damping_ratio * (1.0 + damping_ratio);
}

MillingModelParams milling_preset(const std::string& name) {
  MillingModelParams p;
  p.base.natural_freq_hz = 900.0;
  p.base.damping_ratio = 0.02;
  p.base.noise_level = 0.00002;
  p.base.forcing = 0.1;
  p.base.duration_s = 0.6;
  p.base.fs = 25000.0;
  p.tooth_count = 2;
  p.duty = 0.05;
  const double floor = kappa_lobe_floor(p.base.damping_ratio);
  if (name == "stable") {
    // inside the pocket below the lobes; the tooth period is exactly 48
    // samples so stroboscopic sections sample a fixed phase
    p.base.spindle_period_s = 60.0 / 15625.0;
    p.base.stiffness_ratio = 5.0 * floor;
  } else if (name == "hopf") {
    // quasi-periodic chatter near the natural frequency; the growing orbit
    // amplifies integration error, so it gets a finer default step
    p.base.spindle_period_s = 60.0 / 16250.0;
    p.base.stiffness_ratio = 32.0 * floor;
    p.base.substeps = 8;
  } else if (name == "flip") {
    // period-doubling lobe: tooth-pass frequency near 2/3 of the natural
    // frequency, response locks to odd multiples of half the tooth rate
    p.base.spindle_period_s = 60.0 / 18500.0;
    p.base.stiffness_ratio = 14.0 * floor;
    p.base.substeps = 8;
  } else {
    throw Error(Errc::invalid_argument, "unknown milling preset '" + name + "'");
  }
  return p;
}

std::vector<std::array<double, 2>> poincare_section(const Eigen::VectorXd& x, int period_samples,
                                                    int delay) {
  if (period_samples < 1 || delay < 1)
    throw Error(Errc::invalid_argument, "period and delay must be >= 1");
  if (x.size() <= period_samples + delay)
    throw Error(Errc::signal_too_short, "poincare_section needs len(x) > period + delay");
  std::vector<std::array<double, 2>> points;
  for (Eigen::Index i = 0; i + delay < x.size(); i += period_samples)
    points.push_back({x[i], x[i + delay]});
  return points;
}

CorpusSpec demo_corpus_spec(int records_per_tag) {
  const int stable = records_per_tag / 2;
  const int unstable = records_per_tag - stable;

  CorpusSpec spec;
  const struct {
    const char* tag;
    double freq;
    double rpm_min, rpm_max;
  } turning_cases[] = {
      {"turning-5.08cm", 950.0, 320.0, 770.0},
      {"turning-6.35cm", 1250.0, 570.0, 770.0},
      {"turning-8.89cm", 1650.0, 570.0, 1030.0},
      {"turning-11.43cm", 2950.0, 570.0, 1030.0},
  };
  for (const auto& c : turning_cases) {
    TagSpec tag;
    tag.tag = c.tag;
    tag.kind = "turning";
    tag.count_stable = stable;
    tag.count_unstable = unstable;
    tag.natural_freq_hz = c.freq;
    tag.rpm_min = c.rpm_min;
    tag.rpm_max = c.rpm_max;
    spec.tags.push_back(tag);
  }

  TagSpec milling;
  milling.tag = "milling";
  milling.kind = "milling";
  milling.count_stable = stable;
  milling.count_unstable = unstable;
  milling.natural_freq_hz = 900.0;
  milling.rpm_min = 12000.0;
  milling.rpm_max = 15000.0;
  milling.fs = 12500.0;
  milling.duration_s = 0.4;  // matches the turning record length at 10 kHz
  milling.duty = 0.4;
  milling.forcing = 0.02;
  milling.kappa_unstable_min = 2.5;
  milling.kappa_unstable_max = 4.0;
  spec.tags.push_back(milling);
  return spec;
}

namespace {

TagSpec parse_tag_block(const std::vector<std::pair<std::string, std::string>>& kv) {
  TagSpec tag;
  for (const auto& [key, value] : kv) {
    if (key == "tag") tag.tag = value;
    else if (key == "kind") tag.kind = value;
    else if (key == "count_stable") tag.count_stable = std::stoi(value);
    else if (key == "count_unstable") tag.count_unstable = std::stoi(value);
    else if (key == "natural_freq_hz") tag.natural_freq_hz = std::stod(value);
    else if (key == "damping_ratio") tag.damping_ratio = std::stod(value);
    else if (key == "rpm_min") tag.rpm_min = std::stod(value);
    else if (key == "rpm_max") tag.rpm_max = std::stod(value);
    else if (key == "kappa_stable_min") tag.kappa_stable_min = std::stod(value);
    else if (key == "kappa_stable_max") tag.kappa_stable_max = std::stod(value);
    else if (key == "kappa_unstable_min") tag.kappa_unstable_min = std::stod(value);
    else if (key == "kappa_unstable_max") tag.kappa_unstable_max = std::stod(value);
    else if (key == "noise_level") tag.noise_level = std::stod(value);
    else if (key == "forcing") tag.forcing = std::stod(value);
    else if (key == "duration_s") tag.duration_s = std::stod(value);
    else if (key == "fs") tag.fs = std::stod(value);
    else if (key == "tooth_count") tag.tooth_count = std::stoi(value);
    else if (key == "duty") tag.duty = std::stod(value);
    else if (key == "rms_stable_min") tag.rms_stable_min = std::stod(value);
    else if (key == "rms_stable_max") tag.rms_stable_max = std::stod(value);
    else if (key == "rms_unstable_min") tag.rms_unstable_min = std::stod(value);
    else if (key == "rms_unstable_max") tag.rms_unstable_max = std::stod(value);
    else throw Error(Errc::parse_error, "unknown corpus key '" + key + "'");
  }
  if (tag.tag.empty()) throw Error(Errc::parse_error, "corpus tag block without a tag name");
  return tag;
}

}  // namespace

CorpusSpec load_corpus_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::missing_file, path.string());
  CorpusSpec spec;
  std::vector<std::pair<std::string, std::string>> block;
  std::string line;
  const auto flush = [&]() {
    if (!block.empty()) {
      spec.tags.push_back(parse_tag_block(block));
      block.clear();
    }
  };
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string key, value;
    if (!(fields >> key) || key[0] == '#') continue;
    if (key == "tag") flush();
    if (!(fields >> value)) throw Error(Errc::parse_error, "corpus key '" + key + "' needs a value");
    block.emplace_back(key, value);
  }
  flush();
  if (spec.tags.empty()) throw Error(Errc::parse_error, "corpus spec lists no tags");
  return spec;
}

namespace {

TimeSeriesRecord draw_record(const TagSpec& tag, bool want_unstable, std::uint64_t seed) {
  const double floor = kappa_lobe_floor(tag.damping_ratio);
  // rejection sampling on the growth label; draw index advances the stream
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(mix_seed(seed, attempt));
    TurningModelParams p;
    p.natural_freq_hz = tag.natural_freq_hz;
    p.damping_ratio = tag.damping_ratio;
    p.noise_level = tag.noise_level;
    p.forcing = tag.forcing;
    p.duration_s = tag.duration_s;
    p.fs = tag.fs;
    p.spindle_period_s = 60.0 / rng.uniform(tag.rpm_min, tag.rpm_max);
    p.stiffness_ratio = floor * (want_unstable
                                     ? rng.uniform(tag.kappa_unstable_min, tag.kappa_unstable_max)
                                     : rng.uniform(tag.kappa_stable_min, tag.kappa_stable_max));

    TimeSeriesRecord rec;
    if (tag.kind == "milling") {
      MillingModelParams mp;
      mp.base = p;
      mp.tooth_count = tag.tooth_count;
      mp.duty = tag.duty;
      rec = simulate_milling(mp, rng.bits());
    } else {
      rec = simulate_turning(p, rng.bits());
    }
    const bool unstable = rec.label == StabilityLabel::Unstable;
    if (unstable != want_unstable) {
      if (attempt >= 60)
        throw Error(Errc::invalid_argument,
                    "corpus ranges for tag " + tag.tag + " do not produce the requested label");
      continue;
    }

    const double lo = want_unstable ? tag.rms_unstable_min : tag.rms_stable_min;
    const double hi = want_unstable ? tag.rms_unstable_max : tag.rms_stable_max;
    if (lo > 0.0) {
      const double rms =
          std::sqrt(rec.samples.squaredNorm() / static_cast<double>(rec.samples.size()));
      if (rms > 0.0) rec.samples *= rng.uniform(lo, hi) / rms;
    }
    rec.dataset_tag = tag.tag;
    return rec;
  }
}

}  // namespace

std::vector<std::filesystem::path> generate_benchmark(const CorpusSpec& spec, std::uint64_t seed,
                                                      const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + out_dir.string());

  std::vector<std::filesystem::path> manifests;
  for (std::size_t t = 0; t < spec.tags.size(); ++t) {
    const TagSpec& tag = spec.tags[t];
    const int total = tag.count_stable + tag.count_unstable;
    std::vector<TimeSeriesRecord> records(static_cast<std::size_t>(total));
    parallel_for(static_cast<std::size_t>(total), [&](std::size_t i) {
      const bool want_unstable = static_cast<int>(i) >= tag.count_stable;
      records[i] = draw_record(tag, want_unstable, mix_seed(seed, t * 1000003 + i));
    });

    const std::filesystem::path tag_dir = out_dir / tag.tag;
    std::filesystem::create_directories(tag_dir, ec);
    if (ec) throw Error(Errc::io_error, "cannot create " + tag_dir.string());

    DatasetManifest manifest;
    manifest.name = tag.tag;
    manifest.fs_raw = tag.fs;
    manifest.fs_target = tag.fs;
    for (int i = 0; i < total; ++i) {
      auto& rec = records[static_cast<std::size_t>(i)];
      char name[32];
      std::snprintf(name, sizeof(name), "rec_%04d", i);
      rec.id = name;
      const std::filesystem::path series_path = tag_dir / (rec.id + ".txt");
      save_series(rec.samples, series_path);
      ManifestEntry entry;
      entry.path = series_path;
      entry.rpm = rec.rpm;
      entry.depth_of_cut_mm = rec.depth_of_cut_mm;
      entry.label = rec.label;
      entry.dataset_tag = tag.tag;
      manifest.records.push_back(std::move(entry));
    }
    const std::filesystem::path manifest_path = out_dir / (tag.tag + ".manifest");
    save_manifest(manifest, manifest_path);
    manifests.push_back(manifest_path);
  }
  return manifests;
}

}  // namespace chatterkit
