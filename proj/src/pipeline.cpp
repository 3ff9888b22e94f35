#include "chatterkit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "chatterkit/error.hpp"
#include "chatterkit/preprocess.hpp"

namespace chatterkit {

namespace {

std::vector<std::string> tail_fields(std::istringstream& in) {
  std::vector<std::string> fields;
  std::string f;
  while (in >> f) fields.push_back(f);
  return fields;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::missing_file, path.string());
  RunConfig config;
  config.plan.seeds.clear();
  const std::filesystem::path base = path.parent_path();

  std::string line;
  bool saw_featurizers = false, saw_classifiers = false;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key) || key[0] == '#') continue;
    if (key == "manifest") {
      std::string value;
      if (!(fields >> value)) throw Error(Errc::parse_error, "manifest needs a path");
      config.manifests.push_back(base / value);
    } else if (key == "featurizers") {
      config.featurizers = tail_fields(fields);
      saw_featurizers = true;
    } else if (key == "classifiers") {
      config.classifiers = tail_fields(fields);
      saw_classifiers = true;
    } else if (key == "seeds") {
      for (const auto& s : tail_fields(fields)) config.plan.seeds.push_back(std::stoull(s));
    } else {
      std::string value;
      if (!(fields >> value)) throw Error(Errc::parse_error, "key '" + key + "' needs a value");
      if (key == "train_fraction") config.plan.train_fraction = std::stod(value);
      else if (key == "test_fraction") config.plan.test_fraction = std::stod(value);
      else if (key == "include_traditional") config.include_traditional = value != "0";
      else if (key == "cutoff_hz") config.cutoff_hz = std::stod(value);
      else if (key == "filter_order") config.filter_order = std::stoi(value);
      else if (key == "wpt_level") config.wpt.level = std::stoi(value);
      else if (key == "wpt_packet") config.wpt.packet = value;
      else if (key == "wavelet") config.wpt.wavelet = value;
      else if (key == "eemd_ensemble") config.eemd.ensemble_size = std::stoi(value);
      else if (key == "eemd_noise") config.eemd.noise_std_fraction = std::stod(value);
      else if (key == "eemd_seed") config.eemd.seed = std::stoull(value);
      else if (key == "fpa_mpd") config.fpa.mpd = std::stod(value);
      else if (key == "fpa_npeaks") config.fpa.n_peaks = std::stoi(value);
      else if (key == "fpa_alpha_fft") config.fpa.alpha_fft = std::stod(value);
      else if (key == "fpa_alpha_acf") config.fpa.alpha_acf = std::stod(value);
      else if (key == "fpa_max_lag") config.fpa.acf_max_lag = std::stoi(value);
      else if (key == "tda_max_points") config.tda.max_points = std::stoi(value);
      else if (key == "tda_fnn_threshold") config.tda.fnn_threshold = std::stod(value);
      else if (key == "dtw_window") config.dtw.window_fraction = std::stod(value);
      else if (key == "dtw_normalize") config.dtw.znormalize = value != "0";
      else if (key == "dtw_slope") config.dtw.slope_p = std::stod(value);
      else if (key == "dtw_segment") config.dtw_segment = std::stoi(value);
      else if (key == "out") config.out_dir = base / value;
      else throw Error(Errc::parse_error, "unknown run config key '" + key + "'");
    }
  }
  if (config.plan.seeds.empty())
    config.plan.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  if (config.manifests.size() < 2)
    throw Error(Errc::too_few_tags, "run config needs at least 2 manifests");
  (void)saw_featurizers;
  (void)saw_classifiers;
  return config;
}

std::vector<TimeSeriesRecord> load_prepared_records(const std::filesystem::path& manifest_path,
                                                    double cutoff_hz, int filter_order) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  std::vector<TimeSeriesRecord> records = binarize_labels(load_records(manifest));
  if (records.empty())
    throw Error(Errc::empty_dataset, manifest_path.string() + ": no labeled records");

  if (manifest.fs_target < manifest.fs_raw) {
    const int factor = static_cast<int>(std::lround(manifest.fs_raw / manifest.fs_target));
    const double cutoff = cutoff_hz > 0.0 ? cutoff_hz : 0.45 * (manifest.fs_target / 2.0);
    FilterSpec spec{cutoff, filter_order, factor};
    for (auto& rec : records) {
      rec.samples = decimate(lowpass_filter(rec.samples, rec.fs, spec), factor);
      rec.fs = rec.fs / factor;
    }
  }
  return records;
}

namespace {

Eigen::VectorXd tail_segment(const Eigen::VectorXd& x, int segment) {
  if (segment <= 0 || segment >= x.size()) return x;
  return x.tail(segment);
}

std::string format_score(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_pair_csv(const PairResult& pr, const std::filesystem::path& path,
                    const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << "# config " << config_hash << "\n";
  out << "featurizer,classifier,mean_accuracy,std_accuracy,mean_f1,std_f1\n";
  for (const auto& [featurizer, result] : pr.by_featurizer) {
    for (const auto& [classifier, summary] : result.by_classifier) {
      out << featurizer << "," << classifier << "," << format_score(summary.mean_accuracy) << ","
          << format_score(summary.std_accuracy) << "," << format_score(summary.mean_f1) << ","
          << format_score(summary.std_f1) << "\n";
    }
    out << featurizer << ",best:" << result.best_classifier << ","
        << format_score(result.best.mean_accuracy) << "," << format_score(result.best.std_accuracy)
        << "," << format_score(result.best.mean_f1) << "," << format_score(result.best.std_f1)
        << "\n";
  }
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

}  // namespace

std::string hash_bytes(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::missing_file, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return hash_bytes(buffer.str());
}

void write_report_files(const TransferReport& report, const std::filesystem::path& out_dir,
                        const std::string& config_hash) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  std::vector<std::string> tags;
  for (const auto& pr : report.pairs) {
    for (const std::string* tag : {&pr.pair.source_tag, &pr.pair.target_tag})
      if (std::find(tags.begin(), tags.end(), *tag) == tags.end()) tags.push_back(*tag);
  }

  for (const auto& pr : report.pairs)
    write_pair_csv(pr, out_dir / ("pair_" + pr.pair.source_tag + "__" + pr.pair.target_tag + ".csv"),
                   config_hash);

  // per-featurizer best-score heatmaps, rows = train tag, cols = test tag
  for (const auto& featurizer : report.featurizers) {
    for (const RankMetric metric : {RankMetric::Accuracy, RankMetric::F1}) {
      const std::string name = std::string("heatmap_") +
                               (metric == RankMetric::Accuracy ? "accuracy" : "f1") + "_" +
                               featurizer + ".csv";
      std::ofstream out(out_dir / name);
      if (!out) throw Error(Errc::io_error, "cannot write heatmap " + name);
      out << "# config " << config_hash << "\n";
      out << "train\\test";
      for (const auto& tag : tags) out << "," << tag;
      out << "\n";
      for (const auto& src : tags) {
        out << src;
        for (const auto& tgt : tags) {
          out << ",";
          for (const auto& pr : report.pairs) {
            if (pr.pair.source_tag != src || pr.pair.target_tag != tgt) continue;
            const auto it = pr.by_featurizer.find(featurizer);
            if (it == pr.by_featurizer.end()) continue;
            out << format_score(metric == RankMetric::Accuracy ? it->second.best.mean_accuracy
                                                               : it->second.best_f1.mean_f1);
          }
        }
        out << "\n";
      }
    }
  }

  // BM / MIEB summary over the configured groups
  std::ofstream summary(out_dir / "bm_mieb.csv");
  if (!summary) throw Error(Errc::io_error, "cannot write bm_mieb.csv");
  summary << "# config " << config_hash << "\n";
  summary << "group,bm_accuracy,mieb_accuracy,bm_f1,mieb_f1\n";
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& [group, members] : default_method_groups()) {
    std::vector<std::string> present;
    for (const auto& member : members)
      if (std::find(report.featurizers.begin(), report.featurizers.end(), member) !=
          report.featurizers.end())
        present.push_back(member);
    if (!present.empty()) groups[group] = present;
  }
  const auto acc = count_best_and_error_band(report, groups, RankMetric::Accuracy);
  const auto f1 = count_best_and_error_band(report, groups, RankMetric::F1);
  for (const auto& [group, counts] : acc) {
    summary << group << "," << counts.best_method << "," << counts.in_error_band << ","
            << f1.at(group).best_method << "," << f1.at(group).in_error_band << "\n";
  }
}

TransferReport run_pipeline(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + config.out_dir.string());

  // config hash covers the manifests and the run parameters
  std::ostringstream ident;
  for (const auto& m : config.manifests) ident << hash_file(m) << "\n";
  {
    std::ostringstream params;
    params << config.include_traditional << " " << config.cutoff_hz << " " << config.filter_order
           << " " << config.wpt.level << " " << config.wpt.packet << " " << config.wpt.wavelet
           << " " << config.eemd.ensemble_size << " " << config.eemd.noise_std_fraction << " "
           << config.eemd.seed << " " << config.fpa.mpd << " " << config.fpa.n_peaks << " "
           << config.tda.max_points << " " << config.tda.fnn_threshold << " "
           << config.dtw.window_fraction << " " << config.dtw.znormalize << " "
           << config.dtw.slope_p << " " << config.dtw_segment << " " << config.plan.train_fraction
           << " " << config.plan.test_fraction;
    for (const auto& f : config.featurizers) params << " " << f;
    for (const auto& c : config.classifiers) params << " " << c;
    for (const auto& s : config.plan.seeds) params << " " << s;
    ident << params.str();
  }
  const std::string config_hash = hash_bytes(ident.str());

  // per-tag records
  std::vector<std::string> tags;
  std::map<std::string, std::vector<TimeSeriesRecord>> records_by_tag;
  for (const auto& manifest_path : config.manifests) {
    auto records = load_prepared_records(manifest_path, config.cutoff_hz, config.filter_order);
    const std::string tag = records.front().dataset_tag;
    for (const auto& rec : records)
      if (rec.dataset_tag != tag)
        throw Error(Errc::invalid_argument,
                    manifest_path.string() + ": manifest mixes dataset tags");
    if (records_by_tag.count(tag))
      throw Error(Errc::invalid_argument, "duplicate tag " + tag);
    tags.push_back(tag);
    records_by_tag.emplace(tag, std::move(records));
  }

  FeatureBank bank;
  for (const auto& tag : tags) {
    const auto& records = records_by_tag.at(tag);
    bank.tag_ids[tag] = record_ids(records);
    bank.tag_labels[tag] = record_labels(records);
  }

  const bool want_diagrams =
      std::find_if(config.featurizers.begin(), config.featurizers.end(), [](const std::string& f) {
        return f.rfind("tda-", 0) == 0;
      }) != config.featurizers.end();

  for (const auto& tag : tags) {
    const auto& records = records_by_tag.at(tag);
    for (const auto& featurizer : config.featurizers) {
      if (featurizer == "fpa")
        bank.features["fpa"][tag] = fpa_features(records, config.fpa);
      else if (featurizer == "wpt")
        bank.features["wpt"][tag] = wpt_features(records, config.wpt);
      else if (featurizer == "eemd")
        bank.features["eemd"][tag] = eemd_features(records, config.eemd);
    }
    if (want_diagrams) {
      bank.diagrams[tag] = record_diagrams(records, config.tda);
      if (std::find(config.featurizers.begin(), config.featurizers.end(), "tda-cc") !=
          config.featurizers.end())
        bank.features["tda-cc"][tag] = carlsson_features(records, bank.diagrams.at(tag));
    }
  }

  const bool want_dtw = std::find(config.featurizers.begin(), config.featurizers.end(), "dtw") !=
                        config.featurizers.end();
  if (want_dtw) {
    std::map<std::string, std::vector<TimeSeriesRecord>> segments;
    for (const auto& tag : tags) {
      auto copy = records_by_tag.at(tag);
      for (auto& rec : copy) rec.samples = tail_segment(rec.samples, config.dtw_segment);
      segments.emplace(tag, std::move(copy));
    }
    for (std::size_t a = 0; a < tags.size(); ++a) {
      for (std::size_t b = a; b < tags.size(); ++b) {
        if (a == b) {
          if (!config.include_traditional) continue;
          DistanceMatrix self = pairwise_matrix(segments.at(tags[a]), config.dtw);
          bank.dtw_cross[tags[a] + "|" + tags[a]] = std::move(self);
          continue;
        }
        // rows = target, cols = source; the transpose serves the swapped pair
        DistanceMatrix forward = cross_matrix(segments.at(tags[a]), segments.at(tags[b]),
                                              config.dtw);
        DistanceMatrix backward;
        backward.row_ids = forward.col_ids;
        backward.col_ids = forward.row_ids;
        backward.values = forward.values.transpose();
        bank.dtw_cross[tags[a] + "|" + tags[b]] = std::move(forward);
        bank.dtw_cross[tags[b] + "|" + tags[a]] = std::move(backward);
      }
    }
  }

  const auto pairs = enumerate_pairs(tags, config.include_traditional);
  TransferReport report =
      run_transfer(pairs, config.featurizers, config.classifiers, config.plan, bank);

  write_report_files(report, config.out_dir, config_hash);

  std::ofstream provenance(config.out_dir / "provenance.txt");
  provenance << "config " << config_hash << "\n";
  provenance << "tags";
  for (const auto& tag : tags) provenance << " " << tag;
  provenance << "\nseeds";
  for (const auto& s : config.plan.seeds) provenance << " " << s;
  provenance << "\nfeaturizers";
  for (const auto& f : config.featurizers) provenance << " " << f;
  provenance << "\nclassifiers";
  for (const auto& c : config.classifiers) provenance << " " << c;
  provenance << "\n";
  return report;
}

}  // namespace chatterkit
