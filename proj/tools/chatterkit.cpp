#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "chatterkit/diagram_features.hpp"
#include "chatterkit/error.hpp"
#include "chatterkit/pipeline.hpp"
#include "chatterkit/preprocess.hpp"
#include "chatterkit/synth.hpp"

namespace ck = chatterkit;
namespace fs = std::filesystem;

namespace {

struct FeaturizeArgs {
  std::string manifest;
  std::string out = "features.csv";
  double cutoff_hz = 0.0;
  int filter_order = 10;
};

std::vector<ck::TimeSeriesRecord> prepared(const FeaturizeArgs& args) {
  return ck::load_prepared_records(args.manifest, args.cutoff_hz, args.filter_order);
}

void add_common(CLI::App* cmd, FeaturizeArgs& args) {
  cmd->add_option("--manifest", args.manifest, "dataset manifest")->required();
  cmd->add_option("--out", args.out, "output CSV path");
  cmd->add_option("--cutoff-hz", args.cutoff_hz, "low-pass cutoff (0 = 0.45 x target Nyquist)");
  cmd->add_option("--order", args.filter_order, "Butterworth order");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chatter featurization and transfer-learning toolkit"};
  app.require_subcommand(1);

  // ------------------------------------------------------------------ synth
  auto* synth = app.add_subcommand("synth", "generate a labeled synthetic corpus");
  std::string synth_spec = "demo5";
  std::uint64_t synth_seed = 1;
  std::string synth_out = "corpus";
  int records_per_tag = 200;
  synth->add_option("--spec", synth_spec, "corpus spec file, or demo5 for the built-in corpus");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--records-per-tag", records_per_tag, "records per tag for demo5");

  // ------------------------------------------------------------- preprocess
  auto* preprocess = app.add_subcommand("preprocess", "low-pass filter and decimate a dataset");
  std::string pre_manifest, pre_out;
  double pre_cutoff = 0.0;
  int pre_factor = 0, pre_order = 10;
  preprocess->add_option("--manifest", pre_manifest, "dataset manifest")->required();
  preprocess->add_option("--cutoff-hz", pre_cutoff, "cutoff (0 = 0.45 x target Nyquist)");
  preprocess->add_option("--factor", pre_factor, "decimation factor (0 = fs_raw / fs_target)");
  preprocess->add_option("--order", pre_order, "Butterworth order");
  preprocess->add_option("--out", pre_out, "output directory")->required();

  // -------------------------------------------------------------- featurize
  auto* featurize = app.add_subcommand("featurize", "extract features from a dataset");
  featurize->require_subcommand(1);

  auto* fpa_cmd = featurize->add_subcommand("fpa", "FFT/PSD/ACF peak coordinates");
  FeaturizeArgs fpa_args;
  ck::FpaConfig fpa_cfg;
  add_common(fpa_cmd, fpa_args);
  fpa_cmd->add_option("--alpha-fft", fpa_cfg.alpha_fft, "MPH alpha for FFT and PSD");
  fpa_cmd->add_option("--alpha-acf", fpa_cfg.alpha_acf, "MPH alpha for ACF");
  fpa_cmd->add_option("--mpd", fpa_cfg.mpd, "minimum peak distance");
  fpa_cmd->add_option("--n-peaks", fpa_cfg.n_peaks, "peaks per transform");

  auto* wpt_cmd = featurize->add_subcommand("wpt", "wavelet packet features");
  FeaturizeArgs wpt_args;
  ck::WptDriverConfig wpt_cfg;
  add_common(wpt_cmd, wpt_args);
  wpt_cmd->add_option("--level", wpt_cfg.level, "decomposition level");
  wpt_cmd->add_option("--packet", wpt_cfg.packet, "auto | table | packet index");
  wpt_cmd->add_option("--wavelet", wpt_cfg.wavelet, "wavelet name (db1..db5)");

  auto* eemd_cmd = featurize->add_subcommand("eemd", "ensemble EMD features");
  FeaturizeArgs eemd_args;
  ck::EemdDriverConfig eemd_cfg;
  add_common(eemd_cmd, eemd_args);
  eemd_cmd->add_option("--ensemble", eemd_cfg.ensemble_size, "ensemble size");
  eemd_cmd->add_option("--noise", eemd_cfg.noise_std_fraction, "noise std as fraction of std(x)");
  eemd_cmd->add_option("--seed", eemd_cfg.seed, "noise seed");

  auto* tda_cmd = featurize->add_subcommand("tda", "persistence-diagram features");
  FeaturizeArgs tda_args;
  ck::TdaDriverConfig tda_cfg;
  std::string tda_method = "cc";
  std::string diagram_dir;
  add_common(tda_cmd, tda_args);
  tda_cmd->add_option("--method", tda_method, "cc | pi | pl | tf");
  tda_cmd->add_option("--max-points", tda_cfg.max_points, "point-cloud cap before Rips");
  tda_cmd->add_option("--diagram-dir", diagram_dir, "cache directory for diagrams");

  // -------------------------------------------------------------------- dtw
  auto* dtw_cmd = app.add_subcommand("dtw", "DTW distance matrix between two datasets");
  std::string dtw_a, dtw_b, dtw_out = "distances.csv";
  ck::DtwConfig dtw_cfg;
  int dtw_segment = 0;
  double dtw_cutoff = 0.0;
  int dtw_order = 10;
  dtw_cmd->add_option("--manifest-a", dtw_a, "source dataset")->required();
  dtw_cmd->add_option("--manifest-b", dtw_b, "target dataset (defaults to the source)");
  dtw_cmd->add_option("--window", dtw_cfg.window_fraction, "band as fraction of max length");
  dtw_cmd->add_option("--slope", dtw_cfg.slope_p, "slope constraint P (0 disables)");
  dtw_cmd->add_flag("--raw", [&dtw_cfg](std::int64_t) { dtw_cfg.znormalize = false; },
                    "skip z-normalization");
  dtw_cmd->add_option("--segment", dtw_segment, "use only the last N samples");
  dtw_cmd->add_option("--cutoff-hz", dtw_cutoff, "low-pass cutoff");
  dtw_cmd->add_option("--order", dtw_order, "Butterworth order");
  dtw_cmd->add_option("--out", dtw_out, "output CSV path");

  // ------------------------------------------------------------------ train
  auto* train_cmd = app.add_subcommand("train", "train and score one classifier on one dataset");
  std::string train_features, train_classifier = "lr";
  std::vector<std::uint64_t> train_seeds;
  double train_frac = 0.67, test_frac = 0.70;
  train_cmd->add_option("--features", train_features, "feature CSV")->required();
  train_cmd->add_option("--classifier", train_classifier, "lr | svm | rf | gb | mlp");
  train_cmd->add_option("--seed-list", train_seeds, "realization seeds");
  train_cmd->add_option("--train-fraction", train_frac, "train fraction");
  train_cmd->add_option("--test-fraction", test_frac, "test fraction");

  // --------------------------------------------------------------- transfer
  auto* transfer_cmd = app.add_subcommand("transfer", "run the full transfer protocol");
  std::string transfer_config;
  std::string transfer_out;
  transfer_cmd->add_option("--config", transfer_config, "run config file")->required();
  transfer_cmd->add_option("--out", transfer_out, "report directory (overrides the config)");

  // ----------------------------------------------------------------- report
  auto* report_cmd = app.add_subcommand("report", "recompute BM/MIEB tables from pair CSVs");
  std::string report_dir;
  report_cmd->add_option("--report", report_dir, "report directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      const ck::CorpusSpec spec = synth_spec == "demo5" ? ck::demo_corpus_spec(records_per_tag)
                                                        : ck::load_corpus_spec(synth_spec);
      const auto manifests = ck::generate_benchmark(spec, synth_seed, synth_out);
      for (const auto& m : manifests) std::cout << m.string() << "\n";
      return 0;
    }

    if (preprocess->parsed()) {
      ck::DatasetManifest manifest = ck::load_manifest(pre_manifest);
      const int factor = pre_factor > 0
                             ? pre_factor
                             : static_cast<int>(std::lround(manifest.fs_raw / manifest.fs_target));
      const double target_fs = manifest.fs_raw / factor;
      const double cutoff = pre_cutoff > 0.0 ? pre_cutoff : 0.45 * (target_fs / 2.0);
      fs::create_directories(pre_out);

      ck::DatasetManifest out_manifest = manifest;
      out_manifest.fs_raw = target_fs;
      out_manifest.fs_target = target_fs;
      out_manifest.format = ck::SeriesFormat::Value;
      for (std::size_t i = 0; i < manifest.records.size(); ++i) {
        const auto& entry = manifest.records[i];
        Eigen::VectorXd x = ck::load_series(entry.path, manifest.format);
        x = ck::decimate(ck::lowpass_filter(x, manifest.fs_raw, {cutoff, pre_order, factor}),
                         factor);
        const fs::path series_path = fs::path(pre_out) / entry.path.filename();
        ck::save_series(x, series_path);
        out_manifest.records[i].path = series_path;
      }
      ck::save_manifest(out_manifest, fs::path(pre_out) / "processed.manifest");
      std::cout << (fs::path(pre_out) / "processed.manifest").string() << "\n";
      return 0;
    }

    if (fpa_cmd->parsed()) {
      const auto records = prepared(fpa_args);
      ck::save_feature_matrix(ck::fpa_features(records, fpa_cfg), fpa_args.out,
                              "features fpa " + ck::hash_file(fpa_args.manifest));
      return 0;
    }
    if (wpt_cmd->parsed()) {
      const auto records = prepared(wpt_args);
      ck::save_feature_matrix(ck::wpt_features(records, wpt_cfg), wpt_args.out,
                              "features wpt " + ck::hash_file(wpt_args.manifest));
      return 0;
    }
    if (eemd_cmd->parsed()) {
      const auto records = prepared(eemd_args);
      ck::save_feature_matrix(ck::eemd_features(records, eemd_cfg), eemd_args.out,
                              "features eemd " + ck::hash_file(eemd_args.manifest));
      return 0;
    }
    if (tda_cmd->parsed()) {
      const auto records = prepared(tda_args);
      const auto diagrams = ck::record_diagrams(records, tda_cfg);
      if (!diagram_dir.empty()) {
        fs::create_directories(diagram_dir);
        for (std::size_t i = 0; i < diagrams.size(); ++i)
          ck::save_diagram(diagrams[i], fs::path(diagram_dir) / (records[i].id + ".txt"));
      }
      ck::FeatureMatrix fm;
      if (tda_method == "cc") {
        fm = ck::carlsson_features(records, diagrams);
      } else {
        fm.record_ids = ck::record_ids(records);
        fm.labels = ck::record_labels(records);
        if (tda_method == "pi") {
          const ck::ImageGrid grid = ck::fit_image_grid(diagrams, 0.1);
          const double cap = ck::max_lifetime(diagrams);
          const Eigen::Index width =
              static_cast<Eigen::Index>(grid.birth_bins()) * grid.life_bins();
          fm.values.resize(static_cast<Eigen::Index>(diagrams.size()), width);
          for (std::size_t i = 0; i < diagrams.size(); ++i)
            fm.values.row(static_cast<Eigen::Index>(i)) =
                ck::persistence_image(diagrams[i], 0.1, grid, cap).transpose();
          for (Eigen::Index i = 0; i < width; ++i)
            fm.feature_names.push_back("pi_" + std::to_string(i));
        } else if (tda_method == "pl") {
          const auto mesh = ck::landscape_mesh(diagrams, 1);
          fm.values = ck::landscape_features(diagrams, 1, mesh);
          for (std::size_t i = 0; i < mesh.size(); ++i)
            fm.feature_names.push_back("pl_" + std::to_string(i));
        } else if (tda_method == "tf") {
          Eigen::VectorXd mesh_birth, mesh_life;
          ck::fit_template_meshes(diagrams, 5, mesh_birth, mesh_life);
          fm.values = ck::template_function_features(diagrams, mesh_birth, mesh_life);
          for (Eigen::Index i = 0; i < fm.values.cols(); ++i)
            fm.feature_names.push_back("tf_" + std::to_string(i));
        } else {
          throw ck::Error(ck::Errc::invalid_argument, "unknown tda method " + tda_method);
        }
      }
      ck::save_feature_matrix(fm, tda_args.out,
                              "features tda-" + tda_method + " " + ck::hash_file(tda_args.manifest));
      return 0;
    }

    if (dtw_cmd->parsed()) {
      auto source = ck::load_prepared_records(dtw_a, dtw_cutoff, dtw_order);
      for (auto& rec : source)
        if (dtw_segment > 0 && rec.samples.size() > dtw_segment)
          rec.samples = rec.samples.tail(dtw_segment).eval();
      ck::DistanceMatrix dm;
      if (dtw_b.empty() || dtw_b == dtw_a) {
        dm = ck::pairwise_matrix(source, dtw_cfg);
      } else {
        auto target = ck::load_prepared_records(dtw_b, dtw_cutoff, dtw_order);
        for (auto& rec : target)
          if (dtw_segment > 0 && rec.samples.size() > dtw_segment)
            rec.samples = rec.samples.tail(dtw_segment).eval();
        dm = ck::cross_matrix(source, target, dtw_cfg);
      }
      ck::save_distance_matrix(dm, dtw_out, "dtw " + ck::hash_file(dtw_a));
      return 0;
    }

    if (train_cmd->parsed()) {
      const ck::FeatureMatrix fm = ck::load_feature_matrix(train_features);
      ck::SplitPlan plan;
      if (!train_seeds.empty()) plan.seeds = train_seeds;
      plan.train_fraction = train_frac;
      plan.test_fraction = test_frac;
      const ck::ClassifierSpec spec = ck::ClassifierSpec::from_name(train_classifier);
      const ck::EvalSummary summary = ck::evaluate_realizations(spec, fm, fm, plan);
      std::printf("classifier %s\n", train_classifier.c_str());
      std::printf("accuracy %.4f +- %.4f\n", summary.mean_accuracy, summary.std_accuracy);
      std::printf("f1 %.4f +- %.4f\n", summary.mean_f1, summary.std_f1);
      return 0;
    }

    if (transfer_cmd->parsed()) {
      ck::RunConfig config = ck::load_run_config(transfer_config);
      if (!transfer_out.empty()) config.out_dir = transfer_out;
      const ck::TransferReport report = ck::run_pipeline(config);
      std::cout << "report written to " << config.out_dir.string() << " (" << report.pairs.size()
                << " pairs)\n";
      return 0;
    }

    if (report_cmd->parsed()) {
      // rebuilds the summary from the pair CSVs already on disk
      ck::TransferReport report;
      std::vector<fs::path> pair_files;
      for (const auto& entry : fs::directory_iterator(report_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("pair_", 0) == 0 && entry.path().extension() == ".csv")
          pair_files.push_back(entry.path());
      }
      std::sort(pair_files.begin(), pair_files.end());
      if (pair_files.empty()) throw ck::Error(ck::Errc::incomplete_report, "no pair CSVs found");
      std::string config_hash = "unknown";
      for (const auto& file : pair_files) {
        std::ifstream in(file);
        std::string line;
        ck::PairResult pr;
        const std::string stem = file.stem().string().substr(5);
        const auto sep = stem.find("__");
        pr.pair.source_tag = stem.substr(0, sep);
        pr.pair.target_tag = stem.substr(sep + 2);
        pr.pair.traditional = pr.pair.source_tag == pr.pair.target_tag;
        while (std::getline(in, line)) {
          if (line.rfind("# config ", 0) == 0) {
            config_hash = line.substr(9);
            continue;
          }
          if (line.empty() || line[0] == '#' || line.rfind("featurizer,", 0) == 0) continue;
          std::istringstream cells(line);
          std::string featurizer, classifier, cell;
          std::getline(cells, featurizer, ',');
          std::getline(cells, classifier, ',');
          if (classifier.rfind("best:", 0) == 0) continue;  // derived rows
          ck::EvalSummary summary;
          std::getline(cells, cell, ',');
          summary.mean_accuracy = std::stod(cell);
          std::getline(cells, cell, ',');
          summary.std_accuracy = std::stod(cell);
          std::getline(cells, cell, ',');
          summary.mean_f1 = std::stod(cell);
          std::getline(cells, cell, ',');
          summary.std_f1 = std::stod(cell);
          auto& mr = pr.by_featurizer[featurizer];
          mr.by_classifier[classifier] = summary;
          if (std::find(report.featurizers.begin(), report.featurizers.end(), featurizer) ==
              report.featurizers.end())
            report.featurizers.push_back(featurizer);
        }
        for (auto& [featurizer, mr] : pr.by_featurizer) {
          bool first = true;
          for (const auto& [classifier, summary] : mr.by_classifier) {
            if (first || summary.mean_accuracy > mr.best.mean_accuracy) {
              mr.best = summary;
              mr.best_classifier = classifier;
            }
            if (first || summary.mean_f1 > mr.best_f1.mean_f1) {
              mr.best_f1 = summary;
              mr.best_classifier_f1 = classifier;
            }
            first = false;
          }
        }
        report.pairs.push_back(std::move(pr));
      }
      ck::write_report_files(report, report_dir, config_hash);
      std::cout << "summary rebuilt for " << report.pairs.size() << " pairs\n";
      return 0;
    }
  } catch (const ck::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
