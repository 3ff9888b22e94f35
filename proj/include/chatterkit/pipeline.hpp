#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "chatterkit/dtw.hpp"
#include "chatterkit/featurize.hpp"
#include "chatterkit/transfer.hpp"

namespace chatterkit {

struct RunConfig {
  std::vector<std::filesystem::path> manifests;  // one per tag, order fixes pair order
  std::vector<std::string> featurizers = {"fpa", "wpt", "eemd", "tda-cc", "dtw"};
  std::vector<std::string> classifiers = {"lr", "svm", "rf", "gb"};
  SplitPlan plan;
  bool include_traditional = false;

  // preprocessing (applied when fs_target < fs_raw); 0 = 0.45 * target Nyquist
  double cutoff_hz = 0.0;
  int filter_order = 10;

  WptDriverConfig wpt;
  EemdDriverConfig eemd;
  FpaConfig fpa;
  TdaDriverConfig tda;

  DtwConfig dtw;
  int dtw_segment = 0;  // use only the last N samples for distances, 0 = all

  std::filesystem::path out_dir = "report";
};

RunConfig load_run_config(const std::filesystem::path& path);

// Manifest -> binarized, preprocessed records at the manifest's target rate.
std::vector<TimeSeriesRecord> load_prepared_records(const std::filesystem::path& manifest_path,
                                                    double cutoff_hz, int filter_order);

// Runs the whole protocol and writes per-pair CSVs, per-featurizer heatmaps,
// the BM/MIEB tables and a provenance file into out_dir. Returns the report.
TransferReport run_pipeline(const RunConfig& config);

// BM/MIEB and heatmap emission, reusable by the report subcommand.
void write_report_files(const TransferReport& report, const std::filesystem::path& out_dir,
                        const std::string& config_hash);

std::string hash_file(const std::filesystem::path& path);  // fnv-1a of the bytes
std::string hash_bytes(const std::string& bytes);

}  // namespace chatterkit
