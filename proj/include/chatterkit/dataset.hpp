#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "chatterkit/error.hpp"

namespace chatterkit {

enum class StabilityLabel : std::uint8_t { Stable, MildChatter, Unstable, Unknown };

StabilityLabel label_from_string(const std::string& s);
const char* label_to_string(StabilityLabel label);

struct TimeSeriesRecord {
  std::string id;
  Eigen::VectorXd samples;
  double fs = 0.0;  // Hz
  double rpm = 0.0;
  double depth_of_cut_mm = 0.0;
  StabilityLabel label = StabilityLabel::Unknown;
  std::string dataset_tag;
};

enum class SeriesFormat : std::uint8_t { Value, TimeValue };

struct ManifestEntry {
  std::filesystem::path path;  // resolved against the manifest directory
  double rpm = 0.0;
  double depth_of_cut_mm = 0.0;
  StabilityLabel label = StabilityLabel::Unknown;
  std::string dataset_tag;
};

struct DatasetManifest {
  std::string name;
  double fs_raw = 0.0;
  double fs_target = 0.0;
  SeriesFormat format = SeriesFormat::Value;
  std::vector<ManifestEntry> records;
};

// Plain-text manifest: "key value" header lines (name, fs_raw, fs_target,
// format) followed by one "record <path> <rpm> <depth_mm> <label> <tag>"
// line per series. '#' starts a comment. Every listed file must exist.
DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

// Single-column (value) or two-column (time value) decimal text.
Eigen::VectorXd load_series(const std::filesystem::path& path, SeriesFormat format);
void save_series(const Eigen::VectorXd& samples, const std::filesystem::path& path);

// Loads every series named by the manifest; record ids are file stems.
std::vector<TimeSeriesRecord> load_records(const DatasetManifest& manifest);

// MildChatter -> Unstable, Unknown dropped.
std::vector<TimeSeriesRecord> binarize_labels(const std::vector<TimeSeriesRecord>& records);

struct SplitPlan {
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  double train_fraction = 0.67;
  double test_fraction = 0.70;
};

struct SplitRealization {
  std::vector<int> train_indices;  // into the source list, sorted
  std::vector<int> test_indices;   // into the target list, sorted
};

// One realization per seed: floor(fraction * n) of each side (at least 1),
// sampled without replacement. Identical inputs and seed give identical sets.
std::vector<SplitRealization> make_splits(std::size_t source_count, std::size_t target_count,
                                          const SplitPlan& plan);

struct FeatureMatrix {
  std::vector<std::string> record_ids;
  std::vector<std::string> feature_names;
  Eigen::MatrixXd values;  // record_ids.size() x feature_names.size()
  Eigen::VectorXi labels;  // 0 = stable, 1 = unstable

  void validate() const;  // shape agreement, no NaN/inf
};

void save_feature_matrix(const FeatureMatrix& fm, const std::filesystem::path& path,
                         const std::string& header_comment = {});
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);

}  // namespace chatterkit
