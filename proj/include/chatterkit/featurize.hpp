#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chatterkit/dataset.hpp"
#include "chatterkit/emd.hpp"
#include "chatterkit/fpa.hpp"
#include "chatterkit/rips.hpp"
#include "chatterkit/wpt.hpp"

namespace chatterkit {

// Per-record drivers; each runs in parallel across records and keeps rows in
// record order.

FeatureMatrix fpa_features(const std::vector<TimeSeriesRecord>& records, const FpaConfig& cfg = {});

struct WptDriverConfig {
  int level = 4;
  std::string wavelet = "db4";
  // "auto" picks the packet from unstable-record energy ratios, "table" uses
  // the tabulated defaults, an integer forces that packet
  std::string packet = "auto";
};

FeatureMatrix wpt_features(const std::vector<TimeSeriesRecord>& records,
                           const WptDriverConfig& cfg = {});

struct EemdDriverConfig {
  int ensemble_size = 100;
  double noise_std_fraction = 0.2;
  std::uint64_t seed = 0;
  int selection_sample = 5;  // records inspected to fix the informative IMF
};

FeatureMatrix eemd_features(const std::vector<TimeSeriesRecord>& records,
                            const EemdDriverConfig& cfg = {});

struct TdaDriverConfig {
  int max_points = 400;
  double fnn_threshold = 0.02;
  int max_dimension = 10;
  std::uint64_t subsample_seed = 0;
};

std::vector<PersistenceDiagram> record_diagrams(const std::vector<TimeSeriesRecord>& records,
                                                const TdaDriverConfig& cfg = {});

FeatureMatrix carlsson_features(const std::vector<TimeSeriesRecord>& records,
                                const std::vector<PersistenceDiagram>& diagrams);

Eigen::VectorXi record_labels(const std::vector<TimeSeriesRecord>& records);
std::vector<std::string> record_ids(const std::vector<TimeSeriesRecord>& records);

}  // namespace chatterkit
