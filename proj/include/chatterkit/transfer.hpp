#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chatterkit/dataset.hpp"
#include "chatterkit/dtw.hpp"
#include "chatterkit/learn.hpp"
#include "chatterkit/rips.hpp"

namespace chatterkit {

struct TransferPair {
  std::string source_tag;
  std::string target_tag;
  bool traditional = false;  // source == target
};

// All ordered distinct pairs in tag order; optionally the self pairs too.
std::vector<TransferPair> enumerate_pairs(const std::vector<std::string>& tags,
                                          bool include_traditional = false);

// Per-tag inputs for one run. Feature methods carry a FeatureMatrix per tag;
// DTW carries distance matrices; the gridded TDA methods (pi, pl, tf) carry
// per-tag diagrams and fit their grids on the source of each pair.
struct FeatureBank {
  // canonical record order per tag; split indices refer to these positions,
  // so every method's rows must line up with them
  std::map<std::string, std::vector<std::string>> tag_ids;
  std::map<std::string, Eigen::VectorXi> tag_labels;

  // featurizer name -> tag -> features (fpa, wpt, eemd, tda-cc)
  std::map<std::string, std::map<std::string, FeatureMatrix>> features;

  // diagrams per tag, aligned with the canonical order (tda-pi, tda-pl, tda-tf)
  std::map<std::string, std::vector<PersistenceDiagram>> diagrams;

  // dtw: cross distances (target rows x source cols) per ordered tag pair
  // "src|tgt"; self pairs use the same key with src == tgt
  std::map<std::string, DistanceMatrix> dtw_cross;
};

struct MethodResult {
  std::map<std::string, EvalSummary> by_classifier;
  std::string best_classifier;
  EvalSummary best;              // ranked by mean accuracy
  std::string best_classifier_f1;
  EvalSummary best_f1;           // ranked by mean F1
  std::uint64_t split_hash = 0;  // hash of the index draws used
};

struct PairResult {
  TransferPair pair;
  std::map<std::string, MethodResult> by_featurizer;
};

struct TransferReport {
  std::vector<std::string> featurizers;
  std::vector<std::string> classifiers;
  SplitPlan plan;
  std::vector<PairResult> pairs;
};

inline const std::map<std::string, std::vector<std::string>>& default_method_groups() {
  static const std::map<std::string, std::vector<std::string>> groups = {
      {"time-frequency", {"wpt", "eemd", "fpa"}},
      {"tda", {"tda-cc", "tda-pi", "tda-pl", "tda-tf"}},
      {"dtw", {"dtw"}},
  };
  return groups;
}

// Every (pair, featurizer, classifier) combination on identical seeded index
// draws; DTW is evaluated with KNN (k = 1..5) only.
TransferReport run_transfer(const std::vector<TransferPair>& pairs,
                            const std::vector<std::string>& featurizers,
                            const std::vector<std::string>& classifiers, const SplitPlan& plan,
                            const FeatureBank& bank);

struct BandCounts {
  int best_method = 0;       // BM
  int in_error_band = 0;     // MIEB
};

enum class RankMetric { Accuracy, F1 };

// Group scores take the best featurizer in the group; the winner's band is
// mean - std (one-sided), ties on the mean all count as best.
std::map<std::string, BandCounts> count_best_and_error_band(
    const TransferReport& report, const std::map<std::string, std::vector<std::string>>& groups,
    RankMetric metric = RankMetric::Accuracy);

}  // namespace chatterkit
