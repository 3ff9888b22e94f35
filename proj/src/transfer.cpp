#include "chatterkit/transfer.hpp"

#include <algorithm>

#include "chatterkit/diagram_features.hpp"
#include "chatterkit/error.hpp"

namespace chatterkit {

std::vector<TransferPair> enumerate_pairs(const std::vector<std::string>& tags,
                                          bool include_traditional) {
  if (tags.size() < 2) throw Error(Errc::too_few_tags, "enumerate_pairs needs >= 2 tags");
  std::vector<TransferPair> pairs;
  for (const auto& src : tags)
    for (const auto& tgt : tags) {
      if (src == tgt && !include_traditional) continue;
      pairs.push_back({src, tgt, src == tgt});
    }
  return pairs;
}

namespace {

std::uint64_t hash_indices(const std::vector<SplitRealization>& splits) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  const auto feed = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& split : splits) {
    feed(0x7e57);
    for (const int i : split.train_indices) feed(static_cast<std::uint64_t>(i));
    feed(0x7a26);
    for (const int i : split.test_indices) feed(static_cast<std::uint64_t>(i));
  }
  return h;
}

void check_tag_known(const FeatureBank& bank, const std::string& tag) {
  if (bank.tag_ids.find(tag) == bank.tag_ids.end() ||
      bank.tag_labels.find(tag) == bank.tag_labels.end())
    throw Error(Errc::missing_features, "bank has no records for tag " + tag);
}

const FeatureMatrix& bank_features(const FeatureBank& bank, const std::string& featurizer,
                                   const std::string& tag) {
  const auto fit = bank.features.find(featurizer);
  if (fit == bank.features.end())
    throw Error(Errc::missing_features, "no features for method " + featurizer);
  const auto tit = fit->second.find(tag);
  if (tit == fit->second.end())
    throw Error(Errc::missing_features, featurizer + " features missing for tag " + tag);
  check_tag_known(bank, tag);
  if (tit->second.record_ids != bank.tag_ids.at(tag))
    throw Error(Errc::feature_mismatch,
                featurizer + " rows for tag " + tag + " do not follow the canonical record order");
  return tit->second;
}

const std::vector<PersistenceDiagram>& bank_diagrams(const FeatureBank& bank,
                                                     const std::string& tag) {
  const auto dit = bank.diagrams.find(tag);
  if (dit == bank.diagrams.end())
    throw Error(Errc::missing_features, "diagrams missing for tag " + tag);
  check_tag_known(bank, tag);
  if (dit->second.size() != bank.tag_ids.at(tag).size())
    throw Error(Errc::feature_mismatch, "diagram count mismatch for tag " + tag);
  return dit->second;
}

// gridded TDA featurizers fit their vectorization on the source diagrams and
// apply it unchanged to the target
void gridded_tda_features(const std::string& method, const FeatureBank& bank,
                          const TransferPair& pair, FeatureMatrix& source, FeatureMatrix& target) {
  const std::vector<PersistenceDiagram>& src = bank_diagrams(bank, pair.source_tag);
  const std::vector<PersistenceDiagram>& tgt = bank_diagrams(bank, pair.target_tag);

  Eigen::MatrixXd src_values, tgt_values;
  std::vector<std::string> names;
  if (method == "tda-pi") {
    const ImageGrid grid = fit_image_grid(src, 0.1);
    const double cap = max_lifetime(src);
    const Eigen::Index width = static_cast<Eigen::Index>(grid.birth_bins()) * grid.life_bins();
    src_values.resize(static_cast<Eigen::Index>(src.size()), width);
    for (std::size_t i = 0; i < src.size(); ++i)
      src_values.row(static_cast<Eigen::Index>(i)) =
          persistence_image(src[i], 0.1, grid, cap).transpose();
    tgt_values.resize(static_cast<Eigen::Index>(tgt.size()), width);
    for (std::size_t i = 0; i < tgt.size(); ++i)
      tgt_values.row(static_cast<Eigen::Index>(i)) =
          persistence_image(tgt[i], 0.1, grid, cap).transpose();
    for (Eigen::Index i = 0; i < width; ++i) names.push_back("pi_" + std::to_string(i));
  } else if (method == "tda-pl") {
    const std::vector<double> mesh = landscape_mesh(src, 1);
    src_values = landscape_features(src, 1, mesh);
    tgt_values = landscape_features(tgt, 1, mesh);
    for (std::size_t i = 0; i < mesh.size(); ++i) names.push_back("pl_" + std::to_string(i));
  } else if (method == "tda-tf") {
    Eigen::VectorXd mesh_birth, mesh_life;
    fit_template_meshes(src, 5, mesh_birth, mesh_life);
    src_values = template_function_features(src, mesh_birth, mesh_life);
    tgt_values = template_function_features(tgt, mesh_birth, mesh_life);
    for (Eigen::Index i = 0; i < src_values.cols(); ++i)
      names.push_back("tf_" + std::to_string(i));
  } else {
    throw Error(Errc::invalid_argument, "unknown tda method " + method);
  }

  source.record_ids = bank.tag_ids.at(pair.source_tag);
  source.feature_names = names;
  source.values = std::move(src_values);
  source.labels = bank.tag_labels.at(pair.source_tag);
  target.record_ids = bank.tag_ids.at(pair.target_tag);
  target.feature_names = names;
  target.values = std::move(tgt_values);
  target.labels = bank.tag_labels.at(pair.target_tag);
}

MethodResult evaluate_feature_method(const std::string& featurizer,
                                     const std::vector<std::string>& classifiers,
                                     const FeatureMatrix& source, const FeatureMatrix& target,
                                     const SplitPlan& plan) {
  MethodResult result;
  result.split_hash =
      hash_indices(make_splits(source.record_ids.size(), target.record_ids.size(), plan));
  for (const auto& classifier : classifiers) {
    const ClassifierSpec spec = ClassifierSpec::from_name(classifier);
    result.by_classifier[classifier] = evaluate_realizations(spec, source, target, plan);
  }
  if (result.by_classifier.empty())
    throw Error(Errc::invalid_argument, featurizer + ": no classifiers configured");

  bool first = true;
  for (const auto& [name, summary] : result.by_classifier) {
    if (first || summary.mean_accuracy > result.best.mean_accuracy) {
      result.best = summary;
      result.best_classifier = name;
    }
    if (first || summary.mean_f1 > result.best_f1.mean_f1) {
      result.best_f1 = summary;
      result.best_classifier_f1 = name;
    }
    first = false;
  }
  return result;
}

MethodResult evaluate_dtw(const FeatureBank& bank, const TransferPair& pair,
                          const SplitPlan& plan) {
  const std::string cross_key = pair.source_tag + "|" + pair.target_tag;
  const auto cross_it = bank.dtw_cross.find(cross_key);
  if (cross_it == bank.dtw_cross.end())
    throw Error(Errc::missing_features, "dtw cross distances missing for " + cross_key);
  const DistanceMatrix& cross = cross_it->second;

  check_tag_known(bank, pair.source_tag);
  check_tag_known(bank, pair.target_tag);
  const Eigen::VectorXi& source_labels = bank.tag_labels.at(pair.source_tag);
  const Eigen::VectorXi& target_labels = bank.tag_labels.at(pair.target_tag);
  if (cross.values.rows() != target_labels.size() || cross.values.cols() != source_labels.size())
    throw Error(Errc::dimension_mismatch, "dtw cross matrix shape mismatch for " + cross_key);

  const auto splits = make_splits(static_cast<std::size_t>(source_labels.size()),
                                  static_cast<std::size_t>(target_labels.size()), plan);
  MethodResult result;
  result.split_hash = hash_indices(splits);

  for (int k = 1; k <= 5; ++k) {
    std::vector<EvalScores> raw;
    raw.reserve(splits.size());
    for (const auto& split : splits) {
      if (k > static_cast<int>(split.train_indices.size())) continue;
      DistanceMatrix sub;
      sub.values.resize(static_cast<Eigen::Index>(split.test_indices.size()),
                        static_cast<Eigen::Index>(split.train_indices.size()));
      for (std::size_t r = 0; r < split.test_indices.size(); ++r)
        for (std::size_t c = 0; c < split.train_indices.size(); ++c)
          sub.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              cross.values(split.test_indices[r], split.train_indices[c]);
      Eigen::VectorXi train_labels(static_cast<Eigen::Index>(split.train_indices.size()));
      for (std::size_t c = 0; c < split.train_indices.size(); ++c)
        train_labels[static_cast<Eigen::Index>(c)] = source_labels[split.train_indices[c]];
      Eigen::VectorXi truth(static_cast<Eigen::Index>(split.test_indices.size()));
      for (std::size_t r = 0; r < split.test_indices.size(); ++r)
        truth[static_cast<Eigen::Index>(r)] = target_labels[split.test_indices[r]];
      raw.push_back(evaluate(knn_predict(sub, train_labels, k), truth));
    }
    result.by_classifier["knn-" + std::to_string(k)] = summarize(raw);
  }

  bool first = true;
  for (const auto& [name, summary] : result.by_classifier) {
    if (first || summary.mean_accuracy > result.best.mean_accuracy) {
      result.best = summary;
      result.best_classifier = name;
    }
    if (first || summary.mean_f1 > result.best_f1.mean_f1) {
      result.best_f1 = summary;
      result.best_classifier_f1 = name;
    }
    first = false;
  }
  return result;
}

}  // namespace

TransferReport run_transfer(const std::vector<TransferPair>& pairs,
                            const std::vector<std::string>& featurizers,
                            const std::vector<std::string>& classifiers, const SplitPlan& plan,
                            const FeatureBank& bank) {
  TransferReport report;
  report.featurizers = featurizers;
  report.classifiers = classifiers;
  report.plan = plan;

  for (const auto& pair : pairs) {
    PairResult pr;
    pr.pair = pair;
    for (const auto& featurizer : featurizers) {
      if (featurizer == "dtw") {
        pr.by_featurizer[featurizer] = evaluate_dtw(bank, pair, plan);
      } else if (featurizer == "tda-pi" || featurizer == "tda-pl" || featurizer == "tda-tf") {
        FeatureMatrix source, target;
        gridded_tda_features(featurizer, bank, pair, source, target);
        pr.by_featurizer[featurizer] =
            evaluate_feature_method(featurizer, classifiers, source, target, plan);
      } else {
        const FeatureMatrix& source = bank_features(bank, featurizer, pair.source_tag);
        const FeatureMatrix& target = bank_features(bank, featurizer, pair.target_tag);
        if (source.feature_names != target.feature_names)
          throw Error(Errc::feature_mismatch, featurizer + ": feature names differ across tags");
        pr.by_featurizer[featurizer] =
            evaluate_feature_method(featurizer, classifiers, source, target, plan);
      }
    }
    report.pairs.push_back(std::move(pr));
  }
  return report;
}

std::map<std::string, BandCounts> count_best_and_error_band(
    const TransferReport& report, const std::map<std::string, std::vector<std::string>>& groups,
    RankMetric metric) {
  std::map<std::string, BandCounts> counts;
  for (const auto& [group, members] : groups) counts[group];

  for (const auto& pr : report.pairs) {
    // best score per group over its configured members
    std::map<std::string, std::pair<double, double>> group_scores;  // mean, std
    for (const auto& [group, members] : groups) {
      bool found = false;
      double best_mean = 0.0, best_std = 0.0;
      for (const auto& member : members) {
        const auto it = pr.by_featurizer.find(member);
        if (it == pr.by_featurizer.end()) continue;
        const EvalSummary& s = metric == RankMetric::Accuracy ? it->second.best : it->second.best_f1;
        const double mean = metric == RankMetric::Accuracy ? s.mean_accuracy : s.mean_f1;
        const double sd = metric == RankMetric::Accuracy ? s.std_accuracy : s.std_f1;
        if (!found || mean > best_mean) {
          best_mean = mean;
          best_std = sd;
          found = true;
        }
      }
      if (found) group_scores[group] = {best_mean, best_std};
    }
    if (group_scores.empty())
      throw Error(Errc::incomplete_report, "no configured group present for a pair");

    double winner_mean = -1.0, winner_std = 0.0;
    for (const auto& [group, score] : group_scores) {
      if (score.first > winner_mean) {
        winner_mean = score.first;
        winner_std = score.second;
      }
    }
    for (const auto& [group, score] : group_scores) {
      if (score.first == winner_mean)
        ++counts[group].best_method;
      else if (score.first >= winner_mean - winner_std)
        ++counts[group].in_error_band;
    }
  }
  return counts;
}

}  // namespace chatterkit
