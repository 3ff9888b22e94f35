#include <doctest.h>

#include "chatterkit/error.hpp"
#include "chatterkit/rng.hpp"
#include "chatterkit/transfer.hpp"

using namespace chatterkit;

namespace {

std::vector<std::string> tags(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("tag" + std::to_string(i));
  return out;
}

// separable features keyed by label, slightly offset per tag
FeatureMatrix toy_features(const std::string& tag, int count, double offset,
                           std::uint64_t seed) {
  FeatureMatrix fm;
  fm.feature_names = {"f0", "f1"};
  fm.values.resize(count, 2);
  fm.labels.resize(count);
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const int label = i % 2;
    fm.record_ids.push_back(tag + "_r" + std::to_string(i));
    fm.labels[i] = label;
    fm.values(i, 0) = (label == 1 ? 2.0 : -2.0) + offset + 0.2 * rng.normal();
    fm.values(i, 1) = 0.3 * rng.normal();
  }
  return fm;
}

FeatureBank toy_bank(const std::vector<std::string>& tag_list, int count = 30) {
  FeatureBank bank;
  std::uint64_t seed = 1;
  for (const auto& tag : tag_list) {
    FeatureMatrix fm = toy_features(tag, count, 0.1 * static_cast<double>(seed), seed);
    bank.tag_ids[tag] = fm.record_ids;
    bank.tag_labels[tag] = fm.labels;
    bank.features["fpa"][tag] = fm;
    ++seed;
  }
  // dtw distances consistent with the labels: same-label pairs are close
  for (const auto& src : tag_list) {
    for (const auto& tgt : tag_list) {
      DistanceMatrix dm;
      dm.col_ids = bank.tag_ids[src];
      dm.row_ids = bank.tag_ids[tgt];
      dm.values.resize(count, count);
      Rng rng(99);
      for (int r = 0; r < count; ++r)
        for (int c = 0; c < count; ++c) {
          const bool same = bank.tag_labels[tgt][r] == bank.tag_labels[src][c];
          dm.values(r, c) = (same ? 1.0 : 10.0) + 0.1 * rng.uniform();
        }
      bank.dtw_cross[src + "|" + tgt] = std::move(dm);
    }
  }
  return bank;
}

EvalSummary fake_summary(double mean, double sd) {
  EvalSummary s;
  s.mean_accuracy = mean;
  s.std_accuracy = sd;
  s.mean_f1 = mean;
  s.std_f1 = sd;
  return s;
}

}  // namespace

TEST_CASE("pair enumeration counts") {
  CHECK(enumerate_pairs(tags(5)).size() == 20);
  CHECK(enumerate_pairs(tags(2)).size() == 2);
  CHECK(enumerate_pairs(tags(4)).size() == 12);
  CHECK(enumerate_pairs(tags(5), true).size() == 25);
  for (const auto& pair : enumerate_pairs(tags(3)))
    CHECK(pair.source_tag != pair.target_tag);
  try {
    enumerate_pairs(tags(1));
    FAIL("expected TooFewTags");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::too_few_tags);
  }
}

TEST_CASE("one pair, one featurizer, one classifier") {
  const auto bank = toy_bank(tags(2));
  const auto pairs = enumerate_pairs(tags(2));
  SplitPlan plan;
  const TransferReport report = run_transfer({pairs[0]}, {"fpa"}, {"lr"}, plan, bank);
  REQUIRE(report.pairs.size() == 1);
  const MethodResult& result = report.pairs[0].by_featurizer.at("fpa");
  CHECK(result.by_classifier.size() == 1);
  CHECK(result.best_classifier == "lr");
  CHECK(result.best.mean_accuracy > 0.9);
  CHECK(result.best.raw.size() == plan.seeds.size());
}

TEST_CASE("identical index draws across featurizers and dtw") {
  const auto bank = toy_bank(tags(3));
  const auto pairs = enumerate_pairs(tags(3));
  SplitPlan plan;
  const TransferReport report = run_transfer(pairs, {"fpa", "dtw"}, {"lr"}, plan, bank);
  for (const auto& pr : report.pairs) {
    const auto& fpa = pr.by_featurizer.at("fpa");
    const auto& dtw = pr.by_featurizer.at("dtw");
    CHECK(fpa.split_hash == dtw.split_hash);
    CHECK(fpa.split_hash != 0);
    // dtw is evaluated with knn only
    for (const auto& [name, summary] : dtw.by_classifier) {
      CHECK(name.rfind("knn-", 0) == 0);
      CHECK(summary.mean_accuracy > 0.9);  // label-consistent distances
    }
  }
}

TEST_CASE("rerun gives an identical report") {
  const auto bank = toy_bank(tags(2));
  const auto pairs = enumerate_pairs(tags(2));
  SplitPlan plan;
  const TransferReport a = run_transfer(pairs, {"fpa", "dtw"}, {"lr", "rf"}, plan, bank);
  const TransferReport b = run_transfer(pairs, {"fpa", "dtw"}, {"lr", "rf"}, plan, bank);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t p = 0; p < a.pairs.size(); ++p) {
    for (const auto& [featurizer, result] : a.pairs[p].by_featurizer) {
      const auto& other = b.pairs[p].by_featurizer.at(featurizer);
      CHECK(result.best_classifier == other.best_classifier);
      for (const auto& [classifier, summary] : result.by_classifier) {
        CHECK(summary.mean_accuracy == other.by_classifier.at(classifier).mean_accuracy);
        CHECK(summary.mean_f1 == other.by_classifier.at(classifier).mean_f1);
      }
    }
  }
}

TEST_CASE("missing features are reported") {
  auto bank = toy_bank(tags(2));
  const auto pairs = enumerate_pairs(tags(2));
  SplitPlan plan;
  try {
    run_transfer(pairs, {"wpt"}, {"lr"}, plan, bank);
    FAIL("expected MissingFeatures");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_features);
  }
  try {
    run_transfer(pairs, {"tda-pi"}, {"lr"}, plan, bank);
    FAIL("expected MissingFeatures");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_features);
  }
}

TEST_CASE("band counting: the documented examples") {
  TransferReport report;
  report.featurizers = {"wpt", "tda-cc", "dtw"};
  const std::map<std::string, std::vector<std::string>> groups = {
      {"time-frequency", {"wpt"}}, {"tda", {"tda-cc"}}, {"dtw", {"dtw"}}};

  PairResult pr;
  pr.pair = {"a", "b", false};
  pr.by_featurizer["wpt"].best = fake_summary(0.90, 0.05);
  pr.by_featurizer["wpt"].best_f1 = fake_summary(0.90, 0.05);
  pr.by_featurizer["tda-cc"].best = fake_summary(0.87, 0.02);
  pr.by_featurizer["tda-cc"].best_f1 = fake_summary(0.87, 0.02);
  pr.by_featurizer["dtw"].best = fake_summary(0.84, 0.02);
  pr.by_featurizer["dtw"].best_f1 = fake_summary(0.84, 0.02);
  report.pairs.push_back(pr);

  const auto counts = count_best_and_error_band(report, groups);
  CHECK(counts.at("time-frequency").best_method == 1);
  CHECK(counts.at("time-frequency").in_error_band == 0);
  CHECK(counts.at("tda").best_method == 0);
  CHECK(counts.at("tda").in_error_band == 1);  // 0.87 >= 0.90 - 0.05
  CHECK(counts.at("dtw").best_method == 0);
  CHECK(counts.at("dtw").in_error_band == 0);  // 0.84 < 0.85
}

TEST_CASE("band counting: exact mean ties all count as best") {
  TransferReport report;
  report.featurizers = {"wpt", "dtw"};
  const std::map<std::string, std::vector<std::string>> groups = {{"time-frequency", {"wpt"}},
                                                                  {"dtw", {"dtw"}}};
  PairResult pr;
  pr.pair = {"a", "b", false};
  pr.by_featurizer["wpt"].best = fake_summary(0.9, 0.01);
  pr.by_featurizer["wpt"].best_f1 = fake_summary(0.9, 0.01);
  pr.by_featurizer["dtw"].best = fake_summary(0.9, 0.03);
  pr.by_featurizer["dtw"].best_f1 = fake_summary(0.9, 0.03);
  report.pairs.push_back(pr);
  report.pairs.push_back(pr);

  const auto counts = count_best_and_error_band(report, groups);
  CHECK(counts.at("time-frequency").best_method == 2);
  CHECK(counts.at("dtw").best_method == 2);
  // bm totals over pairs can exceed the pair count through ties
  CHECK(counts.at("time-frequency").best_method + counts.at("dtw").best_method >= 2);
}

TEST_CASE("incomplete report raises") {
  TransferReport report;
  report.featurizers = {"wpt"};
  PairResult pr;
  pr.pair = {"a", "b", false};
  report.pairs.push_back(pr);  // no featurizer results at all
  try {
    count_best_and_error_band(report, {{"time-frequency", {"wpt"}}});
    FAIL("expected IncompleteReport");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::incomplete_report);
  }
}
