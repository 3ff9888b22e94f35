#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <unistd.h>

#include "chatterkit/dataset.hpp"
#include "chatterkit/error.hpp"

using namespace chatterkit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ck_dataset_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

}  // namespace

TEST_CASE("manifest round trip with three records") {
  TempDir dir;
  for (int i = 0; i < 3; ++i)
    write_text(dir.path / ("s" + std::to_string(i) + ".txt"), "0.0\n1.0\n-1.0\n0.5\n");
  write_text(dir.path / "data.manifest",
             "name demo\nfs_raw 1000\nfs_target 1000\nformat value\n"
             "record s0.txt 570 0.5 stable demo\n"
             "record s1.txt 570 0.6 mild demo\n"
             "record s2.txt 770 0.7 unstable demo\n");

  const DatasetManifest manifest = load_manifest(dir.path / "data.manifest");
  CHECK(manifest.records.size() == 3);
  CHECK(manifest.name == "demo");
  CHECK(manifest.fs_raw == 1000.0);

  const auto records = load_records(manifest);
  REQUIRE(records.size() == 3);
  CHECK(records[0].samples.size() == 4);
  CHECK(records[1].label == StabilityLabel::MildChatter);
  CHECK(records[2].rpm == 770.0);
}

TEST_CASE("manifest referencing an absent file fails") {
  TempDir dir;
  write_text(dir.path / "data.manifest",
             "name demo\nfs_raw 1000\nrecord missing.txt 570 0.5 stable demo\n");
  try {
    load_manifest(dir.path / "data.manifest");
    FAIL("expected MissingFile");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_file);
  }
}

TEST_CASE("manifest with no records fails to parse") {
  TempDir dir;
  write_text(dir.path / "data.manifest", "name demo\nfs_raw 1000\n");
  try {
    load_manifest(dir.path / "data.manifest");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
  }
}

TEST_CASE("two-column series files") {
  TempDir dir;
  write_text(dir.path / "s.txt", "0.0 1.5\n0.001 2.5\n0.002 -1.0\n");
  const Eigen::VectorXd x = load_series(dir.path / "s.txt", SeriesFormat::TimeValue);
  REQUIRE(x.size() == 3);
  CHECK(x[0] == 1.5);
  CHECK(x[2] == -1.0);
}

TEST_CASE("binarize_labels merges mild into unstable and drops unknown") {
  const auto mk = [](StabilityLabel label) {
    TimeSeriesRecord rec;
    rec.samples = Eigen::VectorXd::Zero(2);
    rec.label = label;
    rec.dataset_tag = "t";
    return rec;
  };
  const auto merged = binarize_labels(
      {mk(StabilityLabel::Stable), mk(StabilityLabel::MildChatter), mk(StabilityLabel::Unstable)});
  REQUIRE(merged.size() == 3);
  CHECK(merged[0].label == StabilityLabel::Stable);
  CHECK(merged[1].label == StabilityLabel::Unstable);
  CHECK(merged[2].label == StabilityLabel::Unstable);

  CHECK(binarize_labels({mk(StabilityLabel::Unknown)}).empty());
  CHECK(binarize_labels({}).empty());
}

TEST_CASE("make_splits sizes, determinism, bounds") {
  SplitPlan plan;
  const auto splits = make_splits(100, 50, plan);
  REQUIRE(splits.size() == 10);
  for (const auto& split : splits) {
    CHECK(split.train_indices.size() == 67);
    CHECK(split.test_indices.size() == 35);
    std::set<int> train(split.train_indices.begin(), split.train_indices.end());
    CHECK(train.size() == split.train_indices.size());  // duplicate-free
    CHECK(*train.begin() >= 0);
    CHECK(*train.rbegin() < 100);
    std::set<int> test(split.test_indices.begin(), split.test_indices.end());
    CHECK(test.size() == split.test_indices.size());
    CHECK(*test.rbegin() < 50);
  }

  const auto again = make_splits(100, 50, plan);
  for (std::size_t i = 0; i < splits.size(); ++i) {
    CHECK(splits[i].train_indices == again[i].train_indices);
    CHECK(splits[i].test_indices == again[i].test_indices);
  }

  // different seeds give different draws
  CHECK(splits[0].train_indices != splits[1].train_indices);
}

TEST_CASE("make_splits floor-with-minimum rule") {
  SplitPlan plan;
  const auto splits = make_splits(1, 1, plan);
  for (const auto& split : splits) {
    CHECK(split.train_indices == std::vector<int>{0});
    CHECK(split.test_indices == std::vector<int>{0});
  }
  CHECK_THROWS_AS(make_splits(0, 5, plan), Error);
}

TEST_CASE("feature matrix csv round trip") {
  TempDir dir;
  FeatureMatrix fm;
  fm.record_ids = {"a", "b"};
  fm.feature_names = {"f1", "f2", "f3"};
  fm.values.resize(2, 3);
  fm.values << 1.0, -2.5, 3.125e-7, 0.0, 12345.678901234567, -1.0;
  fm.labels.resize(2);
  fm.labels << 0, 1;

  save_feature_matrix(fm, dir.path / "f.csv", "test");
  const FeatureMatrix back = load_feature_matrix(dir.path / "f.csv");
  CHECK(back.record_ids == fm.record_ids);
  CHECK(back.feature_names == fm.feature_names);
  CHECK(back.labels == fm.labels);
  CHECK((back.values - fm.values).cwiseAbs().maxCoeff() == 0.0);  // exact round trip
}

TEST_CASE("feature matrix rejects NaN") {
  FeatureMatrix fm;
  fm.record_ids = {"a"};
  fm.feature_names = {"f"};
  fm.values.resize(1, 1);
  fm.values(0, 0) = std::nan("");
  fm.labels.resize(1);
  fm.labels << 0;
  CHECK_THROWS_AS(fm.validate(), Error);
}
