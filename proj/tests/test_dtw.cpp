#include <doctest.h>

#include <chrono>
#include <functional>

#include "chatterkit/dtw.hpp"
#include "chatterkit/error.hpp"
#include "chatterkit/rng.hpp"
#include "dtw_oracle.hpp"

using namespace chatterkit;

namespace {

DtwConfig raw_config(double window = 1.0, double slope = 1.0) {
  DtwConfig cfg;
  cfg.window_fraction = window;
  cfg.slope_p = slope;
  cfg.znormalize = false;
  return cfg;
}

TimeSeriesRecord record(const std::string& id, const Eigen::VectorXd& samples, int label = 0) {
  TimeSeriesRecord rec;
  rec.id = id;
  rec.samples = samples;
  rec.fs = 1.0;
  rec.label = label == 1 ? StabilityLabel::Unstable : StabilityLabel::Stable;
  rec.dataset_tag = "t";
  return rec;
}

}  // namespace

TEST_CASE("identity path gives zero distance") {
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd x(10 + trial);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    CHECK(dtw_distance(x, x, raw_config()) == 0.0);
    DtwConfig norm = raw_config();
    norm.znormalize = true;
    CHECK(dtw_distance(x, x, norm) == 0.0);
  }
}

TEST_CASE("single admissible path for [0] vs [1 1]") {
  Eigen::VectorXd x(1), y(2);
  x << 0.0;
  y << 1.0, 1.0;
  CHECK(dtw_distance(x, y, raw_config()) == doctest::Approx(2.0));
}

TEST_CASE("three-point example matches enumeration") {
  Eigen::VectorXd x(3), y(2);
  x << 0.0, 0.0, 1.0;
  y << 0.0, 1.0;
  const ck_test::OracleConfig oracle_cfg{1.0, 1.0};
  const double expected = ck_test::dtw_enumerate(x, y, oracle_cfg);
  CHECK(dtw_distance(x, y, raw_config()) == doctest::Approx(expected));
  CHECK(expected == doctest::Approx(0.0));  // path (1,1),(2,1),(3,2)
}

TEST_CASE("oracle equivalence on 200 random short pairs under ten seconds") {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(8));
    const int n = 1 + static_cast<int>(rng.below(8));
    Eigen::VectorXd x(m), y(n);
    for (int i = 0; i < m; ++i) x[i] = std::round(rng.uniform(-3.0, 3.0) * 4.0) / 4.0;
    for (int i = 0; i < n; ++i) y[i] = std::round(rng.uniform(-3.0, 3.0) * 4.0) / 4.0;

    // mix of window widths and slope settings
    const double window = trial % 3 == 0 ? 1.0 : (trial % 3 == 1 ? 0.5 : 0.34);
    const double slope = trial % 2 == 0 ? 1.0 : 0.0;
    const ck_test::OracleConfig oracle_cfg{window, slope};
    const double expected = ck_test::dtw_enumerate(x, y, oracle_cfg);

    if (!std::isfinite(expected)) {
      CHECK_THROWS_AS(dtw_distance(x, y, raw_config(window, slope)), Error);
      continue;
    }
    const double got = dtw_distance(x, y, raw_config(window, slope));
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    ++checked;
  }
  CHECK(checked > 100);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(std::chrono::duration_cast<std::chrono::seconds>(elapsed).count() < 10);
}

TEST_CASE("shift invariance of the manhattan ground cost") {
  Rng rng(8);
  Eigen::VectorXd x(12), y(14);
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = rng.normal();
  const double base = dtw_distance(x, y, raw_config(0.5));
  const double shifted = dtw_distance((x.array() + 5.0).matrix(),
                                      (y.array() + 5.0).matrix(), raw_config(0.5));
  CHECK(shifted == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("infeasible window raises") {
  Eigen::VectorXd x(2), y(10);
  x << 0.0, 1.0;
  y = Eigen::VectorXd::Zero(10);
  try {
    dtw_distance(x, y, raw_config(0.1));
    FAIL("expected InfeasibleWindow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::infeasible_window);
  }
}

TEST_CASE("pairwise matrix is symmetric with zero diagonal and matches recomputation") {
  Rng rng(77);
  std::vector<TimeSeriesRecord> records;
  for (int r = 0; r < 10; ++r) {
    Eigen::VectorXd x(20);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    records.push_back(record("r" + std::to_string(r), x));
  }
  const DtwConfig cfg = raw_config(0.3);
  const DistanceMatrix dm = pairwise_matrix(records, cfg);
  CHECK(dm.values.rows() == 10);
  CHECK((dm.values - dm.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(dm.values.diagonal().cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j)
      CHECK(dm.values(i, j) ==
            doctest::Approx(dtw_distance(records[i].samples, records[j].samples, cfg)));

  // identical records
  std::vector<TimeSeriesRecord> same = {records[0], records[0], records[0]};
  CHECK(pairwise_matrix(same, cfg).values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parallel matrix equals serial matrix bit for bit") {
  Rng rng(31);
  std::vector<TimeSeriesRecord> records;
  for (int r = 0; r < 8; ++r) {
    Eigen::VectorXd x(30);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    records.push_back(record("r" + std::to_string(r), x));
  }
  setenv("CHATTERKIT_THREADS", "1", 1);
  const DistanceMatrix serial = pairwise_matrix(records, raw_config(0.5));
  setenv("CHATTERKIT_THREADS", "4", 1);
  const DistanceMatrix parallel = pairwise_matrix(records, raw_config(0.5));
  unsetenv("CHATTERKIT_THREADS");
  CHECK((serial.values - parallel.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cross matrix shape, spot checks, and self-consistency") {
  Rng rng(13);
  std::vector<TimeSeriesRecord> source, target;
  for (int r = 0; r < 5; ++r) {
    Eigen::VectorXd x(25);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    source.push_back(record("s" + std::to_string(r), x));
  }
  for (int r = 0; r < 4; ++r) {
    Eigen::VectorXd x(25);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    target.push_back(record("t" + std::to_string(r), x));
  }
  const DtwConfig cfg = raw_config(0.4);
  const DistanceMatrix dm = cross_matrix(source, target, cfg);
  CHECK(dm.values.rows() == 4);   // targets
  CHECK(dm.values.cols() == 5);   // sources
  Rng spot(5);
  for (int probe = 0; probe < 5; ++probe) {
    const int i = static_cast<int>(spot.below(4));
    const int j = static_cast<int>(spot.below(5));
    CHECK(dm.values(i, j) ==
          doctest::Approx(dtw_distance(target[i].samples, source[j].samples, cfg)));
  }

  // target == source reproduces the pairwise matrix
  const DistanceMatrix self = cross_matrix(source, source, cfg);
  const DistanceMatrix pair = pairwise_matrix(source, cfg);
  CHECK((self.values - pair.values).cwiseAbs().maxCoeff() < 1e-12);

  // 1x1 identical series
  const DistanceMatrix one = cross_matrix({source[0]}, {source[0]}, cfg);
  CHECK(one.values(0, 0) == 0.0);
}

TEST_CASE("knn prediction rules") {
  DistanceMatrix dm;
  dm.row_ids = {"q"};
  dm.col_ids = {"a", "b", "c"};
  dm.values.resize(1, 3);
  Eigen::VectorXi labels(3);

  // k=1: identical training record wins
  dm.values << 0.0, 5.0, 9.0;
  labels << 1, 0, 0;
  CHECK(knn_predict(dm, labels, 1)[0] == 1);

  // k=3 majority {stable, stable, unstable} -> stable
  labels << 0, 0, 1;
  CHECK(knn_predict(dm, labels, 3)[0] == 0);

  // k=2 tie {stable, unstable} -> unstable
  dm.values << 1.0, 2.0, 9.0;
  labels << 0, 1, 0;
  CHECK(knn_predict(dm, labels, 2)[0] == 1);

  try {
    knn_predict(dm, labels, 4);
    FAIL("expected KTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::k_too_large);
  }
}

TEST_CASE("distance matrix csv round trip") {
  DistanceMatrix dm;
  dm.row_ids = {"r0", "r1"};
  dm.col_ids = {"c0", "c1", "c2"};
  dm.values.resize(2, 3);
  dm.values << 0.5, 1.25, 2.0, 3.5, 0.125, 9.75;
  const auto path = std::filesystem::temp_directory_path() / "ck_dtw_matrix.csv";
  save_distance_matrix(dm, path, "test");
  const DistanceMatrix back = load_distance_matrix(path);
  std::filesystem::remove(path);
  CHECK(back.row_ids == dm.row_ids);
  CHECK(back.col_ids == dm.col_ids);
  CHECK((back.values - dm.values).cwiseAbs().maxCoeff() == 0.0);
}
