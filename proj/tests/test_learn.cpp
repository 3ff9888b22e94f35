#include <doctest.h>

#include <cmath>

#include "chatterkit/error.hpp"
#include "chatterkit/learn.hpp"
#include "chatterkit/rng.hpp"

using namespace chatterkit;

namespace {

// two well-separated gaussian blobs
void blobs(int per_class, std::uint64_t seed, Eigen::MatrixXd& x, Eigen::VectorXi& y) {
  Rng rng(seed);
  x.resize(2 * per_class, 2);
  y.resize(2 * per_class);
  for (int i = 0; i < per_class; ++i) {
    x(i, 0) = rng.normal() * 0.3 - 2.0;
    x(i, 1) = rng.normal() * 0.3 - 2.0;
    y[i] = 0;
    x(per_class + i, 0) = rng.normal() * 0.3 + 2.0;
    x(per_class + i, 1) = rng.normal() * 0.3 + 2.0;
    y[per_class + i] = 1;
  }
}

Eigen::MatrixXd xor_features() {
  Eigen::MatrixXd x(4, 2);
  x << 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0;
  return x;
}

}  // namespace

TEST_CASE("logistic regression separates blobs") {
  Eigen::MatrixXd x;
  Eigen::VectorXi y;
  blobs(20, 1, x, y);
  const auto model = train(ClassifierSpec::from_name("lr"), x, y, 0);
  CHECK((model->predict(x) - y).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("rbf svm solves xor with unit gamma and c") {
  Eigen::VectorXi y(4);
  y << 0, 0, 1, 1;
  ClassifierSpec spec = ClassifierSpec::from_name("svm");
  spec.svm_gamma = 1.0;
  spec.svm_c = 1.0;
  const auto model = train(spec, xor_features(), y, 0);
  CHECK((model->predict(xor_features()) - y).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("single-class training set raises for lr, svm, mlp") {
  Eigen::MatrixXd x(3, 2);
  x << 0, 0, 1, 1, 2, 2;
  Eigen::VectorXi y = Eigen::VectorXi::Zero(3);
  for (const char* name : {"lr", "svm", "mlp"}) {
    try {
      train(ClassifierSpec::from_name(name), x, y, 0);
      FAIL("expected SingleClassTrainingSet for ", name);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::single_class_training_set);
    }
  }
}

TEST_CASE("predict rejects mismatched width and tolerates constant rows") {
  Eigen::MatrixXd x;
  Eigen::VectorXi y;
  blobs(10, 3, x, y);
  const auto model = train(ClassifierSpec::from_name("lr"), x, y, 0);
  CHECK((model->predict(x) - y).cwiseAbs().maxCoeff() == 0);

  try {
    model->predict(Eigen::MatrixXd::Zero(2, 5));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
  }

  const Eigen::VectorXi flat = model->predict(Eigen::MatrixXd::Zero(3, 2));
  CHECK(flat.size() == 3);  // valid labels, no NaN path
}

TEST_CASE("random forest: 100 trees, depth <= 2, deterministic per seed") {
  Eigen::MatrixXd x;
  Eigen::VectorXi y;
  blobs(30, 5, x, y);
  const auto model = train(ClassifierSpec::from_name("rf"), x, y, 42);
  const ForestInfo info = forest_info(*model);
  CHECK(info.tree_count == 100);
  CHECK(info.max_depth <= 2);
  CHECK(info.max_depth >= 1);
  CHECK((model->predict(x) - y).cwiseAbs().maxCoeff() == 0);

  const auto again = train(ClassifierSpec::from_name("rf"), x, y, 42);
  Eigen::MatrixXd probe(50, 2);
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    probe(i, 0) = rng.uniform(-3.0, 3.0);
    probe(i, 1) = rng.uniform(-3.0, 3.0);
  }
  CHECK((model->predict(probe) - again->predict(probe)).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("gradient boosting: 100 depth-1 stumps fit the blobs") {
  Eigen::MatrixXd x;
  Eigen::VectorXi y;
  blobs(30, 8, x, y);
  const auto model = train(ClassifierSpec::from_name("gb"), x, y, 0);
  const ForestInfo info = forest_info(*model);
  CHECK(info.tree_count <= 100);
  CHECK(info.max_depth == 1);
  CHECK((model->predict(x) - y).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("mlp: layer sizes, epochs, batch, fit on blobs") {
  Eigen::MatrixXd x;
  Eigen::VectorXi y;
  blobs(20, 13, x, y);
  const auto model = train(ClassifierSpec::from_name("mlp"), x, y, 7);
  const MlpInfo info = mlp_info(*model);
  REQUIRE(info.layer_sizes.size() == 5);
  CHECK(info.layer_sizes[0] == 2);
  CHECK(info.layer_sizes[1] == 25);
  CHECK(info.layer_sizes[2] == 12);
  CHECK(info.layer_sizes[3] == 25);
  CHECK(info.layer_sizes[4] == 1);
  CHECK(info.epochs == 100);
  CHECK(info.batch == 5);
  CHECK((model->predict(x) - y).cwiseAbs().maxCoeff() == 0);

  // determinism per seed
  const auto again = train(ClassifierSpec::from_name("mlp"), x, y, 7);
  CHECK((model->predict(x) - again->predict(x)).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("metrics against hand-computed confusion matrices") {
  Eigen::VectorXi truth(8), pred(8);
  truth << 1, 1, 1, 1, 0, 0, 0, 0;
  pred << 1, 1, 0, 1, 0, 0, 1, 0;
  // tp=3 fn=1 fp=1 tn=3 -> acc 6/8, f1 = 2*3/(2*3+1+1) = 0.75
  const EvalScores scores = evaluate(pred, truth);
  CHECK(scores.accuracy == doctest::Approx(0.75));
  CHECK(scores.f1 == doctest::Approx(0.75));

  // no predicted positives -> f1 = 0 by convention
  pred.setZero();
  CHECK(evaluate(pred, truth).f1 == 0.0);
  CHECK(evaluate(pred, truth).accuracy == doctest::Approx(0.5));
}

TEST_CASE("affine feature scaling leaves lr and svm labels unchanged") {
  Eigen::MatrixXd x;
  Eigen::VectorXi y;
  blobs(25, 21, x, y);
  Eigen::MatrixXd scaled = x;
  scaled.col(0) = 100.0 * x.col(0).array() + 17.0;
  scaled.col(1) = 0.01 * x.col(1).array() - 3.0;

  for (const char* name : {"lr", "svm"}) {
    const ClassifierSpec spec = ClassifierSpec::from_name(name);
    const auto base = train(spec, x, y, 3);
    const auto refit = train(spec, scaled, y, 3);
    Eigen::MatrixXd probe;
    Eigen::VectorXi probe_y;
    blobs(40, 77, probe, probe_y);
    Eigen::MatrixXd probe_scaled = probe;
    probe_scaled.col(0) = 100.0 * probe.col(0).array() + 17.0;
    probe_scaled.col(1) = 0.01 * probe.col(1).array() - 3.0;
    CHECK((base->predict(probe) - refit->predict(probe_scaled)).cwiseAbs().maxCoeff() == 0);
  }
}

TEST_CASE("evaluate_realizations: separable self-transfer scores high and repeats exactly") {
  Rng rng(50);
  FeatureMatrix fm;
  fm.feature_names = {"a", "b"};
  const int n = 60;
  fm.values.resize(n, 2);
  fm.labels.resize(n);
  fm.record_ids.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    fm.record_ids.push_back("r" + std::to_string(i));
    fm.labels[i] = label;
    fm.values(i, 0) = rng.normal() * 0.2 + (label == 1 ? 1.5 : -1.5);
    fm.values(i, 1) = rng.normal() * 0.2;
  }
  SplitPlan plan;
  const EvalSummary a = evaluate_realizations(ClassifierSpec::from_name("lr"), fm, fm, plan);
  CHECK(a.mean_accuracy >= 0.95);
  CHECK(a.raw.size() == 10);
  CHECK(a.std_accuracy >= 0.0);

  const EvalSummary b = evaluate_realizations(ClassifierSpec::from_name("lr"), fm, fm, plan);
  CHECK(a.mean_accuracy == b.mean_accuracy);
  CHECK(a.mean_f1 == b.mean_f1);
  for (std::size_t i = 0; i < a.raw.size(); ++i) {
    CHECK(a.raw[i].accuracy == b.raw[i].accuracy);
    CHECK(a.raw[i].f1 == b.raw[i].f1);
  }

  FeatureMatrix renamed = fm;
  renamed.feature_names = {"a", "c"};
  try {
    evaluate_realizations(ClassifierSpec::from_name("lr"), fm, renamed, plan);
    FAIL("expected FeatureMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::feature_mismatch);
  }
}
