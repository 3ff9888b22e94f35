#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "chatterkit/dataset.hpp"

namespace chatterkit {

enum class ClassifierKind { LogisticRegression, SvmRbf, RandomForest, GradientBoost, Mlp };

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::LogisticRegression;

  // logistic regression
  double lr_tolerance = 1e-6;
  int lr_max_iterations = 10000;

  // rbf svm; gamma <= 0 means 1 / (n_features * mean feature variance)
  double svm_c = 1.0;
  double svm_gamma = 0.0;
  double svm_tolerance = 1e-3;

  // random forest
  int rf_trees = 100;
  int rf_max_depth = 2;

  // gradient boosting (depth-1 stumps)
  int gb_rounds = 100;
  double gb_learning_rate = 0.1;

  // mlp
  std::vector<int> mlp_hidden = {25, 12, 25};
  int mlp_epochs = 100;
  int mlp_batch = 5;

  static ClassifierSpec from_name(const std::string& name);  // lr|svm|rf|gb|mlp
  std::string name() const;
};

class Model {
public:
  virtual ~Model() = default;
  virtual Eigen::VectorXi predict(const Eigen::MatrixXd& features) const = 0;
};

// Fits the requested classifier on standardized features (train statistics
// are stored and reapplied at predict). Deterministic per seed.
std::unique_ptr<Model> train(const ClassifierSpec& spec, const Eigen::MatrixXd& features,
                             const Eigen::VectorXi& labels, std::uint64_t seed);

// Introspection hooks for the tree ensembles.
struct ForestInfo {
  int tree_count = 0;
  int max_depth = 0;
};
ForestInfo forest_info(const Model& model);

struct MlpInfo {
  std::vector<int> layer_sizes;  // input, hidden..., output
  int epochs = 0;
  int batch = 0;
};
MlpInfo mlp_info(const Model& model);

struct EvalScores {
  double accuracy = 0.0;
  double f1 = 0.0;  // positive class = unstable (1); 0 when undefined
};

EvalScores evaluate(const Eigen::VectorXi& predicted, const Eigen::VectorXi& truth);

struct EvalSummary {
  double mean_accuracy = 0.0, std_accuracy = 0.0;
  double mean_f1 = 0.0, std_f1 = 0.0;
  std::vector<EvalScores> raw;
};

EvalSummary summarize(const std::vector<EvalScores>& raw);

// Trains on seeded source draws and scores on seeded target draws.
EvalSummary evaluate_realizations(const ClassifierSpec& spec, const FeatureMatrix& source,
                                  const FeatureMatrix& target, const SplitPlan& plan);

}  // namespace chatterkit
