#include "chatterkit/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chatterkit/error.hpp"
#include "chatterkit/rng.hpp"

namespace chatterkit {

namespace {

struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  void fit(const Eigen::MatrixXd& x) {
    mean = x.colwise().mean();
    Eigen::RowVectorXd var =
        (x.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(x.rows());
    scale = var.array().sqrt().max(1e-12);
  }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const {
    return (x.rowwise() - mean).array().rowwise() / scale.array();
  }
};

void check_predict_width(const Eigen::MatrixXd& x, Eigen::Index expected) {
  if (x.cols() != expected)
    throw Error(Errc::dimension_mismatch,
                "expected " + std::to_string(expected) + " features, got " +
                    std::to_string(x.cols()));
}

void require_two_classes(const Eigen::VectorXi& y) {
  const int first = y[0];
  for (Eigen::Index i = 1; i < y.size(); ++i)
    if (y[i] != first) return;
  throw Error(Errc::single_class_training_set, "training labels contain one class");
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// ---------------------------------------------------------------- logistic
class LogisticModel final : public Model {
public:
  LogisticModel(const ClassifierSpec& spec, const Eigen::MatrixXd& x_raw, const Eigen::VectorXi& y) {
    require_two_classes(y);
    std_.fit(x_raw);
    const Eigen::MatrixXd x = std_.apply(x_raw);
    const Eigen::Index n = x.rows(), d = x.cols();
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) target[i] = y[i];

    weights_ = Eigen::VectorXd::Zero(d);
    bias_ = 0.0;
    // fixed step from a Frobenius bound on the logistic Hessian
    const double lipschitz = 0.25 * (x.squaredNorm() / static_cast<double>(n) + 1.0);
    const double step = 1.0 / lipschitz;
    for (int iter = 0; iter < spec.lr_max_iterations; ++iter) {
      const Eigen::VectorXd z = (x * weights_).array() + bias_;
      const Eigen::VectorXd p = z.unaryExpr([](double v) { return sigmoid(v); });
      const Eigen::VectorXd err = p - target;
      const Eigen::VectorXd grad_w = x.transpose() * err / static_cast<double>(n);
      const double grad_b = err.mean();
      const double grad_norm = std::sqrt(grad_w.squaredNorm() + grad_b * grad_b);
      if (grad_norm <= spec.lr_tolerance) break;
      weights_ -= step * grad_w;
      bias_ -= step * grad_b;
    }
  }

  Eigen::VectorXi predict(const Eigen::MatrixXd& features) const override {
    check_predict_width(features, weights_.size());
    const Eigen::VectorXd z = (std_.apply(features) * weights_).array() + bias_;
    Eigen::VectorXi out(features.rows());
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = z[i] >= 0.0 ? 1 : 0;
    return out;
  }

private:
  Standardizer std_;
  Eigen::VectorXd weights_;
  double bias_ = 0.0;
};

// --------------------------------------------------------------------- svm
class SvmModel final : public Model {
public:
  SvmModel(const ClassifierSpec& spec, const Eigen::MatrixXd& x_raw, const Eigen::VectorXi& y) {
    require_two_classes(y);
    std_.fit(x_raw);
    x_ = std_.apply(x_raw);
    const Eigen::Index n = x_.rows();
    y_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) y_[i] = y[i] == 1 ? 1.0 : -1.0;

    if (spec.svm_gamma > 0.0) {
      gamma_ = spec.svm_gamma;
    } else {
      const double var =
          (x_.rowwise() - x_.colwise().mean()).array().square().mean();
      gamma_ = 1.0 / (static_cast<double>(x_.cols()) * std::max(var, 1e-12));
    }

    Eigen::MatrixXd kernel(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      kernel(i, i) = 1.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double k = std::exp(-gamma_ * (x_.row(i) - x_.row(j)).squaredNorm());
        kernel(i, j) = k;
        kernel(j, i) = k;
      }
    }

    // SMO with maximal-violating-pair selection on the dual gradient
    const double c = spec.svm_c;
    alpha_ = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);  // d/dalpha of the dual objective
    const int max_iter = 100000;
    for (int iter = 0; iter < max_iter; ++iter) {
      // i in I_up maximizes -y*grad, j in I_low minimizes it
      Eigen::Index best_i = -1, best_j = -1;
      double max_up = -1e300, min_low = 1e300;
      for (Eigen::Index t = 0; t < n; ++t) {
        const double v = -y_[t] * grad[t];
        const bool in_up = (y_[t] > 0 && alpha_[t] < c) || (y_[t] < 0 && alpha_[t] > 0);
        const bool in_low = (y_[t] > 0 && alpha_[t] > 0) || (y_[t] < 0 && alpha_[t] < c);
        if (in_up && v > max_up) {
          max_up = v;
          best_i = t;
        }
        if (in_low && v < min_low) {
          min_low = v;
          best_j = t;
        }
      }
      if (best_i < 0 || best_j < 0 || max_up - min_low <= spec.svm_tolerance) break;

      const Eigen::Index i = best_i, j = best_j;
      // direction u_i = y_i, u_j = -y_j keeps sum(alpha*y) fixed; its
      // curvature is K_ii + K_jj - 2 K_ij
      const double quad = std::max(kernel(i, i) + kernel(j, j) - 2.0 * kernel(i, j), 1e-12);
      double delta = (max_up - min_low) / quad;
      // clip to the box in the (alpha_i, alpha_j) plane
      if (y_[i] > 0)
        delta = std::min(delta, c - alpha_[i]);
      else
        delta = std::min(delta, alpha_[i]);
      if (y_[j] > 0)
        delta = std::min(delta, alpha_[j]);
      else
        delta = std::min(delta, c - alpha_[j]);

      alpha_[i] += y_[i] * delta;
      alpha_[j] -= y_[j] * delta;
      grad += delta * (kernel.col(i) - kernel.col(j)).cwiseProduct(y_);
    }

    // bias from free vectors, else from the KKT interval midpoint
    Eigen::VectorXd decision = Eigen::VectorXd::Zero(n);
    for (Eigen::Index t = 0; t < n; ++t)
      if (alpha_[t] != 0.0) decision += alpha_[t] * y_[t] * kernel.col(t);
    double acc = 0.0;
    int free_count = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (alpha_[t] > 1e-8 && alpha_[t] < c - 1e-8) {
        acc += y_[t] - decision[t];
        ++free_count;
      }
    }
    if (free_count > 0) {
      bias_ = acc / free_count;
    } else {
      double up = -1e300, low = 1e300;
      for (Eigen::Index t = 0; t < n; ++t) {
        const double v = y_[t] - decision[t];
        const bool in_up = (y_[t] > 0 && alpha_[t] < c) || (y_[t] < 0 && alpha_[t] > 0);
        const bool in_low = (y_[t] > 0 && alpha_[t] > 0) || (y_[t] < 0 && alpha_[t] < c);
        if (in_up) up = std::max(up, v);
        if (in_low) low = std::min(low, v);
      }
      bias_ = 0.5 * (up + low);
      if (!std::isfinite(bias_)) bias_ = 0.0;
    }
  }

  Eigen::VectorXi predict(const Eigen::MatrixXd& features) const override {
    check_predict_width(features, x_.cols());
    const Eigen::MatrixXd q = std_.apply(features);
    Eigen::VectorXi out(q.rows());
    for (Eigen::Index r = 0; r < q.rows(); ++r) {
      double decision = bias_;
      for (Eigen::Index t = 0; t < x_.rows(); ++t) {
        if (alpha_[t] == 0.0) continue;
        decision += alpha_[t] * y_[t] * std::exp(-gamma_ * (q.row(r) - x_.row(t)).squaredNorm());
      }
      out[r] = decision >= 0.0 ? 1 : 0;
    }
    return out;
  }

private:
  Standardizer std_;
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  Eigen::VectorXd alpha_;
  double gamma_ = 1.0;
  double bias_ = 0.0;
};

// ------------------------------------------------------------------- trees
struct TreeNode {
  int feature = -1;       // -1 marks a leaf
  double threshold = 0.0;
  double value = 0.0;     // leaf payload
  int left = -1, right = -1;
};

struct Tree {
  std::vector<TreeNode> nodes;

  double eval(const Eigen::RowVectorXd& row) const {
    int at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
      const TreeNode& node = nodes[static_cast<std::size_t>(at)];
      at = row[node.feature] <= node.threshold ? node.left : node.right;
    }
    return nodes[static_cast<std::size_t>(at)].value;
  }

  int depth(int at = 0) const {
    const TreeNode& node = nodes[static_cast<std::size_t>(at)];
    if (node.feature < 0) return 0;
    return 1 + std::max(depth(node.left), depth(node.right));
  }
};

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;
  bool found = false;
};

// best Gini split over the given features and sample subset
Split best_gini_split(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                      const std::vector<int>& samples, const std::vector<int>& features) {
  Split best;
  const double total = static_cast<double>(samples.size());
  int total_pos = 0;
  for (const int s : samples) total_pos += y[s];
  const double p = total_pos / total;
  const double parent_gini = 2.0 * p * (1.0 - p);

  std::vector<std::pair<double, int>> order;
  for (const int f : features) {
    order.clear();
    for (const int s : samples) order.emplace_back(x(s, f), y[s]);
    std::sort(order.begin(), order.end());
    int left_pos = 0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      left_pos += order[i].second;
      if (order[i].first == order[i + 1].first) continue;
      const double nl = static_cast<double>(i + 1);
      const double nr = total - nl;
      const double pl = left_pos / nl;
      const double pr = (total_pos - left_pos) / nr;
      const double gini = (nl * 2.0 * pl * (1.0 - pl) + nr * 2.0 * pr * (1.0 - pr)) / total;
      const double gain = parent_gini - gini;
      if (!best.found || gain > best.score) {
        best.found = true;
        best.score = gain;
        best.feature = f;
        best.threshold = 0.5 * (order[i].first + order[i + 1].first);
      }
    }
  }
  return best;
}

class ForestModel final : public Model {
public:
  ForestModel(const ClassifierSpec& spec, const Eigen::MatrixXd& x_raw, const Eigen::VectorXi& y,
              std::uint64_t seed)
      : tree_count_(spec.rf_trees) {
    std_.fit(x_raw);
    const Eigen::MatrixXd x = std_.apply(x_raw);
    const int n = static_cast<int>(x.rows());
    const int d = static_cast<int>(x.cols());
    const int subset = std::max(1, static_cast<int>(std::lround(std::ceil(std::sqrt(d)))));

    trees_.reserve(static_cast<std::size_t>(spec.rf_trees));
    for (int t = 0; t < spec.rf_trees; ++t) {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
      std::vector<int> samples(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) samples[static_cast<std::size_t>(i)] =
          static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));  // bootstrap
      Tree tree;
      grow(tree, x, y, samples, 0, spec.rf_max_depth, subset, d, rng);
      trees_.push_back(std::move(tree));
    }
  }

  Eigen::VectorXi predict(const Eigen::MatrixXd& features) const override {
    check_predict_width(features, std_.mean.size());
    const Eigen::MatrixXd q = std_.apply(features);
    Eigen::VectorXi out(q.rows());
    for (Eigen::Index r = 0; r < q.rows(); ++r) {
      double prob = 0.0;
      for (const Tree& tree : trees_) prob += tree.eval(q.row(r));
      out[r] = prob / static_cast<double>(trees_.size()) >= 0.5 ? 1 : 0;
    }
    return out;
  }

  ForestInfo info() const {
    ForestInfo fi;
    fi.tree_count = static_cast<int>(trees_.size());
    for (const Tree& tree : trees_) fi.max_depth = std::max(fi.max_depth, tree.depth());
    return fi;
  }

private:
  // returns the node index; leaves store the positive-class fraction
  static int grow(Tree& tree, const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                  const std::vector<int>& samples, int depth, int max_depth, int subset, int d,
                  Rng& rng) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    int pos = 0;
    for (const int s : samples) pos += y[s];
    const bool pure = pos == 0 || pos == static_cast<int>(samples.size());
    if (depth >= max_depth || pure || samples.size() < 2) {
      tree.nodes[static_cast<std::size_t>(node_id)].value =
          pos / static_cast<double>(samples.size());
      return node_id;
    }

    std::vector<int> features(static_cast<std::size_t>(d));
    std::iota(features.begin(), features.end(), 0);
    rng.shuffle(features);
    features.resize(static_cast<std::size_t>(std::min(subset, d)));
    std::sort(features.begin(), features.end());

    const Split split = best_gini_split(x, y, samples, features);
    if (!split.found || split.score <= 0.0) {
      tree.nodes[static_cast<std::size_t>(node_id)].value =
          pos / static_cast<double>(samples.size());
      return node_id;
    }

    std::vector<int> left, right;
    for (const int s : samples)
      (x(s, split.feature) <= split.threshold ? left : right).push_back(s);
    tree.nodes[static_cast<std::size_t>(node_id)].feature = split.feature;
    tree.nodes[static_cast<std::size_t>(node_id)].threshold = split.threshold;
    const int l = grow(tree, x, y, left, depth + 1, max_depth, subset, d, rng);
    tree.nodes[static_cast<std::size_t>(node_id)].left = l;
    const int r = grow(tree, x, y, right, depth + 1, max_depth, subset, d, rng);
    tree.nodes[static_cast<std::size_t>(node_id)].right = r;
    return node_id;
  }

  Standardizer std_;
  std::vector<Tree> trees_;
  int tree_count_;
};

// ------------------------------------------------------------ boosting
class BoostModel final : public Model {
public:
  BoostModel(const ClassifierSpec& spec, const Eigen::MatrixXd& x_raw, const Eigen::VectorXi& y)
      : learning_rate_(spec.gb_learning_rate) {
    std_.fit(x_raw);
    const Eigen::MatrixXd x = std_.apply(x_raw);
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();

    int pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) pos += y[i];
    const double p0 = std::clamp(pos / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
    base_score_ = std::log(p0 / (1.0 - p0));

    // per-feature sort orders, reused across rounds
    std::vector<std::vector<int>> orders(static_cast<std::size_t>(d));
    for (Eigen::Index f = 0; f < d; ++f) {
      auto& order = orders[static_cast<std::size_t>(f)];
      order.resize(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return x(a, f) < x(b, f); });
    }

    Eigen::VectorXd score = Eigen::VectorXd::Constant(n, base_score_);
    stumps_.reserve(static_cast<std::size_t>(spec.gb_rounds));
    for (int round = 0; round < spec.gb_rounds; ++round) {
      Eigen::VectorXd grad(n), hess(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double prob = sigmoid(score[i]);
        grad[i] = y[i] - prob;
        hess[i] = std::max(prob * (1.0 - prob), 1e-12);
      }
      const double total_grad = grad.sum();
      const double total_hess = hess.sum();

      Stump best;
      double best_gain = -1.0;
      for (Eigen::Index f = 0; f < d; ++f) {
        const auto& order = orders[static_cast<std::size_t>(f)];
        double left_grad = 0.0, left_hess = 0.0;
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
          const int a = order[static_cast<std::size_t>(i)];
          left_grad += grad[a];
          left_hess += hess[a];
          const int b = order[static_cast<std::size_t>(i + 1)];
          if (x(a, f) == x(b, f)) continue;
          const double right_grad = total_grad - left_grad;
          const double right_hess = total_hess - left_hess;
          const double gain = left_grad * left_grad / left_hess +
                              right_grad * right_grad / right_hess -
                              total_grad * total_grad / total_hess;
          if (gain > best_gain) {
            best_gain = gain;
            best.feature = static_cast<int>(f);
            best.threshold = 0.5 * (x(a, f) + x(b, f));
            best.left_value = left_grad / left_hess;
            best.right_value = right_grad / right_hess;
          }
        }
      }
      if (best_gain <= 0.0) break;
      for (Eigen::Index i = 0; i < n; ++i)
        score[i] += learning_rate_ *
                    (x(i, best.feature) <= best.threshold ? best.left_value : best.right_value);
      stumps_.push_back(best);
    }
  }

  Eigen::VectorXi predict(const Eigen::MatrixXd& features) const override {
    check_predict_width(features, std_.mean.size());
    const Eigen::MatrixXd q = std_.apply(features);
    Eigen::VectorXi out(q.rows());
    for (Eigen::Index r = 0; r < q.rows(); ++r) {
      double score = base_score_;
      for (const Stump& s : stumps_)
        score += learning_rate_ * (q(r, s.feature) <= s.threshold ? s.left_value : s.right_value);
      out[r] = score >= 0.0 ? 1 : 0;
    }
    return out;
  }

  ForestInfo info() const {
    ForestInfo fi;
    fi.tree_count = static_cast<int>(stumps_.size());
    fi.max_depth = stumps_.empty() ? 0 : 1;
    return fi;
  }

private:
  struct Stump {
    int feature = 0;
    double threshold = 0.0;
    double left_value = 0.0, right_value = 0.0;
  };

  Standardizer std_;
  std::vector<Stump> stumps_;
  double base_score_ = 0.0;
  double learning_rate_;
};

// --------------------------------------------------------------------- mlp
class MlpModel final : public Model {
public:
  MlpModel(const ClassifierSpec& spec, const Eigen::MatrixXd& x_raw, const Eigen::VectorXi& y,
           std::uint64_t seed)
      : epochs_(spec.mlp_epochs), batch_(spec.mlp_batch) {
    require_two_classes(y);
    std_.fit(x_raw);
    const Eigen::MatrixXd x = std_.apply(x_raw);
    const Eigen::Index n = x.rows();

    sizes_ = {static_cast<int>(x.cols())};
    for (const int h : spec.mlp_hidden) sizes_.push_back(h);
    sizes_.push_back(1);

    Rng rng(mix_seed(seed, 0x3117));
    const std::size_t layers = sizes_.size() - 1;
    weights_.resize(layers);
    biases_.resize(layers);
    for (std::size_t l = 0; l < layers; ++l) {
      const int fan_in = sizes_[l], fan_out = sizes_[l + 1];
      const double bound = std::sqrt(6.0 / (fan_in + fan_out));
      weights_[l].resize(fan_out, fan_in);
      for (Eigen::Index r = 0; r < weights_[l].rows(); ++r)
        for (Eigen::Index c = 0; c < weights_[l].cols(); ++c)
          weights_[l](r, c) = rng.uniform(-bound, bound);
      biases_[l] = Eigen::VectorXd::Zero(fan_out);
    }

    // Adam
    std::vector<Eigen::MatrixXd> mw(layers), vw(layers);
    std::vector<Eigen::VectorXd> mb(layers), vb(layers);
    for (std::size_t l = 0; l < layers; ++l) {
      mw[l] = Eigen::MatrixXd::Zero(weights_[l].rows(), weights_[l].cols());
      vw[l] = mw[l];
      mb[l] = Eigen::VectorXd::Zero(biases_[l].size());
      vb[l] = mb[l];
    }
    const double rate = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long step = 0;

    std::vector<int> index(static_cast<std::size_t>(n));
    std::iota(index.begin(), index.end(), 0);
    for (int epoch = 0; epoch < spec.mlp_epochs; ++epoch) {
      rng.shuffle(index);
      for (Eigen::Index start = 0; start < n; start += spec.mlp_batch) {
        const Eigen::Index count = std::min<Eigen::Index>(spec.mlp_batch, n - start);
        std::vector<Eigen::MatrixXd> grad_w(layers);
        std::vector<Eigen::VectorXd> grad_b(layers);
        for (std::size_t l = 0; l < layers; ++l) {
          grad_w[l] = Eigen::MatrixXd::Zero(weights_[l].rows(), weights_[l].cols());
          grad_b[l] = Eigen::VectorXd::Zero(biases_[l].size());
        }
        for (Eigen::Index b = 0; b < count; ++b) {
          const int i = index[static_cast<std::size_t>(start + b)];
          backprop(x.row(i).transpose(), y[i], grad_w, grad_b);
        }
        ++step;
        const double corr1 = 1.0 - std::pow(beta1, static_cast<double>(step));
        const double corr2 = 1.0 - std::pow(beta2, static_cast<double>(step));
        for (std::size_t l = 0; l < layers; ++l) {
          grad_w[l] /= static_cast<double>(count);
          grad_b[l] /= static_cast<double>(count);
          mw[l] = beta1 * mw[l] + (1.0 - beta1) * grad_w[l];
          vw[l] = beta2 * vw[l].array().matrix() +
                  (1.0 - beta2) * grad_w[l].array().square().matrix();
          mb[l] = beta1 * mb[l] + (1.0 - beta1) * grad_b[l];
          vb[l] = beta2 * vb[l].array().matrix() +
                  (1.0 - beta2) * grad_b[l].array().square().matrix();
          weights_[l].array() -=
              rate * (mw[l] / corr1).array() / ((vw[l] / corr2).array().sqrt() + eps);
          biases_[l].array() -=
              rate * (mb[l] / corr1).array() / ((vb[l] / corr2).array().sqrt() + eps);
        }
      }
    }
  }

  Eigen::VectorXi predict(const Eigen::MatrixXd& features) const override {
    check_predict_width(features, std_.mean.size());
    const Eigen::MatrixXd q = std_.apply(features);
    Eigen::VectorXi out(q.rows());
    for (Eigen::Index r = 0; r < q.rows(); ++r) {
      Eigen::VectorXd a = q.row(r).transpose();
      for (std::size_t l = 0; l + 1 < weights_.size(); ++l)
        a = ((weights_[l] * a + biases_[l]).array().tanh()).matrix();
      const double z = (weights_.back() * a + biases_.back())[0];
      out[r] = sigmoid(z) >= 0.5 ? 1 : 0;
    }
    return out;
  }

  MlpInfo info() const {
    MlpInfo mi;
    mi.layer_sizes = sizes_;
    mi.epochs = epochs_;
    mi.batch = batch_;
    return mi;
  }

private:
  void backprop(const Eigen::VectorXd& input, int label, std::vector<Eigen::MatrixXd>& grad_w,
                std::vector<Eigen::VectorXd>& grad_b) const {
    const std::size_t layers = weights_.size();
    std::vector<Eigen::VectorXd> activations = {input};
    for (std::size_t l = 0; l + 1 < layers; ++l)
      activations.push_back(
          ((weights_[l] * activations.back() + biases_[l]).array().tanh()).matrix());
    const double z = (weights_.back() * activations.back() + biases_.back())[0];
    const double prob = sigmoid(z);

    // BCE with sigmoid output: dL/dz = p - y
    Eigen::VectorXd delta(1);
    delta[0] = prob - static_cast<double>(label);
    for (std::size_t l = layers; l-- > 0;) {
      grad_w[l] += delta * activations[l].transpose();
      grad_b[l] += delta;
      if (l > 0) {
        const Eigen::VectorXd back = weights_[l].transpose() * delta;
        delta = (back.array() * (1.0 - activations[l].array().square())).matrix();
      }
    }
  }

  Standardizer std_;
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
  int epochs_, batch_;
};

}  // namespace

ClassifierSpec ClassifierSpec::from_name(const std::string& name) {
  ClassifierSpec spec;
  if (name == "lr")
    spec.kind = ClassifierKind::LogisticRegression;
  else if (name == "svm")
    spec.kind = ClassifierKind::SvmRbf;
  else if (name == "rf")
    spec.kind = ClassifierKind::RandomForest;
  else if (name == "gb")
    spec.kind = ClassifierKind::GradientBoost;
  else if (name == "mlp")
    spec.kind = ClassifierKind::Mlp;
  else
    throw Error(Errc::invalid_argument, "unknown classifier '" + name + "'");
  return spec;
}

std::string ClassifierSpec::name() const {
  switch (kind) {
    case ClassifierKind::LogisticRegression: return "lr";
    case ClassifierKind::SvmRbf: return "svm";
    case ClassifierKind::RandomForest: return "rf";
    case ClassifierKind::GradientBoost: return "gb";
    case ClassifierKind::Mlp: return "mlp";
  }
  return "?";
}

std::unique_ptr<Model> train(const ClassifierSpec& spec, const Eigen::MatrixXd& features,
                             const Eigen::VectorXi& labels, std::uint64_t seed) {
  if (features.rows() == 0 || features.rows() != labels.size())
    throw Error(Errc::dimension_mismatch, "features and labels disagree");
  switch (spec.kind) {
    case ClassifierKind::LogisticRegression:
      return std::make_unique<LogisticModel>(spec, features, labels);
    case ClassifierKind::SvmRbf: return std::make_unique<SvmModel>(spec, features, labels);
    case ClassifierKind::RandomForest:
      return std::make_unique<ForestModel>(spec, features, labels, seed);
    case ClassifierKind::GradientBoost: return std::make_unique<BoostModel>(spec, features, labels);
    case ClassifierKind::Mlp: return std::make_unique<MlpModel>(spec, features, labels, seed);
  }
  throw Error(Errc::invalid_argument, "unknown classifier kind");
}

ForestInfo forest_info(const Model& model) {
  if (const auto* forest = dynamic_cast<const ForestModel*>(&model)) return forest->info();
  if (const auto* boost = dynamic_cast<const BoostModel*>(&model)) return boost->info();
  throw Error(Errc::invalid_argument, "model is not a tree ensemble");
}

MlpInfo mlp_info(const Model& model) {
  if (const auto* mlp = dynamic_cast<const MlpModel*>(&model)) return mlp->info();
  throw Error(Errc::invalid_argument, "model is not an mlp");
}

EvalScores evaluate(const Eigen::VectorXi& predicted, const Eigen::VectorXi& truth) {
  if (predicted.size() != truth.size() || predicted.size() == 0)
    throw Error(Errc::dimension_mismatch, "prediction/truth length mismatch");
  int tp = 0, tn = 0, fp = 0, fn = 0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    if (predicted[i] == 1 && truth[i] == 1) ++tp;
    if (predicted[i] == 0 && truth[i] == 0) ++tn;
    if (predicted[i] == 1 && truth[i] == 0) ++fp;
    if (predicted[i] == 0 && truth[i] == 1) ++fn;
  }
  EvalScores scores;
  scores.accuracy = static_cast<double>(tp + tn) / static_cast<double>(truth.size());
  const int denom = 2 * tp + fp + fn;
  scores.f1 = denom > 0 ? 2.0 * tp / static_cast<double>(denom) : 0.0;
  return scores;
}

EvalSummary summarize(const std::vector<EvalScores>& raw) {
  EvalSummary s;
  s.raw = raw;
  if (raw.empty()) return s;
  const double n = static_cast<double>(raw.size());
  for (const auto& r : raw) {
    s.mean_accuracy += r.accuracy;
    s.mean_f1 += r.f1;
  }
  s.mean_accuracy /= n;
  s.mean_f1 /= n;
  for (const auto& r : raw) {
    s.std_accuracy += (r.accuracy - s.mean_accuracy) * (r.accuracy - s.mean_accuracy);
    s.std_f1 += (r.f1 - s.mean_f1) * (r.f1 - s.mean_f1);
  }
  s.std_accuracy = std::sqrt(s.std_accuracy / n);
  s.std_f1 = std::sqrt(s.std_f1 / n);
  return s;
}

EvalSummary evaluate_realizations(const ClassifierSpec& spec, const FeatureMatrix& source,
                                  const FeatureMatrix& target, const SplitPlan& plan) {
  if (source.feature_names != target.feature_names)
    throw Error(Errc::feature_mismatch, "source and target feature names differ");
  source.validate();
  target.validate();

  const auto splits = make_splits(source.record_ids.size(), target.record_ids.size(), plan);
  std::vector<EvalScores> raw;
  raw.reserve(splits.size());
  for (std::size_t s = 0; s < splits.size(); ++s) {
    const auto& split = splits[s];
    Eigen::MatrixXd train_x(static_cast<Eigen::Index>(split.train_indices.size()),
                            source.values.cols());
    Eigen::VectorXi train_y(static_cast<Eigen::Index>(split.train_indices.size()));
    for (std::size_t i = 0; i < split.train_indices.size(); ++i) {
      train_x.row(static_cast<Eigen::Index>(i)) = source.values.row(split.train_indices[i]);
      train_y[static_cast<Eigen::Index>(i)] = source.labels[split.train_indices[i]];
    }
    Eigen::MatrixXd test_x(static_cast<Eigen::Index>(split.test_indices.size()),
                           target.values.cols());
    Eigen::VectorXi test_y(static_cast<Eigen::Index>(split.test_indices.size()));
    for (std::size_t i = 0; i < split.test_indices.size(); ++i) {
      test_x.row(static_cast<Eigen::Index>(i)) = target.values.row(split.test_indices[i]);
      test_y[static_cast<Eigen::Index>(i)] = target.labels[split.test_indices[i]];
    }
    const auto model = train(spec, train_x, train_y, plan.seeds[s]);
    raw.push_back(evaluate(model->predict(test_x), test_y));
  }
  return summarize(raw);
}

}  // namespace chatterkit
