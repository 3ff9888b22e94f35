#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "chatterkit/dataset.hpp"

namespace chatterkit {

struct DtwConfig {
  double window_fraction = 0.1;  // Sakoe-Chiba band as a fraction of max length
  double slope_p = 1.0;          // 0 disables the slope constraint
  bool znormalize = true;
};

// Minimum cumulative Manhattan cost over warping paths obeying monotonicity,
// continuity, boundary, the band window and the slope constraint (with
// P = 1 a non-diagonal move may not follow another non-diagonal move).
double dtw_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const DtwConfig& cfg = {});

struct DistanceMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  Eigen::MatrixXd values;
};

// Symmetric with zero diagonal; entries computed in parallel.
DistanceMatrix pairwise_matrix(const std::vector<TimeSeriesRecord>& records,
                               const DtwConfig& cfg = {});

// rows = target records, cols = source records
DistanceMatrix cross_matrix(const std::vector<TimeSeriesRecord>& source,
                            const std::vector<TimeSeriesRecord>& target,
                            const DtwConfig& cfg = {});

void save_distance_matrix(const DistanceMatrix& dm, const std::filesystem::path& path,
                          const std::string& header_comment = {});
DistanceMatrix load_distance_matrix(const std::filesystem::path& path);

// Majority vote over the k nearest training columns per row; distance ties
// resolve by column order, vote ties toward unstable (1).
Eigen::VectorXi knn_predict(const DistanceMatrix& test_by_train, const Eigen::VectorXi& train_labels,
                            int k);

}  // namespace chatterkit
