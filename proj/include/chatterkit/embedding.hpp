#pragma once

#include <Eigen/Dense>

namespace chatterkit {

struct EmbeddingParams {
  int dimension = 2;  // >= 2
  int delay = 1;      // samples, >= 1
};

struct DelayEstimate {
  int delay = 1;
  bool degenerate = false;  // no dominant spectral peak (flat spectrum)
};

// Quarter period of the dominant FFT bin (DC excluded), at least 1.
DelayEstimate estimate_delay(const Eigen::VectorXd& x, double fs);

struct DimensionEstimate {
  int dimension = 2;
  bool capped = false;
};

// Smallest dimension whose false-nearest-neighbor fraction drops below the
// threshold (Kennel distance-ratio test), capped at max_dimension.
DimensionEstimate estimate_dimension_fnn(const Eigen::VectorXd& x, int delay,
                                         double threshold = 0.02, int max_dimension = 10);

// Point i = (x_i, x_{i+tau}, ..., x_{i+(m-1)tau}); rows are points.
Eigen::MatrixXd takens_embed(const Eigen::VectorXd& x, const EmbeddingParams& params);

}  // namespace chatterkit
