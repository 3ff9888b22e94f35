#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace chatterkit {

struct ImfSet {
  std::vector<Eigen::VectorXd> imfs;
  Eigen::VectorXd residue;
  int ensemble_size = 1;
  double noise_std_fraction = 0.0;
};

struct EmdOptions {
  double sd_threshold = 0.25;
  // Huang's pointwise SD rarely settles on noisy data, so the cap is the
  // practical stop there; 10 follows the reference ensemble-EMD practice.
  int max_sift_iterations = 10;
  int max_imfs = 16;
};

// Classic sifting with cubic-spline envelopes through mirrored extrema.
// Extraction stops once the residue has too few extrema to envelope.
ImfSet emd_sift(const Eigen::VectorXd& x, const EmdOptions& opt = {});

// Ensemble average over seeded white-noise realizations; member m draws its
// noise from (seed, m) so results do not depend on scheduling.
ImfSet eemd(const Eigen::VectorXd& x, int ensemble_size, double noise_std_fraction,
            std::uint64_t seed, const EmdOptions& opt = {});

// Index (0-based) of the IMF whose magnitude spectrum has the largest
// normalized inner product with the signal's; ties go to the lowest index.
int select_informative_imf(const ImfSet& imfs, const Eigen::VectorXd& x, double fs);

// energy ratio, peak-to-peak, std, rms, crest factor, skewness, kurtosis
Eigen::VectorXd eemd_feature_vector(const Eigen::VectorXd& imf, const Eigen::VectorXd& x,
                                    bool* degenerate = nullptr);

std::vector<std::string> eemd_feature_names();

}  // namespace chatterkit
