#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace chatterkit {

struct PersistencePair {
  double birth = 0.0;
  double death = 0.0;
};

// finite-death H1 pairs, death > birth
using PersistenceDiagram = std::vector<PersistencePair>;

// 1-dimensional persistent homology of the Vietoris-Rips filtration under
// Euclidean distance (Z/2 boundary reduction over triangle columns). Clouds
// larger than max_points are subsampled with the given seed. Zero-lifetime
// pairs are dropped; all cycles die by the enclosing radius, so triangle
// enumeration stops there.
PersistenceDiagram rips_persistence_h1(const Eigen::MatrixXd& cloud, int max_points = 400,
                                       std::uint64_t subsample_seed = 0);

void save_diagram(const PersistenceDiagram& diagram, const std::filesystem::path& path);
PersistenceDiagram load_diagram(const std::filesystem::path& path);

}  // namespace chatterkit
