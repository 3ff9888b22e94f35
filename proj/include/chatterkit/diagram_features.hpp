#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "chatterkit/rips.hpp"

namespace chatterkit {

// f1 = sum b(d-b), f2 = sum (dmax-d)(d-b), f3 = sum b^2 (d-b)^4,
// f4 = sum (dmax-d)^2 (d-b)^4, f5 = max(d-b); zeros for an empty diagram.
Eigen::VectorXd carlsson_coordinates(const PersistenceDiagram& diagram);

struct ImageGrid {
  double birth_min = 0.0, birth_max = 1.0;
  double life_min = 0.0, life_max = 1.0;
  double pixel_size = 0.1;
  int birth_bins() const;
  int life_bins() const;
};

// Pooled (birth, lifetime) bounds padded by `pad` on each side.
ImageGrid fit_image_grid(const std::vector<PersistenceDiagram>& diagrams, double pixel_size,
                         double pad = 0.1);

// Largest lifetime over the diagrams; caps the persistence-image weight.
double max_lifetime(const std::vector<PersistenceDiagram>& diagrams);

// Row-major pixel integrals (lifetime rows by birth columns) of the
// lifetime-weighted Gaussian surface over the transformed diagram.
Eigen::VectorXd persistence_image(const PersistenceDiagram& diagram, double sigma,
                                  const ImageGrid& grid, double weight_cap);

// Piecewise-linear landscape function as (x, value) nodes.
struct LandscapeFunction {
  Eigen::VectorXd xs;
  Eigen::VectorXd ys;
  double operator()(double x) const;  // linear interpolation, 0 outside
};

// k-th landscape (k >= 1); the zero function when the diagram has fewer
// than k points above any x.
LandscapeFunction landscape_function(const PersistenceDiagram& diagram, int k);

// Sorted deduplicated node projections of the k-th landscapes.
std::vector<double> landscape_mesh(const std::vector<PersistenceDiagram>& diagrams, int k);

// One row per diagram: lambda_k sampled on the mesh.
Eigen::MatrixXd landscape_features(const std::vector<PersistenceDiagram>& diagrams, int k,
                                   const std::vector<double>& mesh);

// Uniform node meshes over padded (birth, lifetime) ranges.
void fit_template_meshes(const std::vector<PersistenceDiagram>& diagrams, int nodes,
                         Eigen::VectorXd& mesh_birth, Eigen::VectorXd& mesh_life,
                         double pad = 0.1);

// Feature (i, j) = sum over diagram points of |l_i^A(birth) * l_j^B(lifetime)|
// with Lagrange cardinal polynomials on the two meshes; one row per diagram.
Eigen::MatrixXd template_function_features(const std::vector<PersistenceDiagram>& diagrams,
                                           const Eigen::VectorXd& mesh_birth,
                                           const Eigen::VectorXd& mesh_life);

}  // namespace chatterkit
