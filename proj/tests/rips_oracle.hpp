#pragma once

// Textbook persistence oracle: builds every vertex, edge and triangle of the
// Rips filtration, sorts them by (diameter, dimension, lexicographic index)
// and runs the plain boundary-matrix reduction over Z/2. H1 pairs are the
// (edge, triangle) lows with positive lifetime. O(n^3) simplices; n <= 15.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <vector>

namespace ck_test {

struct OraclePair {
  double birth, death;
};

inline std::vector<OraclePair> rips_h1_reduction(const Eigen::MatrixXd& cloud) {
  const int n = static_cast<int>(cloud.rows());
  Eigen::MatrixXd dist(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dist(i, j) = (cloud.row(i) - cloud.row(j)).norm();

  struct Simplex {
    double diameter;
    int dim;
    std::array<int, 3> vertices;  // padded with -1
  };
  std::vector<Simplex> simplices;
  for (int v = 0; v < n; ++v) simplices.push_back({0.0, 0, {v, -1, -1}});
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) simplices.push_back({dist(a, b), 1, {a, b, -1}});
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        simplices.push_back(
            {std::max({dist(a, b), dist(a, c), dist(b, c)}), 2, {a, b, c}});

  std::sort(simplices.begin(), simplices.end(), [](const Simplex& s, const Simplex& t) {
    if (s.diameter != t.diameter) return s.diameter < t.diameter;
    if (s.dim != t.dim) return s.dim < t.dim;
    return s.vertices < t.vertices;
  });

  const int total = static_cast<int>(simplices.size());
  std::vector<int> position(static_cast<std::size_t>(total));
  const auto find_simplex = [&](int dim, std::array<int, 3> vertices) {
    for (int s = 0; s < total; ++s)
      if (simplices[static_cast<std::size_t>(s)].dim == dim &&
          simplices[static_cast<std::size_t>(s)].vertices == vertices)
        return s;
    return -1;
  };
  (void)position;

  // boundary columns in the sorted order
  std::vector<std::vector<int>> columns(static_cast<std::size_t>(total));
  for (int s = 0; s < total; ++s) {
    const Simplex& simplex = simplices[static_cast<std::size_t>(s)];
    std::vector<int>& column = columns[static_cast<std::size_t>(s)];
    if (simplex.dim == 1) {
      column.push_back(find_simplex(0, {simplex.vertices[0], -1, -1}));
      column.push_back(find_simplex(0, {simplex.vertices[1], -1, -1}));
    } else if (simplex.dim == 2) {
      const auto [a, b, c] = simplex.vertices;
      column.push_back(find_simplex(1, {a, b, -1}));
      column.push_back(find_simplex(1, {a, c, -1}));
      column.push_back(find_simplex(1, {b, c, -1}));
    }
    std::sort(column.begin(), column.end());
  }

  // standard left-to-right reduction
  std::vector<int> low_owner(static_cast<std::size_t>(total), -1);
  std::vector<OraclePair> pairs;
  for (int s = 0; s < total; ++s) {
    std::vector<int>& column = columns[static_cast<std::size_t>(s)];
    while (!column.empty()) {
      const int low = column.back();
      const int owner = low_owner[static_cast<std::size_t>(low)];
      if (owner < 0) break;
      // xor with the owner column
      std::vector<int> merged;
      const std::vector<int>& other = columns[static_cast<std::size_t>(owner)];
      std::set_symmetric_difference(column.begin(), column.end(), other.begin(), other.end(),
                                    std::back_inserter(merged));
      column = std::move(merged);
    }
    if (column.empty()) continue;
    const int low = column.back();
    low_owner[static_cast<std::size_t>(low)] = s;
    if (simplices[static_cast<std::size_t>(s)].dim == 2) {
      const double birth = simplices[static_cast<std::size_t>(low)].diameter;
      const double death = simplices[static_cast<std::size_t>(s)].diameter;
      if (death > birth) pairs.push_back({birth, death});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const OraclePair& a, const OraclePair& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
  });
  return pairs;
}

}  // namespace ck_test
