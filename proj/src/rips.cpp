#include "chatterkit/rips.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "chatterkit/error.hpp"
#include "chatterkit/rng.hpp"

namespace chatterkit {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  }
  bool merge(int a, int b) {
    const int ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent[static_cast<std::size_t>(ra)] = rb;
    return true;
  }
};

struct Edge {
  double diameter;
  int u, v;
};

// XOR-merge of sorted Z/2 columns
std::vector<int> xor_columns(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      out.push_back(a[i++]);
    else if (b[j] < a[i])
      out.push_back(b[j++]);
    else {
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  return out;
}

}  // namespace

PersistenceDiagram rips_persistence_h1(const Eigen::MatrixXd& cloud_in, int max_points,
                                       std::uint64_t subsample_seed) {
  Eigen::MatrixXd cloud = cloud_in;
  if (max_points >= 4 && cloud.rows() > max_points) {
    Rng rng(mix_seed(subsample_seed, 0xda7a));
    const std::vector<int> keep =
        rng.sample_without_replacement(static_cast<int>(cloud.rows()), max_points);
    Eigen::MatrixXd sub(max_points, cloud.cols());
    for (int i = 0; i < max_points; ++i) sub.row(i) = cloud.row(keep[static_cast<std::size_t>(i)]);
    cloud = std::move(sub);
  }
  const int n = static_cast<int>(cloud.rows());
  if (n < 4) throw Error(Errc::too_few_points, "rips_persistence_h1 needs >= 4 points");

  Eigen::MatrixXd dist(n, n);
  for (int i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d = (cloud.row(i) - cloud.row(j)).norm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }

  // every simplex dies by the enclosing radius (the cone point argument)
  double enclosing = dist.rowwise().maxCoeff().minCoeff();

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({dist(u, v), u, v});
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.diameter != b.diameter) return a.diameter < b.diameter;
    return std::make_pair(a.u, a.v) < std::make_pair(b.u, b.v);
  });

  const int edge_count = static_cast<int>(edges.size());
  Eigen::MatrixXi edge_id(n, n);
  UnionFind components(n);
  std::vector<bool> creates_cycle(static_cast<std::size_t>(edge_count));
  for (int e = 0; e < edge_count; ++e) {
    edge_id(edges[static_cast<std::size_t>(e)].u, edges[static_cast<std::size_t>(e)].v) = e;
    edge_id(edges[static_cast<std::size_t>(e)].v, edges[static_cast<std::size_t>(e)].u) = e;
    creates_cycle[static_cast<std::size_t>(e)] =
        !components.merge(edges[static_cast<std::size_t>(e)].u,
                          edges[static_cast<std::size_t>(e)].v);
  }

  // Triangles stream in filtration order: edges by diameter, and for each
  // edge the triangles in which it is the maximal facet.
  std::vector<std::vector<int>> reduced(static_cast<std::size_t>(edge_count));
  std::vector<bool> paired(static_cast<std::size_t>(edge_count), false);
  std::vector<double> death_of(static_cast<std::size_t>(edge_count), 0.0);

  std::vector<int> column;
  for (int e = 0; e < edge_count; ++e) {
    const Edge& edge = edges[static_cast<std::size_t>(e)];
    if (edge.diameter > enclosing) break;
    for (int w = 0; w < n; ++w) {
      if (w == edge.u || w == edge.v) continue;
      const int e1 = edge_id(edge.u, w);
      const int e2 = edge_id(edge.v, w);
      if (e1 > e || e2 > e) continue;  // e is not this triangle's maximal facet

      column = {e1, e2, e};
      std::sort(column.begin(), column.end());
      while (!column.empty()) {
        const int low = column.back();
        if (!paired[static_cast<std::size_t>(low)]) break;
        column = xor_columns(column, reduced[static_cast<std::size_t>(low)]);
      }
      if (column.empty()) continue;
      const int low = column.back();
      paired[static_cast<std::size_t>(low)] = true;
      death_of[static_cast<std::size_t>(low)] = edge.diameter;
      reduced[static_cast<std::size_t>(low)] = column;
    }
  }

  PersistenceDiagram diagram;
  for (int e = 0; e < edge_count; ++e) {
    if (!creates_cycle[static_cast<std::size_t>(e)] || !paired[static_cast<std::size_t>(e)])
      continue;
    const double birth = edges[static_cast<std::size_t>(e)].diameter;
    const double death = death_of[static_cast<std::size_t>(e)];
    if (death > birth) diagram.push_back({birth, death});
  }
  std::sort(diagram.begin(), diagram.end(), [](const PersistencePair& a, const PersistencePair& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
  });
  return diagram;
}

void save_diagram(const PersistenceDiagram& diagram, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  char buf[96];
  for (const auto& pair : diagram) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", pair.birth, pair.death);
    out << buf;
  }
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

PersistenceDiagram load_diagram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::missing_file, path.string());
  PersistenceDiagram diagram;
  double b = 0.0, d = 0.0;
  while (in >> b >> d) diagram.push_back({b, d});
  return diagram;
}

}  // namespace chatterkit
