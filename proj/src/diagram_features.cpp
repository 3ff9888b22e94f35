#include "chatterkit/diagram_features.hpp"

#include <algorithm>
#include <cmath>

#include "chatterkit/error.hpp"

namespace chatterkit {

Eigen::VectorXd carlsson_coordinates(const PersistenceDiagram& diagram) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(5);
  if (diagram.empty()) return f;
  double d_max = diagram.front().death;
  for (const auto& p : diagram) d_max = std::max(d_max, p.death);
  for (const auto& p : diagram) {
    const double life = p.death - p.birth;
    const double life4 = life * life * life * life;
    f[0] += p.birth * life;
    f[1] += (d_max - p.death) * life;
    f[2] += p.birth * p.birth * life4;
    f[3] += (d_max - p.death) * (d_max - p.death) * life4;
    f[4] = std::max(f[4], life);
  }
  return f;
}

int ImageGrid::birth_bins() const {
  return std::max(1, static_cast<int>(std::ceil((birth_max - birth_min) / pixel_size - 1e-9)));
}

int ImageGrid::life_bins() const {
  return std::max(1, static_cast<int>(std::ceil((life_max - life_min) / pixel_size - 1e-9)));
}

ImageGrid fit_image_grid(const std::vector<PersistenceDiagram>& diagrams, double pixel_size,
                         double pad) {
  if (pixel_size <= 0.0) throw Error(Errc::invalid_pixel_size, "pixel size must be > 0");
  double b_lo = 0.0, b_hi = 0.0, l_lo = 0.0, l_hi = 0.0;
  bool any = false;
  for (const auto& diagram : diagrams) {
    for (const auto& p : diagram) {
      const double life = p.death - p.birth;
      if (!any) {
        b_lo = b_hi = p.birth;
        l_lo = l_hi = life;
        any = true;
      } else {
        b_lo = std::min(b_lo, p.birth);
        b_hi = std::max(b_hi, p.birth);
        l_lo = std::min(l_lo, life);
        l_hi = std::max(l_hi, life);
      }
    }
  }
  ImageGrid grid;
  grid.pixel_size = pixel_size;
  if (!any) {
    grid.birth_min = grid.life_min = 0.0;
    grid.birth_max = grid.life_max = pixel_size;
    return grid;
  }
  const double b_pad = std::max(pad * (b_hi - b_lo), pixel_size);
  const double l_pad = std::max(pad * (l_hi - l_lo), pixel_size);
  grid.birth_min = b_lo - b_pad;
  grid.birth_max = b_hi + b_pad;
  grid.life_min = std::max(0.0, l_lo - l_pad);
  grid.life_max = l_hi + l_pad;
  return grid;
}

double max_lifetime(const std::vector<PersistenceDiagram>& diagrams) {
  double cap = 0.0;
  for (const auto& diagram : diagrams)
    for (const auto& p : diagram) cap = std::max(cap, p.death - p.birth);
  return cap;
}

Eigen::VectorXd persistence_image(const PersistenceDiagram& diagram, double sigma,
                                  const ImageGrid& grid, double weight_cap) {
  if (grid.pixel_size <= 0.0) throw Error(Errc::invalid_pixel_size, "pixel size must be > 0");
  if (sigma <= 0.0) throw Error(Errc::invalid_argument, "sigma must be > 0");
  const int nb = grid.birth_bins();
  const int nl = grid.life_bins();
  Eigen::VectorXd image = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nb) * nl);
  if (diagram.empty()) return image;

  const double inv = 1.0 / (sigma * std::sqrt(2.0));
  // pixel mass of a unit Gaussian factorizes into erf differences per axis
  Eigen::VectorXd birth_edges(nb + 1), life_edges(nl + 1);
  for (int i = 0; i <= nb; ++i) birth_edges[i] = grid.birth_min + i * grid.pixel_size;
  for (int j = 0; j <= nl; ++j) life_edges[j] = grid.life_min + j * grid.pixel_size;

  for (const auto& p : diagram) {
    const double life = p.death - p.birth;
    double w = 1.0;
    if (life <= 0.0)
      w = 0.0;
    else if (weight_cap > 0.0 && life < weight_cap)
      w = life / weight_cap;
    if (w == 0.0) continue;

    Eigen::VectorXd cb(nb), cl(nl);
    for (int i = 0; i < nb; ++i)
      cb[i] = 0.5 * (std::erf((birth_edges[i + 1] - p.birth) * inv) -
                     std::erf((birth_edges[i] - p.birth) * inv));
    for (int j = 0; j < nl; ++j)
      cl[j] = 0.5 * (std::erf((life_edges[j + 1] - life) * inv) -
                     std::erf((life_edges[j] - life) * inv));
    for (int j = 0; j < nl; ++j)
      for (int i = 0; i < nb; ++i) image[static_cast<Eigen::Index>(j) * nb + i] += w * cl[j] * cb[i];
  }
  return image;
}

double LandscapeFunction::operator()(double x) const {
  const Eigen::Index n = xs.size();
  if (n == 0 || x <= xs[0] || x >= xs[n - 1]) return 0.0;
  // first node strictly right of x
  const double* begin = xs.data();
  const double* it = std::upper_bound(begin, begin + n, x);
  const Eigen::Index hi = it - begin;
  const Eigen::Index lo = hi - 1;
  const double span = xs[hi] - xs[lo];
  if (span <= 0.0) return ys[lo];
  const double t = (x - xs[lo]) / span;
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

LandscapeFunction landscape_function(const PersistenceDiagram& diagram, int k) {
  if (k < 1) throw Error(Errc::invalid_argument, "landscape number must be >= 1");
  LandscapeFunction fn;
  if (diagram.empty()) return fn;

  // breakpoints: births, deaths, apexes, and crossings of rising/falling edges
  std::vector<double> xs;
  for (const auto& p : diagram) {
    xs.push_back(p.birth);
    xs.push_back(p.death);
    xs.push_back(0.5 * (p.birth + p.death));
  }
  for (const auto& a : diagram)
    for (const auto& b : diagram) {
      const double cross = 0.5 * (a.birth + b.death);
      if (cross > a.birth && cross < b.death) xs.push_back(cross);
    }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const auto value_at = [&](double x) {
    std::vector<double> heights;
    for (const auto& p : diagram) {
      double g = 0.0;
      if (x > p.birth && x < p.death) g = std::min(x - p.birth, p.death - x);
      heights.push_back(g);
    }
    if (static_cast<std::size_t>(k) > heights.size()) return 0.0;
    std::nth_element(heights.begin(), heights.begin() + (k - 1), heights.end(),
                     std::greater<double>());
    return heights[static_cast<std::size_t>(k - 1)];
  };

  std::vector<double> node_x, node_y;
  for (const double x : xs) {
    node_x.push_back(x);
    node_y.push_back(value_at(x));
  }
  // drop interior nodes that sit exactly on the segment between neighbours
  std::vector<double> keep_x = {node_x.front()}, keep_y = {node_y.front()};
  for (std::size_t i = 1; i + 1 < node_x.size(); ++i) {
    const double t = (node_x[i] - keep_x.back()) / (node_x[i + 1] - keep_x.back());
    const double lerp = keep_y.back() + t * (node_y[i + 1] - keep_y.back());
    if (std::abs(node_y[i] - lerp) > 1e-12 * (1.0 + std::abs(node_y[i]))) {
      keep_x.push_back(node_x[i]);
      keep_y.push_back(node_y[i]);
    }
  }
  keep_x.push_back(node_x.back());
  keep_y.push_back(node_y.back());
  fn.xs = Eigen::Map<Eigen::VectorXd>(keep_x.data(), static_cast<Eigen::Index>(keep_x.size()));
  fn.ys = Eigen::Map<Eigen::VectorXd>(keep_y.data(), static_cast<Eigen::Index>(keep_y.size()));
  return fn;
}

std::vector<double> landscape_mesh(const std::vector<PersistenceDiagram>& diagrams, int k) {
  std::vector<double> mesh;
  for (const auto& diagram : diagrams) {
    const LandscapeFunction fn = landscape_function(diagram, k);
    for (Eigen::Index i = 0; i < fn.xs.size(); ++i) mesh.push_back(fn.xs[i]);
  }
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
  return mesh;
}

Eigen::MatrixXd landscape_features(const std::vector<PersistenceDiagram>& diagrams, int k,
                                   const std::vector<double>& mesh) {
  Eigen::MatrixXd features(static_cast<Eigen::Index>(diagrams.size()),
                           static_cast<Eigen::Index>(mesh.size()));
  for (std::size_t d = 0; d < diagrams.size(); ++d) {
    const LandscapeFunction fn = landscape_function(diagrams[d], k);
    for (std::size_t i = 0; i < mesh.size(); ++i)
      features(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)) = fn(mesh[i]);
  }
  return features;
}

void fit_template_meshes(const std::vector<PersistenceDiagram>& diagrams, int nodes,
                         Eigen::VectorXd& mesh_birth, Eigen::VectorXd& mesh_life, double pad) {
  if (nodes < 2) throw Error(Errc::degenerate_mesh, "template meshes need >= 2 nodes");
  double b_lo = 0.0, b_hi = 1.0, l_lo = 0.0, l_hi = 1.0;
  bool any = false;
  for (const auto& diagram : diagrams)
    for (const auto& p : diagram) {
      const double life = p.death - p.birth;
      if (!any) {
        b_lo = b_hi = p.birth;
        l_lo = l_hi = life;
        any = true;
      } else {
        b_lo = std::min(b_lo, p.birth);
        b_hi = std::max(b_hi, p.birth);
        l_lo = std::min(l_lo, life);
        l_hi = std::max(l_hi, life);
      }
    }
  const double b_pad = std::max(pad * (b_hi - b_lo), 1e-3);
  const double l_pad = std::max(pad * (l_hi - l_lo), 1e-3);
  mesh_birth = Eigen::VectorXd::LinSpaced(nodes, b_lo - b_pad, b_hi + b_pad);
  mesh_life = Eigen::VectorXd::LinSpaced(nodes, std::max(0.0, l_lo - l_pad) + 1e-9, l_hi + l_pad);
}

namespace {

double lagrange_cardinal(const Eigen::VectorXd& mesh, Eigen::Index j, double x) {
  double value = 1.0;
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    if (i == j) continue;
    value *= (x - mesh[i]) / (mesh[j] - mesh[i]);
  }
  return value;
}

}  // namespace

Eigen::MatrixXd template_function_features(const std::vector<PersistenceDiagram>& diagrams,
                                           const Eigen::VectorXd& mesh_birth,
                                           const Eigen::VectorXd& mesh_life) {
  if (mesh_birth.size() < 2 || mesh_life.size() < 2)
    throw Error(Errc::degenerate_mesh, "template meshes need >= 2 nodes");
  for (const Eigen::VectorXd* mesh : {&mesh_birth, &mesh_life})
    for (Eigen::Index i = 1; i < mesh->size(); ++i)
      if ((*mesh)[i] == (*mesh)[i - 1])
        throw Error(Errc::degenerate_mesh, "duplicate mesh node");

  const Eigen::Index na = mesh_birth.size();
  const Eigen::Index nb = mesh_life.size();
  Eigen::MatrixXd features =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(diagrams.size()), na * nb);
  for (std::size_t d = 0; d < diagrams.size(); ++d) {
    for (const auto& p : diagrams[d]) {
      const double life = p.death - p.birth;
      for (Eigen::Index i = 0; i < na; ++i) {
        const double la = lagrange_cardinal(mesh_birth, i, p.birth);
        for (Eigen::Index j = 0; j < nb; ++j) {
          const double lb = lagrange_cardinal(mesh_life, j, life);
          features(static_cast<Eigen::Index>(d), i * nb + j) += std::abs(la * lb);
        }
      }
    }
  }
  return features;
}

}  // namespace chatterkit
