#include "chatterkit/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "chatterkit/error.hpp"
#include "chatterkit/parallel.hpp"

namespace chatterkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd znormalized(const Eigen::VectorXd& x) {
  const double mean = x.mean();
  const double sd = std::sqrt((x.array() - mean).square().sum() / static_cast<double>(x.size()));
  if (sd <= 0.0) return Eigen::VectorXd::Zero(x.size());
  return (x.array() - mean) / sd;
}

int max_straight_moves(double slope_p) {
  if (slope_p <= 0.0) return std::numeric_limits<int>::max();
  return std::max(1, static_cast<int>(std::lround(1.0 / slope_p)));
}

}  // namespace

double dtw_distance(const Eigen::VectorXd& x_in, const Eigen::VectorXd& y_in,
                    const DtwConfig& cfg) {
  if (x_in.size() == 0 || y_in.size() == 0)
    throw Error(Errc::empty_input, "dtw_distance on empty series");
  const Eigen::VectorXd x = cfg.znormalize ? znormalized(x_in) : x_in;
  const Eigen::VectorXd y = cfg.znormalize ? znormalized(y_in) : y_in;

  const Eigen::Index m = x.size();
  const Eigen::Index n = y.size();
  const Eigen::Index window = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::lround(cfg.window_fraction * std::max(m, n))));
  if (std::abs(m - n) > window)
    throw Error(Errc::infeasible_window,
                "length difference " + std::to_string(std::abs(m - n)) + " exceeds band " +
                    std::to_string(window));

  const int straight_cap = max_straight_moves(cfg.slope_p);
  const int states = straight_cap == std::numeric_limits<int>::max()
                         ? 1
                         : straight_cap + 1;  // consecutive non-diagonal moves so far

  // rolling rows over the banded grid; state 0 = last move diagonal/start
  const Eigen::Index width = 2 * window + 1;
  Eigen::MatrixXd prev(width, states), cur(width, states);
  const auto col_of = [&](Eigen::Index i, Eigen::Index j) { return j - i + window; };

  prev.setConstant(kInf);
  cur.setConstant(kInf);
  // row i = 0
  {
    const Eigen::Index j_hi = std::min<Eigen::Index>(n - 1, window);
    prev(col_of(0, 0), 0) = std::abs(x[0] - y[0]);
    for (Eigen::Index j = 1; j <= j_hi; ++j) {
      const int s = states == 1 ? 0 : static_cast<int>(std::min<Eigen::Index>(j, states - 1));
      if (states > 1 && j > straight_cap) break;  // too many horizontal moves
      const double base = prev(col_of(0, j - 1), states == 1 ? 0 : s - (states == 1 ? 0 : 1));
      if (base < kInf) prev(col_of(0, j), s) = base + std::abs(x[0] - y[j]);
    }
  }

  for (Eigen::Index i = 1; i < m; ++i) {
    cur.setConstant(kInf);
    const Eigen::Index j_lo = std::max<Eigen::Index>(0, i - window);
    const Eigen::Index j_hi = std::min<Eigen::Index>(n - 1, i + window);
    for (Eigen::Index j = j_lo; j <= j_hi; ++j) {
      const double cost = std::abs(x[i] - y[j]);
      const Eigen::Index c = col_of(i, j);
      // diagonal from (i-1, j-1), any prior state
      if (j >= 1 && std::abs(i - 1 - (j - 1)) <= window) {
        const double best = prev.row(col_of(i - 1, j - 1)).minCoeff();
        if (best < kInf) cur(c, 0) = best + cost;
      }
      if (states == 1) {
        // unconstrained: vertical and horizontal fold into the same state
        if (std::abs(i - 1 - j) <= window) {
          const double v = prev(col_of(i - 1, j), 0);
          if (v + cost < cur(c, 0)) cur(c, 0) = std::min(cur(c, 0), v + cost);
        }
        if (j >= 1 && j - 1 >= j_lo) {
          const double h = cur(col_of(i, j - 1), 0);
          if (h < kInf) cur(c, 0) = std::min(cur(c, 0), h + cost);
        }
      } else {
        for (int s = 1; s < states; ++s) {
          double best = kInf;
          if (std::abs(i - 1 - j) <= window) best = prev(col_of(i - 1, j), s - 1);  // vertical
          if (j >= 1 && j - 1 >= j_lo)
            best = std::min(best, cur(col_of(i, j - 1), s - 1));  // horizontal
          if (best < kInf) cur(c, s) = best + cost;
        }
      }
    }
    std::swap(prev, cur);
  }

  const double result = prev.row(col_of(m - 1, n - 1)).minCoeff();
  if (!(result < kInf))
    throw Error(Errc::infeasible_window, "no admissible warping path under the constraints");
  return result;
}

DistanceMatrix pairwise_matrix(const std::vector<TimeSeriesRecord>& records, const DtwConfig& cfg) {
  if (records.size() < 2) throw Error(Errc::empty_dataset, "pairwise_matrix needs >= 2 records");
  const Eigen::Index n = static_cast<Eigen::Index>(records.size());
  DistanceMatrix dm;
  dm.row_ids.reserve(records.size());
  for (const auto& rec : records) dm.row_ids.push_back(rec.id);
  dm.col_ids = dm.row_ids;
  dm.values = Eigen::MatrixXd::Zero(n, n);

  std::vector<std::pair<Eigen::Index, Eigen::Index>> jobs;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) jobs.emplace_back(i, j);

  parallel_for(jobs.size(), [&](std::size_t idx) {
    const auto [i, j] = jobs[idx];
    double d = 0.0;
    try {
      d = dtw_distance(records[static_cast<std::size_t>(i)].samples,
                       records[static_cast<std::size_t>(j)].samples, cfg);
    } catch (const Error& e) {
      throw Error(e.code(), "pair (" + records[static_cast<std::size_t>(i)].id + ", " +
                                records[static_cast<std::size_t>(j)].id + "): " + e.what());
    }
    dm.values(i, j) = d;
    dm.values(j, i) = d;
  });
  return dm;
}

DistanceMatrix cross_matrix(const std::vector<TimeSeriesRecord>& source,
                            const std::vector<TimeSeriesRecord>& target, const DtwConfig& cfg) {
  if (source.empty() || target.empty())
    throw Error(Errc::empty_dataset, "cross_matrix needs non-empty source and target");
  DistanceMatrix dm;
  for (const auto& rec : target) dm.row_ids.push_back(rec.id);
  for (const auto& rec : source) dm.col_ids.push_back(rec.id);
  const Eigen::Index rows = static_cast<Eigen::Index>(target.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(source.size());
  dm.values.resize(rows, cols);

  parallel_for(static_cast<std::size_t>(rows * cols), [&](std::size_t idx) {
    const Eigen::Index i = static_cast<Eigen::Index>(idx) / cols;
    const Eigen::Index j = static_cast<Eigen::Index>(idx) % cols;
    try {
      dm.values(i, j) = dtw_distance(target[static_cast<std::size_t>(i)].samples,
                                     source[static_cast<std::size_t>(j)].samples, cfg);
    } catch (const Error& e) {
      throw Error(e.code(), "pair (" + target[static_cast<std::size_t>(i)].id + ", " +
                                source[static_cast<std::size_t>(j)].id + "): " + e.what());
    }
  });
  return dm;
}

void save_distance_matrix(const DistanceMatrix& dm, const std::filesystem::path& path,
                          const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << "id";
  for (const auto& id : dm.col_ids) out << "," << id;
  out << "\n";
  char buf[40];
  for (Eigen::Index r = 0; r < dm.values.rows(); ++r) {
    out << dm.row_ids[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < dm.values.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", dm.values(r, c));
      out << "," << buf;
    }
    out << "\n";
  }
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

DistanceMatrix load_distance_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::missing_file, path.string());
  DistanceMatrix dm;
  std::string line;
  std::vector<std::vector<double>> rows;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
      if (ch == ',') {
        cells.push_back(cell);
        cell.clear();
      } else if (ch != '\r') {
        cell.push_back(ch);
      }
    }
    cells.push_back(cell);
    if (!have_header) {
      if (cells.size() < 2 || cells[0] != "id")
        throw Error(Errc::parse_error, path.string() + ": expected id,<cols> header");
      dm.col_ids.assign(cells.begin() + 1, cells.end());
      have_header = true;
      continue;
    }
    if (cells.size() != dm.col_ids.size() + 1)
      throw Error(Errc::parse_error, path.string() + ": ragged row");
    dm.row_ids.push_back(cells[0]);
    std::vector<double> row;
    for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(std::stod(cells[i]));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::parse_error, path.string() + ": no rows");
  dm.values.resize(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(dm.col_ids.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      dm.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return dm;
}

Eigen::VectorXi knn_predict(const DistanceMatrix& test_by_train,
                            const Eigen::VectorXi& train_labels, int k) {
  const Eigen::Index cols = test_by_train.values.cols();
  if (train_labels.size() != cols)
    throw Error(Errc::dimension_mismatch, "label count != training columns");
  if (k < 1 || k > cols) throw Error(Errc::k_too_large, "need 1 <= k <= training columns");

  Eigen::VectorXi predictions(test_by_train.values.rows());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(cols));
  for (Eigen::Index r = 0; r < test_by_train.values.rows(); ++r) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return test_by_train.values(r, a) < test_by_train.values(r, b);
    });
    int votes = 0;
    for (int i = 0; i < k; ++i) votes += train_labels[order[static_cast<std::size_t>(i)]];
    predictions[r] = (2 * votes >= k) ? 1 : 0;
  }
  return predictions;
}

}  // namespace chatterkit
