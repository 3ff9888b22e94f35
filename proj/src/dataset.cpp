#include "chatterkit/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "chatterkit/rng.hpp"

namespace chatterkit {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (in >> field) {
    if (field[0] == '#') break;
    fields.push_back(field);
  }
  return fields;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, "bad " + what + " '" + s + "'");
  }
  if (pos != s.size()) throw Error(Errc::parse_error, "bad " + what + " '" + s + "'");
  return v;
}

// shortest round-trip-exact formatting for cache/report files
std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lg", &back);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char probe[40];
      std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
      std::sscanf(probe, "%lg", &back);
      if (back == v) return probe;
    }
  }
  return buf;
}

}  // namespace

StabilityLabel label_from_string(const std::string& s) {
  if (s == "stable") return StabilityLabel::Stable;
  if (s == "mild") return StabilityLabel::MildChatter;
  if (s == "unstable") return StabilityLabel::Unstable;
  if (s == "unknown") return StabilityLabel::Unknown;
  throw Error(Errc::parse_error, "unknown label '" + s + "'");
}

const char* label_to_string(StabilityLabel label) {
  switch (label) {
    case StabilityLabel::Stable: return "stable";
    case StabilityLabel::MildChatter: return "mild";
    case StabilityLabel::Unstable: return "unstable";
    case StabilityLabel::Unknown: return "unknown";
  }
  return "unknown";
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::missing_file, "cannot open manifest " + path.string());

  DatasetManifest manifest;
  const std::filesystem::path base = path.parent_path();
  std::string line;
  bool saw_fs_raw = false, saw_fs_target = false;
  while (std::getline(in, line)) {
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    const std::string& key = fields[0];
    if (key == "record") {
      if (fields.size() != 6)
        throw Error(Errc::parse_error, "record line needs <path> <rpm> <depth_mm> <label> <tag>");
      ManifestEntry entry;
      entry.path = base / fields[1];
      entry.rpm = parse_double(fields[2], "rpm");
      entry.depth_of_cut_mm = parse_double(fields[3], "depth");
      entry.label = label_from_string(fields[4]);
      entry.dataset_tag = fields[5];
      if (entry.dataset_tag.empty()) throw Error(Errc::parse_error, "empty dataset tag");
      manifest.records.push_back(std::move(entry));
    } else if (key == "name") {
      if (fields.size() != 2) throw Error(Errc::parse_error, "name needs one value");
      manifest.name = fields[1];
    } else if (key == "fs_raw") {
      manifest.fs_raw = parse_double(fields.at(1), "fs_raw");
      saw_fs_raw = true;
    } else if (key == "fs_target") {
      manifest.fs_target = parse_double(fields.at(1), "fs_target");
      saw_fs_target = true;
    } else if (key == "format") {
      if (fields.at(1) == "value")
        manifest.format = SeriesFormat::Value;
      else if (fields[1] == "time_value")
        manifest.format = SeriesFormat::TimeValue;
      else
        throw Error(Errc::parse_error, "format must be value or time_value");
    } else {
      throw Error(Errc::parse_error, "unknown manifest key '" + key + "'");
    }
  }

  if (!saw_fs_raw || manifest.fs_raw <= 0.0)
    throw Error(Errc::parse_error, "manifest needs fs_raw > 0");
  if (!saw_fs_target) manifest.fs_target = manifest.fs_raw;
  if (manifest.fs_target <= 0.0 || manifest.fs_target > manifest.fs_raw)
    throw Error(Errc::parse_error, "need 0 < fs_target <= fs_raw");
  if (manifest.records.empty()) throw Error(Errc::parse_error, "manifest lists no records");

  for (const auto& entry : manifest.records) {
    if (!std::filesystem::exists(entry.path))
      throw Error(Errc::missing_file, entry.path.string());
  }
  return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << "name " << manifest.name << "\n";
  out << "fs_raw " << format_double(manifest.fs_raw) << "\n";
  out << "fs_target " << format_double(manifest.fs_target) << "\n";
  out << "format " << (manifest.format == SeriesFormat::Value ? "value" : "time_value") << "\n";
  const std::filesystem::path base = path.parent_path();
  for (const auto& entry : manifest.records) {
    out << "record " << entry.path.lexically_relative(base).generic_string() << " "
        << format_double(entry.rpm) << " " << format_double(entry.depth_of_cut_mm) << " "
        << label_to_string(entry.label) << " " << entry.dataset_tag << "\n";
  }
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

Eigen::VectorXd load_series(const std::filesystem::path& path, SeriesFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::missing_file, path.string());
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (format == SeriesFormat::Value) {
      if (fields.size() != 1)
        throw Error(Errc::parse_error, path.string() + ": expected one value per line");
      values.push_back(parse_double(fields[0], "sample"));
    } else {
      if (fields.size() != 2)
        throw Error(Errc::parse_error, path.string() + ": expected time value pairs");
      values.push_back(parse_double(fields[1], "sample"));
    }
  }
  if (values.size() < 2) throw Error(Errc::parse_error, path.string() + ": fewer than 2 samples");
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void save_series(const Eigen::VectorXd& samples, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  for (Eigen::Index i = 0; i < samples.size(); ++i) out << format_double(samples[i]) << "\n";
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

std::vector<TimeSeriesRecord> load_records(const DatasetManifest& manifest) {
  std::vector<TimeSeriesRecord> records;
  records.reserve(manifest.records.size());
  for (const auto& entry : manifest.records) {
    TimeSeriesRecord rec;
    rec.id = entry.path.stem().string();
    rec.samples = load_series(entry.path, manifest.format);
    rec.fs = manifest.fs_raw;
    rec.rpm = entry.rpm;
    rec.depth_of_cut_mm = entry.depth_of_cut_mm;
    rec.label = entry.label;
    rec.dataset_tag = entry.dataset_tag;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<TimeSeriesRecord> binarize_labels(const std::vector<TimeSeriesRecord>& records) {
  std::vector<TimeSeriesRecord> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    if (rec.label == StabilityLabel::Unknown) continue;
    out.push_back(rec);
    if (out.back().label == StabilityLabel::MildChatter)
      out.back().label = StabilityLabel::Unstable;
  }
  return out;
}

std::vector<SplitRealization> make_splits(std::size_t source_count, std::size_t target_count,
                                          const SplitPlan& plan) {
  if (source_count == 0 || target_count == 0)
    throw Error(Errc::empty_dataset, "make_splits needs non-empty source and target");
  if (plan.train_fraction <= 0.0 || plan.train_fraction > 1.0 || plan.test_fraction <= 0.0 ||
      plan.test_fraction > 1.0)
    throw Error(Errc::invalid_argument, "split fractions must lie in (0, 1]");

  const int n_train = std::max(1, static_cast<int>(std::floor(
                                      plan.train_fraction * static_cast<double>(source_count))));
  const int n_test = std::max(1, static_cast<int>(std::floor(
                                     plan.test_fraction * static_cast<double>(target_count))));

  std::vector<SplitRealization> splits;
  splits.reserve(plan.seeds.size());
  for (const std::uint64_t seed : plan.seeds) {
    SplitRealization split;
    Rng train_rng(mix_seed(seed, 0));
    Rng test_rng(mix_seed(seed, 1));
    split.train_indices =
        train_rng.sample_without_replacement(static_cast<int>(source_count), n_train);
    split.test_indices =
        test_rng.sample_without_replacement(static_cast<int>(target_count), n_test);
    splits.push_back(std::move(split));
  }
  return splits;
}

void FeatureMatrix::validate() const {
  if (values.rows() != static_cast<Eigen::Index>(record_ids.size()))
    throw Error(Errc::dimension_mismatch, "feature rows != record ids");
  if (values.cols() != static_cast<Eigen::Index>(feature_names.size()))
    throw Error(Errc::dimension_mismatch, "feature cols != feature names");
  if (labels.size() != values.rows())
    throw Error(Errc::dimension_mismatch, "label count != feature rows");
  if (!values.allFinite())
    throw Error(Errc::degenerate_signal, "feature matrix contains NaN or inf");
}

void save_feature_matrix(const FeatureMatrix& fm, const std::filesystem::path& path,
                         const std::string& header_comment) {
  fm.validate();
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << "id,label";
  for (const auto& name : fm.feature_names) out << "," << name;
  out << "\n";
  for (Eigen::Index r = 0; r < fm.values.rows(); ++r) {
    out << fm.record_ids[static_cast<std::size_t>(r)] << "," << fm.labels[r];
    for (Eigen::Index c = 0; c < fm.values.cols(); ++c) out << "," << format_double(fm.values(r, c));
    out << "\n";
  }
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
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
  return cells;
}

}  // namespace

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::missing_file, path.string());
  std::string line;
  FeatureMatrix fm;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    if (!have_header) {
      if (cells.size() < 3 || cells[0] != "id" || cells[1] != "label")
        throw Error(Errc::parse_error, path.string() + ": expected id,label,<features> header");
      fm.feature_names.assign(cells.begin() + 2, cells.end());
      have_header = true;
      continue;
    }
    if (cells.size() != fm.feature_names.size() + 2)
      throw Error(Errc::parse_error, path.string() + ": ragged row");
    fm.record_ids.push_back(cells[0]);
    labels.push_back(static_cast<int>(parse_double(cells[1], "label")));
    std::vector<double> row;
    row.reserve(cells.size() - 2);
    for (std::size_t i = 2; i < cells.size(); ++i) row.push_back(parse_double(cells[i], "feature"));
    rows.push_back(std::move(row));
  }
  if (!have_header || rows.empty()) throw Error(Errc::parse_error, path.string() + ": no data rows");
  fm.values.resize(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(fm.feature_names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      fm.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  fm.labels.resize(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) fm.labels[static_cast<Eigen::Index>(i)] = labels[i];
  fm.validate();
  return fm;
}

}  // namespace chatterkit
