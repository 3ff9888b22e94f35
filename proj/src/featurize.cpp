#include "chatterkit/featurize.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "chatterkit/diagram_features.hpp"
#include "chatterkit/embedding.hpp"
#include "chatterkit/error.hpp"
#include "chatterkit/parallel.hpp"
#include "chatterkit/rng.hpp"

namespace chatterkit {

Eigen::VectorXi record_labels(const std::vector<TimeSeriesRecord>& records) {
  Eigen::VectorXi labels(static_cast<Eigen::Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const StabilityLabel label = records[i].label;
    if (label != StabilityLabel::Stable && label != StabilityLabel::Unstable)
      throw Error(Errc::invalid_argument, "record " + records[i].id + " is not binarized");
    labels[static_cast<Eigen::Index>(i)] = label == StabilityLabel::Unstable ? 1 : 0;
  }
  return labels;
}

std::vector<std::string> record_ids(const std::vector<TimeSeriesRecord>& records) {
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const auto& rec : records) ids.push_back(rec.id);
  return ids;
}

namespace {

FeatureMatrix assemble(const std::vector<TimeSeriesRecord>& records,
                       std::vector<std::string> names,
                       const std::function<Eigen::VectorXd(std::size_t)>& fn) {
  FeatureMatrix fm;
  fm.record_ids = record_ids(records);
  fm.labels = record_labels(records);
  fm.feature_names = std::move(names);
  fm.values.resize(static_cast<Eigen::Index>(records.size()),
                   static_cast<Eigen::Index>(fm.feature_names.size()));
  parallel_for(records.size(), [&](std::size_t i) {
    fm.values.row(static_cast<Eigen::Index>(i)) = fn(i).transpose();
  });
  fm.validate();
  return fm;
}

}  // namespace

FeatureMatrix fpa_features(const std::vector<TimeSeriesRecord>& records, const FpaConfig& cfg) {
  if (records.empty()) throw Error(Errc::empty_dataset, "fpa_features without records");
  return assemble(records, fpa_feature_names(cfg.n_peaks), [&](std::size_t i) {
    return fpa_feature_vector(records[i].samples, records[i].fs, cfg);
  });
}

FeatureMatrix wpt_features(const std::vector<TimeSeriesRecord>& records,
                           const WptDriverConfig& cfg) {
  if (records.empty()) throw Error(Errc::empty_dataset, "wpt_features without records");
  int packet = 0;
  if (cfg.packet == "auto") {
    packet = select_informative_packet_auto(records, cfg.level, cfg.wavelet);
  } else if (cfg.packet == "table") {
    packet = select_informative_packet(records, informative_packet_defaults());
  } else {
    try {
      packet = std::stoi(cfg.packet);
    } catch (const std::exception&) {
      throw Error(Errc::invalid_argument, "wpt packet must be auto, table or an index");
    }
  }
  if (packet < 1 || packet > (1 << cfg.level))
    throw Error(Errc::index_out_of_range, "informative packet outside 1..2^level");

  return assemble(records, wpt_feature_names(), [&](std::size_t i) {
    const WaveletPacketTree tree = wpt_decompose(records[i].samples, cfg.level, cfg.wavelet);
    return wpt_feature_vector(reconstruct_packet(tree, packet), records[i].fs);
  });
}

FeatureMatrix eemd_features(const std::vector<TimeSeriesRecord>& records,
                            const EemdDriverConfig& cfg) {
  if (records.empty()) throw Error(Errc::empty_dataset, "eemd_features without records");

  // fix the informative IMF index from a small sample, as one would by
  // inspecting a couple of spectra
  const std::size_t sample =
      std::min<std::size_t>(records.size(), static_cast<std::size_t>(std::max(1, cfg.selection_sample)));
  std::vector<int> votes(static_cast<std::size_t>(sample));
  parallel_for(sample, [&](std::size_t i) {
    const auto& rec = records[i];
    const ImfSet set = eemd(rec.samples, cfg.ensemble_size, cfg.noise_std_fraction,
                            mix_seed(cfg.seed, i));
    votes[i] = select_informative_imf(set, rec.samples, rec.fs);
  });
  std::map<int, int> tally;
  for (const int v : votes) ++tally[v];
  int informative = 0, best_count = -1;
  for (const auto& [index, count] : tally) {
    if (count > best_count) {
      informative = index;
      best_count = count;
    }
  }

  return assemble(records, eemd_feature_names(), [&, informative](std::size_t i) {
    const ImfSet set = eemd(records[i].samples, cfg.ensemble_size, cfg.noise_std_fraction,
                            mix_seed(cfg.seed, i));
    const std::size_t idx =
        std::min<std::size_t>(static_cast<std::size_t>(informative), set.imfs.size() - 1);
    return eemd_feature_vector(set.imfs[idx], records[i].samples);
  });
}

std::vector<PersistenceDiagram> record_diagrams(const std::vector<TimeSeriesRecord>& records,
                                                const TdaDriverConfig& cfg) {
  std::vector<PersistenceDiagram> diagrams(records.size());
  parallel_for(records.size(), [&](std::size_t i) {
    const auto& rec = records[i];
    const DelayEstimate delay = estimate_delay(rec.samples, rec.fs);
    const DimensionEstimate dim =
        estimate_dimension_fnn(rec.samples, delay.delay, cfg.fnn_threshold, cfg.max_dimension);
    const Eigen::MatrixXd cloud = takens_embed(rec.samples, {dim.dimension, delay.delay});
    diagrams[i] = rips_persistence_h1(cloud, cfg.max_points, mix_seed(cfg.subsample_seed, i));
  });
  return diagrams;
}

FeatureMatrix carlsson_features(const std::vector<TimeSeriesRecord>& records,
                                const std::vector<PersistenceDiagram>& diagrams) {
  if (records.size() != diagrams.size())
    throw Error(Errc::dimension_mismatch, "diagram count != record count");
  FeatureMatrix fm;
  fm.record_ids = record_ids(records);
  fm.labels = record_labels(records);
  fm.feature_names = {"cc_f1", "cc_f2", "cc_f3", "cc_f4", "cc_f5"};
  fm.values.resize(static_cast<Eigen::Index>(records.size()), 5);
  for (std::size_t i = 0; i < diagrams.size(); ++i)
    fm.values.row(static_cast<Eigen::Index>(i)) = carlsson_coordinates(diagrams[i]).transpose();
  fm.validate();
  return fm;
}

}  // namespace chatterkit
