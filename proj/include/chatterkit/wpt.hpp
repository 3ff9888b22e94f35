#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "chatterkit/dataset.hpp"

namespace chatterkit {

// Orthonormal analysis pair; hi is the quadrature mirror of lo.
struct WaveletFilter {
  std::string name;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

// db1..db5 (Daubechies, N vanishing moments, 2N taps)
WaveletFilter wavelet_filter(const std::string& name);

struct WaveletPacketTree {
  int level = 0;
  std::string wavelet_name;
  std::vector<Eigen::VectorXd> packets;  // 2^level, frequency-ordered
  std::vector<Eigen::Index> level_lengths;  // [0] = input length
};

// Expansive (zero-padding) packet decomposition; keeping every overlapping
// coefficient makes the full-tree reconstruction exact.
WaveletPacketTree wpt_decompose(const Eigen::VectorXd& x, int level,
                                const std::string& wavelet = "db4");

// Packet energies normalized to sum 1 (all zero for a zero signal).
Eigen::VectorXd energy_ratios(const WaveletPacketTree& tree);

// Time-domain signal carried by one packet (1-based frequency index).
// Summing over all packets reproduces the decomposed signal.
Eigen::VectorXd reconstruct_packet(const WaveletPacketTree& tree, int packet_index);

using InformativePacketTable = std::map<std::string, int>;

// Level-4 defaults per dataset tag.
InformativePacketTable informative_packet_defaults();

int select_informative_packet(const std::vector<TimeSeriesRecord>& records,
                              const InformativePacketTable& table);

// Packet with the largest mean energy ratio over records labeled Unstable.
int select_informative_packet_auto(const std::vector<TimeSeriesRecord>& records, int level,
                                   const std::string& wavelet = "db4");

// mean, std, rms, peak, skewness, kurtosis, crest, clearance, shape and
// impulse factors, mean-square frequency, standard frequency, one-step
// autocorrelation, frequency center. Zero-variance input zeroes the shape
// ratios and frequency features.
Eigen::VectorXd wpt_feature_vector(const Eigen::VectorXd& x, double fs,
                                   bool* degenerate = nullptr);

std::vector<std::string> wpt_feature_names();

}  // namespace chatterkit
