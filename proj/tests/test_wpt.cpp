#include <doctest.h>

#include <cmath>

#include "chatterkit/error.hpp"
#include "chatterkit/rng.hpp"
#include "chatterkit/wpt.hpp"

using namespace chatterkit;

namespace {

Eigen::VectorXd random_signal(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.normal();
  return x;
}

Eigen::VectorXd tone(double freq, double fs, int n) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = std::sin(2.0 * M_PI * freq * i / fs);
  return x;
}

Eigen::VectorXd sum_all_reconstructions(const WaveletPacketTree& tree) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(tree.level_lengths.front());
  for (int p = 1; p <= static_cast<int>(tree.packets.size()); ++p)
    sum += reconstruct_packet(tree, p);
  return sum;
}

}  // namespace

TEST_CASE("daubechies filters are orthonormal quadrature mirrors") {
  for (const char* name : {"db1", "db2", "db3", "db4", "db5"}) {
    const WaveletFilter f = wavelet_filter(name);
    CHECK(f.lo.sum() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(f.lo.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(f.hi.sum()) < 1e-12);
    // double-shift orthogonality
    const Eigen::Index taps = f.lo.size();
    for (Eigen::Index shift = 2; shift < taps; shift += 2) {
      double dot = 0.0;
      for (Eigen::Index i = 0; i + shift < taps; ++i) dot += f.lo[i] * f.lo[i + shift];
      CHECK(std::abs(dot) < 1e-12);
    }
  }
  CHECK_THROWS_AS(wavelet_filter("sym4"), Error);
}

TEST_CASE("packet counts follow 2^k") {
  const Eigen::VectorXd x = random_signal(256, 1);
  for (int level = 1; level <= 4; ++level)
    CHECK(wpt_decompose(x, level, "db2").packets.size() == (1u << level));
}

TEST_CASE("full packet set reconstructs the signal") {
  // odd and even lengths, several wavelets
  for (const char* wavelet : {"db1", "db2", "db4"}) {
    for (const int n : {64, 101, 500}) {
      const Eigen::VectorXd x = random_signal(n, 7 + n);
      const WaveletPacketTree tree = wpt_decompose(x, 3, wavelet);
      const Eigen::VectorXd rec = sum_all_reconstructions(tree);
      CHECK((rec - x).norm() <= 1e-8 * x.norm());
    }
  }
}

TEST_CASE("low tone concentrates in packet 1 and band tones follow frequency order") {
  const double fs = 1000.0;
  const int level = 3;  // 8 bands of 62.5 Hz
  const Eigen::VectorXd low = tone(20.0, fs, 2048);
  const WaveletPacketTree tree = wpt_decompose(low, level, "db4");
  const Eigen::VectorXd ratios = energy_ratios(tree);
  Eigen::Index argmax = 0;
  ratios.maxCoeff(&argmax);
  CHECK(argmax == 0);
  CHECK(ratios.sum() == doctest::Approx(1.0).epsilon(1e-9));

  // swept tone: packet index moves monotonically with frequency
  Eigen::Index previous = 0;
  for (const double freq : {30.0, 90.0, 160.0, 220.0, 280.0, 340.0, 410.0, 470.0}) {
    const WaveletPacketTree t = wpt_decompose(tone(freq, fs, 2048), level, "db4");
    Eigen::Index band = 0;
    energy_ratios(t).maxCoeff(&band);
    CHECK(band >= previous);
    previous = band;
  }
}

TEST_CASE("tone in band 3 puts the energy argmax at packet 3") {
  const double fs = 1000.0;  // level-3 bands are 62.5 Hz wide
  // band 3 covers 125..187.5 Hz
  const Eigen::VectorXd x = tone(155.0, fs, 4096);
  const Eigen::VectorXd ratios = energy_ratios(wpt_decompose(x, 3, "db4"));
  Eigen::Index argmax = 0;
  ratios.maxCoeff(&argmax);
  CHECK(argmax + 1 == 3);
  CHECK(ratios[argmax] > 0.8);
}

TEST_CASE("zero signal gives all-zero ratios") {
  const Eigen::VectorXd ratios = energy_ratios(wpt_decompose(Eigen::VectorXd::Zero(128), 2, "db2"));
  CHECK(ratios.sum() == 0.0);
}

TEST_CASE("single packet reconstruction keeps band energy") {
  const double fs = 1000.0;
  const Eigen::VectorXd x = tone(155.0, fs, 4096);  // band 3 of level 3
  const WaveletPacketTree tree = wpt_decompose(x, 3, "db4");
  const Eigen::VectorXd rec = reconstruct_packet(tree, 3);
  CHECK(rec.size() == x.size());
  CHECK(rec.squaredNorm() >= 0.8 * x.squaredNorm());

  try {
    reconstruct_packet(tree, 9);
    FAIL("expected IndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::index_out_of_range);
  }
}

TEST_CASE("signal shorter than 2^level is rejected") {
  try {
    wpt_decompose(Eigen::VectorXd::Zero(15), 4, "db2");
    FAIL("expected SignalTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::signal_too_short);
  }
}

TEST_CASE("informative packet table lookups") {
  const auto table = informative_packet_defaults();
  const auto mk = [](const std::string& tag, StabilityLabel label) {
    TimeSeriesRecord rec;
    rec.samples = Eigen::VectorXd::Zero(32);
    rec.label = label;
    rec.dataset_tag = tag;
    return rec;
  };
  CHECK(select_informative_packet({mk("turning-5.08cm", StabilityLabel::Stable)}, table) == 3);
  CHECK(select_informative_packet({mk("turning-6.35cm", StabilityLabel::Stable)}, table) == 4);
  CHECK(select_informative_packet({mk("turning-8.89cm", StabilityLabel::Stable)}, table) == 6);
  CHECK(select_informative_packet({mk("turning-11.43cm", StabilityLabel::Stable)}, table) == 10);
  CHECK(select_informative_packet({mk("milling", StabilityLabel::Stable)}, table) == 3);
}

TEST_CASE("auto packet selection finds the chatter band") {
  // synthetic corpus: unstable records carry a tone in level-4 band 6
  const double fs = 10000.0;  // band width 312.5 Hz, band 6 = 1562.5..1875
  Rng rng(99);
  std::vector<TimeSeriesRecord> records;
  for (int i = 0; i < 6; ++i) {
    TimeSeriesRecord rec;
    rec.dataset_tag = "synthetic";
    rec.fs = fs;
    rec.samples = random_signal(4000, 100 + i) * 0.1;
    if (i % 2 == 0) {
      rec.label = StabilityLabel::Unstable;
      rec.samples += 5.0 * tone(1700.0, fs, 4000);
    } else {
      rec.label = StabilityLabel::Stable;
    }
    records.push_back(std::move(rec));
  }
  CHECK(select_informative_packet_auto(records, 4, "db4") == 6);

  for (auto& rec : records) rec.label = StabilityLabel::Stable;
  try {
    select_informative_packet_auto(records, 4, "db4");
    FAIL("expected NoUnstableRecords");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_unstable_records);
  }
}

TEST_CASE("feature vector closed forms on a unit sine") {
  const double fs = 1000.0;
  const int n = 100000;
  const Eigen::VectorXd x = tone(10.0, fs, n);
  bool degenerate = true;
  const Eigen::VectorXd f = wpt_feature_vector(x, fs, &degenerate);
  REQUIRE(f.size() == 14);
  CHECK(!degenerate);
  CHECK(f[0] == doctest::Approx(0.0).epsilon(1e-6));              // mean
  CHECK(f[2] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));  // rms
  CHECK(f[3] == doctest::Approx(1.0).epsilon(1e-3));              // peak
  CHECK(f[6] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));   // crest
  // shape factor of a sine: rms / mean|x| = (1/sqrt2)/(2/pi)
  CHECK(f[8] == doctest::Approx((1.0 / std::sqrt(2.0)) / (2.0 / M_PI)).epsilon(1e-3));
  // frequency center of a pure tone is the tone frequency
  CHECK(f[13] == doctest::Approx(10.0).epsilon(1e-2));
  CHECK(f[10] == doctest::Approx(100.0).epsilon(1e-2));  // mean square frequency
}

TEST_CASE("gaussian noise moments") {
  const Eigen::VectorXd x = random_signal(100000, 2024);
  const Eigen::VectorXd f = wpt_feature_vector(x, 1000.0);
  CHECK(std::abs(f[4]) < 0.05);         // skewness
  CHECK(f[5] == doctest::Approx(3.0).epsilon(0.04));  // kurtosis, non-excess
}

TEST_CASE("constant signal is degenerate with documented conventions") {
  bool degenerate = false;
  const Eigen::VectorXd f = wpt_feature_vector(Eigen::VectorXd::Constant(512, -2.0), 100.0,
                                               &degenerate);
  CHECK(degenerate);
  CHECK(f[0] == doctest::Approx(-2.0));
  CHECK(f[1] == 0.0);               // std
  CHECK(f[2] == doctest::Approx(2.0));  // rms = |c|
  CHECK(f[3] == doctest::Approx(2.0));  // peak
  for (const int i : {4, 5, 6, 7, 8, 9, 10, 11, 12, 13}) CHECK(f[i] == 0.0);
}

TEST_CASE("determinism") {
  const Eigen::VectorXd x = random_signal(1000, 55);
  const Eigen::VectorXd a = wpt_feature_vector(x, 100.0);
  const Eigen::VectorXd b = wpt_feature_vector(x, 100.0);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}
