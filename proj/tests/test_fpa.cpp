#include <doctest.h>

#include <cmath>

#include "chatterkit/error.hpp"
#include "chatterkit/fpa.hpp"
#include "chatterkit/rng.hpp"

using namespace chatterkit;

TEST_CASE("mph formula") {
  CHECK(min_peak_height(0.0, 10.0, 0.1) == doctest::Approx(1.0));
  CHECK(min_peak_height(2.0, 4.0, 0.5) == doctest::Approx(3.0));
  CHECK(min_peak_height(-1.0, 1.0, 0.0) == doctest::Approx(-1.0));
}

TEST_CASE("percentile uses linear interpolation") {
  Eigen::VectorXd v(5);
  v << 10.0, 0.0, 20.0, 40.0, 30.0;
  CHECK(percentile(v, 0.0) == doctest::Approx(0.0));
  CHECK(percentile(v, 50.0) == doctest::Approx(20.0));
  CHECK(percentile(v, 100.0) == doctest::Approx(40.0));
  CHECK(percentile(v, 25.0) == doctest::Approx(10.0));
  CHECK(percentile(v, 95.0) == doctest::Approx(38.0));
}

TEST_CASE("greedy gating keeps the taller of two close peaks") {
  // hand-enumerated: strict maxima at x=1000 (h=5) and x=1200 (h=4), 200
  // apart; with mpd=500 the greedy pass keeps only the taller one
  SpectrumEstimate spec;
  const int n = 21;
  spec.abscissa = Eigen::VectorXd::LinSpaced(n, 0.0, 2000.0);
  spec.ordinate = Eigen::VectorXd::Zero(n);
  spec.ordinate[10] = 5.0;  // x = 1000
  spec.ordinate[12] = 4.0;  // x = 1200
  const PeakSet peaks = detect_peaks(spec, 0.05, 500.0);
  REQUIRE(peaks.peaks.size() == 1);
  CHECK(peaks.peaks[0].abscissa == doctest::Approx(1000.0));
  CHECK(peaks.peaks[0].ordinate == doctest::Approx(5.0));

  const PeakSet relaxed = detect_peaks(spec, 0.05, 150.0);
  REQUIRE(relaxed.peaks.size() == 2);
  CHECK(relaxed.peaks[0].ordinate >= relaxed.peaks[1].ordinate);
}

TEST_CASE("peak sets respect both gates on random spectra") {
  Rng rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 64 + static_cast<int>(rng.below(200));
    SpectrumEstimate spec;
    spec.abscissa = Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
    spec.ordinate.resize(n);
    for (int i = 0; i < n; ++i) spec.ordinate[i] = rng.uniform();
    const double mpd = 1.0 + rng.uniform() * 20.0;
    const double alpha = rng.uniform();
    const PeakSet peaks = detect_peaks(spec, alpha, mpd);
    CHECK(peaks.mph ==
          doctest::Approx(min_peak_height(percentile(spec.ordinate, 5.0),
                                          percentile(spec.ordinate, 95.0), alpha)));
    for (std::size_t i = 0; i < peaks.peaks.size(); ++i) {
      CHECK(peaks.peaks[i].ordinate >= peaks.mph);
      if (i > 0) CHECK(peaks.peaks[i - 1].ordinate >= peaks.peaks[i].ordinate);
      for (std::size_t j = i + 1; j < peaks.peaks.size(); ++j)
        CHECK(std::abs(peaks.peaks[i].abscissa - peaks.peaks[j].abscissa) >= mpd);
    }
  }
}

TEST_CASE("fpa vector is 6 per peak with the tone leading the fft block") {
  const double fs = 10000.0;
  const int n = 8000;
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = std::sin(2.0 * M_PI * 1200.0 * i / fs);

  FpaConfig cfg;
  const Eigen::VectorXd f = fpa_feature_vector(x, fs, cfg);
  REQUIRE(f.size() == 12);
  // the fft block's first peak sits at the tone frequency
  CHECK(f[0] == doctest::Approx(1200.0).epsilon(0.01));
  CHECK(f[1] > 0.0);
  // psd block peak frequency
  CHECK(f[4] == doctest::Approx(1200.0).epsilon(0.05));

  CHECK(fpa_feature_names(2).size() == 12);
}

TEST_CASE("missing peaks pad with zeros") {
  // a single spike has one qualifying candidate
  SpectrumEstimate spec;
  spec.abscissa = Eigen::VectorXd::LinSpaced(11, 0.0, 10.0);
  spec.ordinate = Eigen::VectorXd::Zero(11);
  spec.ordinate[5] = 1.0;
  CHECK(detect_peaks(spec, 0.1, 2.0).peaks.size() == 1);

  // constant signal: no strict interior maxima anywhere, whole vector pads
  const Eigen::VectorXd constant = Eigen::VectorXd::Constant(4096, 2.0);
  const Eigen::VectorXd f = fpa_feature_vector(constant, 1000.0);
  REQUIRE(f.size() == 12);
  CHECK(f.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("identical records give identical vectors") {
  Rng rng(5);
  Eigen::VectorXd x(4096);
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
  const Eigen::VectorXd a = fpa_feature_vector(x, 1000.0);
  const Eigen::VectorXd b = fpa_feature_vector(x, 1000.0);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scaling scales fft ordinates and keeps acf abscissas") {
  Rng rng(17);
  const double fs = 1000.0;
  Eigen::VectorXd x(4096);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x[i] = std::sin(2.0 * M_PI * 50.0 * i / fs) + 0.1 * rng.normal();
  FpaConfig cfg;
  cfg.mpd = 100.0;
  const Eigen::VectorXd base = fpa_feature_vector(x, fs, cfg);
  const Eigen::VectorXd scaled = fpa_feature_vector(3.0 * x, fs, cfg);
  CHECK(scaled[1] == doctest::Approx(3.0 * base[1]).epsilon(1e-9));  // fft ordinate
  CHECK(scaled[8] == doctest::Approx(base[8]).epsilon(1e-12));       // acf lag unchanged
}
