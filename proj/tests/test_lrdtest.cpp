#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "sphlrd/lrdtest.hpp"
#include "sphlrd/rng.hpp"

using namespace sphlrd;

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

CoefficientSeries random_series(int max_degree, int T, std::uint64_t seed) {
  CoefficientSeries series;
  series.sieve = SieveBasis::from_max_degree(max_degree);
  series.values.resize(T, series.sieve.size);
  Rng rng(seed);
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < series.sieve.size; ++c)
      series.values(t, c) = rng.gaussian();
  return series;
}

CoefficientSeries zero_series(int max_degree, int T) {
  CoefficientSeries series;
  series.sieve = SieveBasis::from_max_degree(max_degree);
  series.values = Eigen::MatrixXd::Zero(T, series.sieve.size);
  return series;
}

WeightKernel weights_for(int T) {
  return WeightKernel::epanechnikov(std::pow(static_cast<double>(T), -0.25));
}

}  // namespace

TEST_CASE("statistic of the zero series is the zero kernel") {
  const TestStatistic stat = test_statistic(zero_series(2, 256), weights_for(256));
  CHECK(stat.kernel.norm() == 0.0);
  CHECK(stat.window_frequencies >= 3);
}

TEST_CASE("statistic window rejects sample sizes with an empty window") {
  // T = 16, B = 16^{-1/4} = 0.5: half-width 0.354 < grid step 0.393.
  CHECK_THROWS_WITH_AS(
      test_statistic(random_series(0, 16, 1), weights_for(16)),
      doctest::Contains("increase T or the bandwidth"),
      std::invalid_argument);
}

TEST_CASE("constant spectral estimates integrate to sqrt(T B_T) C") {
  const int T = 512;
  const double B = std::pow(static_cast<double>(T), -0.25);
  const SieveBasis sieve = SieveBasis::from_max_degree(1);
  const double c = 2.75;
  const auto constant = [&](double) {
    return Eigen::MatrixXcd::Identity(sieve.size, sieve.size) * c;
  };
  const TestStatistic stat =
      statistic_from_spectral_estimate(T, B, sieve, constant);
  const double expected = std::sqrt(static_cast<double>(T) * B) * c;
  const double grid_error = kTwoPi * std::sqrt(static_cast<double>(T)) / T * c;
  for (int i = 0; i < sieve.size; ++i)
    CHECK(std::abs(stat.kernel(i, i) - expected) <= grid_error + 1e-12);
}

TEST_CASE("statistic equals the direct weighted-periodogram window sum") {
  // Two routes: the production path collapses the window sum into per-ordinate
  // weights; the hook sums weighted periodograms frequency by frequency.
  const int T = 384;
  const CoefficientSeries series = random_series(2, T, 2);
  const WeightKernel wk = weights_for(T);
  const FdftGrid grid(series);
  const TestStatistic fast = test_statistic(grid, wk);
  const TestStatistic direct = statistic_from_spectral_estimate(
      T, wk.bandwidth(), series.sieve,
      [&](double w) { return grid.weighted_periodogram(w, wk).entries; });
  CHECK((fast.kernel - direct.kernel).norm() <=
        1e-9 * (1.0 + direct.kernel.norm()));
}

TEST_CASE("statistic is quadratic in the series scale") {
  const int T = 300;
  CoefficientSeries series = random_series(1, T, 3);
  const TestStatistic base = test_statistic(series, weights_for(T));
  series.values *= 3.0;
  const TestStatistic scaled = test_statistic(series, weights_for(T));
  CHECK((scaled.kernel - 9.0 * base.kernel).norm() <=
        1e-10 * scaled.kernel.norm());
}

TEST_CASE("statistic kernel is symmetric") {
  const TestStatistic stat =
      test_statistic(random_series(2, 257, 4), weights_for(257));
  CHECK((stat.kernel - stat.kernel.transpose()).norm() <=
        1e-10 * stat.kernel.norm());
}

TEST_CASE("hs_norm on reference kernels") {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(9, 9);
  CHECK(hs_norm(zero) == 0.0);
  CHECK(hs_norm(identity) == doctest::Approx(3.0));
  Eigen::VectorXd u(3);
  u << 2.0, 0.0, 0.0;  // |u| = 2
  const Eigen::MatrixXd rank_one = u * u.transpose();
  CHECK(hs_norm(rank_one) == doctest::Approx(4.0));
}

TEST_CASE("eigenspace blocks partition the statistic") {
  const TestStatistic stat =
      test_statistic(random_series(3, 200, 5), weights_for(200));
  CHECK(eigenspace_block(stat, 0).rows() == 1);
  CHECK(eigenspace_block(stat, 0)(0, 0) == stat.kernel(0, 0));
  double block_sq = 0.0;
  for (int n = 0; n <= 3; ++n) block_sq += eigenspace_block(stat, n).squaredNorm();
  CHECK(block_sq <= stat.kernel.squaredNorm() + 1e-12);

  // Extraction is idempotent under re-embedding.
  Eigen::MatrixXd embedded = Eigen::MatrixXd::Zero(16, 16);
  embedded.block(4, 4, 5, 5) = eigenspace_block(stat, 2);
  TestStatistic copy = stat;
  copy.kernel = embedded;
  CHECK((eigenspace_block(copy, 2) - eigenspace_block(stat, 2)).norm() == 0.0);

  CHECK_THROWS_AS(eigenspace_block(stat, 4), std::invalid_argument);
}

TEST_CASE("default projections: norm, support, determinism") {
  const SieveBasis sieve = SieveBasis::from_max_degree(4);
  const auto dirs = default_projections(sieve, 99);
  REQUIRE(dirs.size() == 6);
  for (const auto& d : dirs) {
    CHECK(std::abs(d.u.norm() - 1.0) < 1e-12);
    CHECK(std::abs(d.v.norm() - 1.0) < 1e-12);
    CHECK(d.u[0] == 0.0);  // degree 0 excluded
    for (int i = 16; i < sieve.size; ++i) CHECK(d.u[i] == 0.0);
  }
  const auto again = default_projections(sieve, 99);
  for (std::size_t m = 0; m < dirs.size(); ++m)
    CHECK((dirs[m].u - again[m].u).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(default_projections(SieveBasis::from_max_degree(2), 1),
                  std::invalid_argument);
}

TEST_CASE("calibration critical value at level 0.05") {
  const int T = 512;
  const CoefficientSeries series = random_series(3, T, 6);
  const auto dirs = default_projections(series.sieve, 7);
  const TestOutcome outcome =
      null_calibration(series, weights_for(T), dirs, 0.05);
  CHECK(outcome.critical_value == doctest::Approx(1.959964).epsilon(1e-6));
  REQUIRE(outcome.projections.size() == 6);
  for (const auto& p : outcome.projections) {
    CHECK(p.reject == (std::abs(p.z) > outcome.critical_value));
    CHECK(!p.degenerate);
  }
  CHECK(outcome.block_norms.size() == 4);
}

TEST_CASE("zero data flags degenerate directions instead of rejecting") {
  const int T = 512;
  const CoefficientSeries series = zero_series(3, T);
  const auto dirs = default_projections(series.sieve, 8);
  const TestOutcome outcome =
      null_calibration(series, weights_for(T), dirs, 0.05);
  for (const auto& p : outcome.projections) {
    CHECK(p.degenerate);
    CHECK(!p.reject);
  }
  CHECK(outcome.hs_norm == 0.0);
}

TEST_CASE("standardized projections are scale invariant") {
  const int T = 800;
  CoefficientSeries series = random_series(3, T, 9);
  const auto dirs = default_projections(series.sieve, 10);
  const TestOutcome base = null_calibration(series, weights_for(T), dirs, 0.05);
  series.values *= 7.5;
  const TestOutcome scaled =
      null_calibration(series, weights_for(T), dirs, 0.05);
  for (std::size_t m = 0; m < dirs.size(); ++m)
    CHECK(scaled.projections[m].z ==
          doctest::Approx(base.projections[m].z).epsilon(1e-8));
}

TEST_CASE("calibrated Z values are roughly standard normal under white noise") {
  const int T = 2048;
  const SieveBasis sieve = SieveBasis::from_max_degree(3);
  const auto dirs = default_projections(sieve, 11);
  const WeightKernel wk = weights_for(T);
  double sum = 0.0, sum_sq = 0.0;
  int rejects = 0, count = 0;
  for (int r = 0; r < 60; ++r) {
    const CoefficientSeries series = random_series(3, T, 400 + r);
    const TestOutcome outcome = null_calibration(series, wk, dirs, 0.05);
    for (const auto& p : outcome.projections) {
      sum += p.z;
      sum_sq += p.z * p.z;
      rejects += p.reject ? 1 : 0;
      ++count;
    }
  }
  const double mean = sum / count;
  const double var = sum_sq / count - mean * mean;
  CHECK(std::abs(mean) < 0.2);
  CHECK(var > 0.6);
  CHECK(var < 1.6);
  CHECK(rejects < count / 4);
}

TEST_CASE("test outcome serializes to JSON") {
  const int T = 400;
  const CoefficientSeries series = random_series(3, T, 12);
  const auto dirs = default_projections(series.sieve, 13);
  const TestOutcome outcome =
      null_calibration(series, weights_for(T), dirs, 0.05);
  const nlohmann::json j = to_json(outcome);
  CHECK(j["z"].size() == 6);
  CHECK(j["reject"].size() == 6);
  CHECK(j["hs_norm"].get<double>() == doctest::Approx(outcome.hs_norm));
  CHECK(j["critical_value"].get<double>() ==
        doctest::Approx(outcome.critical_value));
}
