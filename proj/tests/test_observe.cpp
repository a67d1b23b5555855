#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "sphlrd/observe.hpp"
#include "sphlrd/rng.hpp"

using namespace sphlrd;

TEST_CASE("uniform sampling is deterministic per seed") {
  const auto a = sample_uniform_sphere(1, 123);
  const auto b = sample_uniform_sphere(1, 123);
  CHECK(a[0].x == b[0].x);
  CHECK(a[0].y == b[0].y);
  CHECK(a[0].z == b[0].z);
  CHECK_THROWS_AS(sample_uniform_sphere(0, 1), std::invalid_argument);
}

TEST_CASE("sampled points sit on the unit sphere") {
  for (const auto& p : sample_uniform_sphere(1000, 9))
    CHECK(std::abs(p.norm() - 1.0) < 1e-12);
}

TEST_CASE("coordinate means vanish at the CLT rate") {
  const int M = 1'000'000;
  const auto points = sample_uniform_sphere(M, 31);
  double mx = 0.0, my = 0.0, mz = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
    mz += p.z;
  }
  CHECK(std::abs(mx / M) < 0.005);
  CHECK(std::abs(my / M) < 0.005);
  CHECK(std::abs(mz / M) < 0.005);
}

TEST_CASE("z-coordinate is uniform on [-1, 1]") {
  const int M = 100'000;
  const auto points = sample_uniform_sphere(M, 17);
  std::vector<double> zs;
  zs.reserve(points.size());
  for (const auto& p : points) zs.push_back(p.z);
  const double d = oracles::ks_statistic(
      std::move(zs), [](double z) { return (z + 1.0) / 2.0; });
  CHECK(d < oracles::ks_critical(M, 0.01));
}

TEST_CASE("spatial budget uses the integer part of T^{2 gamma}") {
  CHECK(spatial_budget(100, 0.5) == 100);
  CHECK(spatial_budget(1000, 0.25) == 31);
  CHECK(spatial_budget(50, 0.6667) == 184);
  CHECK_THROWS_AS(spatial_budget(1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(spatial_budget(100, 1.0), std::invalid_argument);
}

namespace {

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

}  // namespace

TEST_CASE("noiseless observations equal the basis expansion") {
  const CoefficientSeries series = random_series(2, 7, 21);
  const auto locations = sample_uniform_sphere(40, 22);
  const ObservationSet obs = observe(series, locations, 0.0, 23);
  for (int t = 0; t < 7; ++t) {
    for (int i = 0; i < 40; ++i) {
      const Eigen::VectorXd b = evaluate_basis(locations[i], 2);
      const double direct = b.dot(series.values.row(t));
      CHECK(obs.values(t, i) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("pure-noise observations have the configured variance and zero mean") {
  CoefficientSeries series;
  series.sieve = SieveBasis::from_max_degree(0);
  series.values = Eigen::MatrixXd::Zero(1000, 1);
  const auto locations = sample_uniform_sphere(1000, 3);
  const ObservationSet obs = observe(series, locations, 0.5, 4);
  const double n = static_cast<double>(obs.values.size());
  const double mean = obs.values.mean();
  const double var = (obs.values.array() - mean).square().sum() / (n - 1.0);
  CHECK(std::abs(var - 0.5) < 0.01);
  CHECK(std::abs(mean) < 0.01);
}

TEST_CASE("noise is uncorrelated with the basis at the sampled locations") {
  CoefficientSeries series;
  series.sieve = SieveBasis::from_max_degree(1);
  const int T = 1000, M = 1000;
  series.values = Eigen::MatrixXd::Zero(T, series.sieve.size);
  const auto locations = sample_uniform_sphere(M, 5);
  const ObservationSet obs = observe(series, locations, 1.0, 6);
  for (int c = 0; c < series.sieve.size; ++c) {
    double num = 0.0, se = 0.0, sb = 0.0;
    for (int i = 0; i < M; ++i) {
      const double b = evaluate_basis(locations[i], 1)[c];
      for (int t = 0; t < T; ++t) {
        num += obs.values(t, i) * b;
        se += obs.values(t, i) * obs.values(t, i);
      }
      sb += b * b * T;
    }
    const double corr = num / std::sqrt(se * sb);
    CHECK(std::abs(corr) < 3.0 / std::sqrt(static_cast<double>(T) * M));
  }
}

TEST_CASE("observation noise is deterministic per seed") {
  const CoefficientSeries series = random_series(1, 5, 40);
  const auto locations = sample_uniform_sphere(8, 41);
  const ObservationSet a = observe(series, locations, 0.25, 42);
  const ObservationSet b = observe(series, locations, 0.25, 42);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(observe(series, {}, 0.25, 42), std::invalid_argument);
}

TEST_CASE("CSV serialization carries one row per (t, i)") {
  const CoefficientSeries series = random_series(0, 2, 50);
  const auto locations = sample_uniform_sphere(3, 51);
  const ObservationSet obs = observe(series, locations, 0.0, 52);
  std::ostringstream out;
  write_csv(obs, out);
  const std::string text = out.str();
  CHECK(text.rfind("t,i,theta,phi,y\n", 0) == 0);
  int lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == 1 + 2 * 3);
}
