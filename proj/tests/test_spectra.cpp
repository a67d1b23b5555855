#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "sphlrd/rng.hpp"
#include "sphlrd/simulate.hpp"
#include "sphlrd/spectra.hpp"

using namespace sphlrd;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

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

}  // namespace

TEST_CASE("single-term fDFT is x0 / sqrt(2 pi)") {
  CoefficientSeries series = zero_series(0, 1);
  series.values(0, 0) = 3.5;
  const FdftVector v = fdft(series, 1.2345);
  CHECK(v.coefficients[0].real() ==
        doctest::Approx(3.5 / std::sqrt(kTwoPi)).epsilon(1e-14));
  CHECK(std::abs(v.coefficients[0].imag()) < 1e-14);
}

TEST_CASE("zero-frequency fDFT is the scaled time average") {
  const CoefficientSeries series = random_series(1, 37, 1);
  const FdftVector v = fdft(series, 0.0);
  for (int c = 0; c < series.sieve.size; ++c) {
    const double expected =
        series.values.col(c).sum() / std::sqrt(kTwoPi * 37);
    CHECK(v.coefficients[c].real() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(v.coefficients[c].imag()) < 1e-12);
  }
}

TEST_CASE("fDFT conjugate symmetry for real input") {
  const CoefficientSeries series = random_series(2, 41, 2);
  for (double w : {0.3, 1.1, 2.9}) {
    const FdftVector plus = fdft(series, w);
    const FdftVector minus = fdft(series, -w);
    CHECK((minus.coefficients - plus.coefficients.conjugate()).norm() < 1e-12);
  }
}

TEST_CASE("fDFT grid matches the direct transform and brute-force DFT") {
  const CoefficientSeries series = random_series(1, 129, 3);
  const FdftGrid grid(series);
  for (int s : {0, 1, 17, 64, 128}) {
    const double w = kTwoPi * s / 129;
    const FdftVector direct = fdft(series, w);
    CHECK((grid.coefficients().row(s).transpose() - direct.coefficients).norm() <
          1e-10);
    const std::complex<double> brute =
        oracles::brute_dft(series.values.col(0), w) / std::sqrt(kTwoPi * 129);
    CHECK(std::abs(grid.coefficients()(s, 0) - brute) < 1e-10);
  }
}

TEST_CASE("Parseval identity over the Fourier grid") {
  const CoefficientSeries series = random_series(2, 96, 4);
  const FdftGrid grid(series);
  double lhs = 0.0;
  for (int s = 0; s < 96; ++s) lhs += grid.coefficients().row(s).squaredNorm();
  const double rhs = series.values.squaredNorm() / kTwoPi;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("periodogram of the zero series vanishes") {
  const OperatorKernel kernel = periodogram(zero_series(1, 16), 0.7);
  CHECK(kernel.entries.norm() == 0.0);
}

TEST_CASE("periodogram is Hermitian PSD of rank one") {
  const CoefficientSeries series = random_series(2, 33, 5);
  const OperatorKernel kernel = periodogram(series, 0.9);
  CHECK((kernel.entries - kernel.entries.adjoint()).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(kernel.entries);
  const double trace = kernel.entries.real().trace();
  CHECK(eig.eigenvalues().minCoeff() > -1e-10 * trace);
  // All eigenvalues but the largest are numerically zero.
  for (int i = 0; i + 1 < eig.eigenvalues().size(); ++i)
    CHECK(std::abs(eig.eigenvalues()[i]) < 1e-10 * trace);
}

TEST_CASE("hand-computed periodogram value") {
  CoefficientSeries series = zero_series(0, 4);
  series.values(0, 0) = 1.0;  // x = (1, 0, 0, 0)
  const OperatorKernel kernel = periodogram(series, kPi / 2.0);
  CHECK(kernel.entries(0, 0).real() ==
        doctest::Approx(1.0 / (8.0 * kPi)).epsilon(1e-14));
  CHECK(std::abs(kernel.entries(0, 0).imag()) < 1e-16);
}

TEST_CASE("Fejer kernel closed form") {
  for (int T : {1, 4, 16}) CHECK(fejer(T, 0.0) == doctest::Approx(T));
  // Integral (1/2pi) int F_T = 1 by trapezoid quadrature.
  const int nodes = 1 << 16;
  for (int T : {1, 4, 16}) {
    double integral = 0.0;
    const double step = kTwoPi / nodes;
    for (int i = 0; i <= nodes; ++i) {
      const double w = -kPi + step * i;
      const double weight = (i == 0 || i == nodes) ? 0.5 : 1.0;
      integral += weight * fejer(T, w);
    }
    integral *= step / kTwoPi;
    CHECK(std::abs(integral - 1.0) < 1e-6);
  }
}

TEST_CASE("Fejer kernel equals its defining double sum") {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const double w = (rng.uniform() * 2.0 - 1.0) * kPi;
    CHECK(std::abs(fejer(32, w) - oracles::brute_fejer(32, w)) < 1e-10);
  }
}

TEST_CASE("periodized weight: support, center value, unit mass, periodicity") {
  for (double B : {0.3, 1.7, kTwoPi}) {
    const WeightKernel wk = WeightKernel::epanechnikov(B);
    CHECK(wk.periodized(0.0) == doctest::Approx(0.75 / B).epsilon(1e-14));
    if (B < 2.0)  // a point far from every multiple of 2 pi relative to B
      CHECK(wk.periodized(kPi) == 0.0);
    CHECK(wk.periodized(0.37) ==
          doctest::Approx(wk.periodized(0.37 + kTwoPi)).epsilon(1e-12));
    CHECK(wk.periodized(0.37) ==
          doctest::Approx(wk.periodized(0.37 - 2.0 * kTwoPi)).epsilon(1e-12));

    const int nodes = 1 << 16;
    double integral = 0.0;
    const double step = kTwoPi / nodes;
    for (int i = 0; i <= nodes; ++i) {
      const double w = -kPi + step * i;
      const double weight = (i == 0 || i == nodes) ? 0.5 : 1.0;
      integral += weight * wk.periodized(w);
    }
    integral *= step;
    CHECK(std::abs(integral - 1.0) < 1e-6);
  }
  CHECK(WeightKernel::epanechnikov(0.5).l2_norm_sq() == doctest::Approx(0.6));
  CHECK_THROWS_AS(WeightKernel::epanechnikov(0.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightKernel::epanechnikov(7.0), std::invalid_argument);
}

TEST_CASE("bandwidth policy is T^{-beta}") {
  CHECK(bandwidth_from_exponent(256, 0.25) == doctest::Approx(0.25));
  CHECK(bandwidth_from_exponent(1000, 0.25) ==
        doctest::Approx(std::pow(1000.0, -0.25)).epsilon(1e-14));
  CHECK_THROWS_AS(bandwidth_from_exponent(100, 0.0), std::invalid_argument);
}

TEST_CASE("weighted periodogram of the zero series vanishes") {
  const WeightKernel wk = WeightKernel::epanechnikov(0.4);
  const OperatorKernel kernel = weighted_periodogram(zero_series(1, 64), 0.5, wk);
  CHECK(kernel.entries.norm() == 0.0);
}

TEST_CASE("weighted periodogram is Hermitian PSD") {
  const CoefficientSeries series = random_series(2, 200, 7);
  const WeightKernel wk = WeightKernel::epanechnikov(0.3);
  const OperatorKernel kernel = weighted_periodogram(series, 0.8, wk);
  const double trace = kernel.entries.real().trace();
  CHECK((kernel.entries - kernel.entries.adjoint()).norm() < 1e-12 * trace);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(kernel.entries);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * trace);
}

TEST_CASE("weighted periodogram of white noise estimates 1/(2 pi)") {
  const int T = 1 << 14;
  const int R = 200;
  const double w0 = kPi / 2.0;
  const WeightKernel wk =
      WeightKernel::epanechnikov(std::pow(static_cast<double>(T), -0.25));
  SpectralModel model;
  model.sieve = SieveBasis::from_max_degree(0);
  model.ar = {{}};
  model.ma = {{}};
  model.innovation = {1.0};
  model.lrd_alpha = {0.0};
  double mean = 0.0;
  for (int r = 0; r < R; ++r) {
    const CoefficientSeries series = simulate_series(model, T, 50, 900 + r);
    mean += FdftGrid(series).weighted_periodogram(w0, wk).entries(0, 0).real();
  }
  mean /= R;
  CHECK(std::abs(mean * kTwoPi - 1.0) < 0.10);
}

TEST_CASE("weighted periodogram tracks a known SPHARMA(1,1) spectrum") {
  const int T = 1 << 14;
  const int R = 60;
  const double w0 = 1.1;
  const SieveBasis sieve = SieveBasis::from_max_degree(1);
  const SpectralModel model = null_spharma11_model(sieve);
  const WeightKernel wk =
      WeightKernel::epanechnikov(std::pow(static_cast<double>(T), -0.25));
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(sieve.size);
  for (int r = 0; r < R; ++r) {
    const CoefficientSeries series = simulate_series(model, T, 500, 4000 + r);
    mean += FdftGrid(series)
                .weighted_periodogram(w0, wk)
                .entries.real()
                .diagonal();
  }
  mean /= R;
  for (int c = 0; c < sieve.size; ++c) {
    const auto idx = harmonic_from_flat(c);
    const double expected = theoretical_spectrum(model, idx.degree, idx.order, w0);
    CHECK(std::abs(mean[c] / expected - 1.0) < 0.10);
  }
}
