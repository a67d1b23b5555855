#include "sphlrd/spectra.hpp"

#include <cmath>
#include <stdexcept>

#include "sphlrd/fft.hpp"

namespace sphlrd {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

WeightKernel::WeightKernel(double bandwidth, double l2_norm_sq)
    : bandwidth_(bandwidth), l2_norm_sq_(l2_norm_sq) {}

WeightKernel WeightKernel::epanechnikov(double bandwidth) {
  if (bandwidth <= 0.0 || bandwidth > kTwoPi)
    throw std::invalid_argument("WeightKernel: bandwidth outside (0, 2 pi]");
  return WeightKernel(bandwidth, 3.0 / 5.0);
}

double WeightKernel::base(double x) const {
  const double ax = std::abs(x);
  if (ax >= 1.0) return 0.0;
  return 0.75 * (1.0 - x * x);
}

double WeightKernel::periodized(double x) const {
  // W((x + 2 pi j)/B) is nonzero only for |x + 2 pi j| < B <= 2 pi, so at
  // most two integers j contribute.
  const double lo = std::ceil((-bandwidth_ - x) / kTwoPi);
  const double hi = std::floor((bandwidth_ - x) / kTwoPi);
  double sum = 0.0;
  for (double j = lo; j <= hi; j += 1.0)
    sum += base((x + kTwoPi * j) / bandwidth_) / bandwidth_;
  return sum;
}

double bandwidth_from_exponent(int T, double beta) {
  if (T < 2) throw std::invalid_argument("bandwidth_from_exponent: T < 2");
  if (beta <= 0.0 || beta >= 1.0)
    throw std::invalid_argument("bandwidth_from_exponent: beta outside (0,1)");
  return std::pow(static_cast<double>(T), -beta);
}

double fejer(int T, double omega) {
  if (T < 1) throw std::invalid_argument("fejer: T < 1");
  const double s = std::sin(omega / 2.0);
  if (std::abs(s) < 1e-12) {
    // Removable singularity at multiples of 2 pi.
    return static_cast<double>(T);
  }
  const double num = std::sin(T * omega / 2.0);
  return (num * num) / (static_cast<double>(T) * s * s);
}

FdftVector fdft(const CoefficientSeries& series, double omega) {
  const int T = series.length();
  if (T < 1) throw std::invalid_argument("fdft: empty series");
  const int k = series.sieve.size;
  FdftVector out;
  out.omega = omega;
  out.coefficients = Eigen::VectorXcd::Zero(k);
  for (int t = 0; t < T; ++t) {
    const std::complex<double> phase =
        std::exp(std::complex<double>(0.0, -omega * t));
    out.coefficients += phase * series.values.row(t).transpose();
  }
  out.coefficients /= std::sqrt(kTwoPi * T);
  return out;
}

OperatorKernel periodogram(const CoefficientSeries& series, double omega) {
  const FdftVector v = fdft(series, omega);
  OperatorKernel kernel;
  kernel.omega = omega;
  kernel.entries.noalias() = v.coefficients * v.coefficients.adjoint();
  return kernel;
}

FdftGrid::FdftGrid(const CoefficientSeries& series)
    : T_(series.length()), sieve_(series.sieve) {
  if (T_ < 1) throw std::invalid_argument("FdftGrid: empty series");
  const int k = sieve_.size;
  grid_.resize(T_, k);
  const double scale = 1.0 / std::sqrt(kTwoPi * T_);
  for (int c = 0; c < k; ++c)
    grid_.col(c) = scale * real_dft(series.values.col(c));
}

double FdftGrid::frequency(int s) const {
  if (s < 0 || s >= T_) throw std::out_of_range("FdftGrid: frequency index");
  const double w = kTwoPi * s / T_;
  return w > kPi ? w - kTwoPi : w;
}

OperatorKernel FdftGrid::weighted_periodogram(
    double omega, const WeightKernel& weights) const {
  const int k = dimension();
  OperatorKernel kernel;
  kernel.omega = omega;
  kernel.entries = Eigen::MatrixXcd::Zero(k, k);
  for (int s = 0; s < T_; ++s) {
    const double w = weights.periodized(omega - kTwoPi * s / T_);
    if (w == 0.0) continue;
    kernel.entries.noalias() +=
        w * (grid_.row(s).transpose() * grid_.row(s).conjugate());
  }
  kernel.entries *= kTwoPi / T_;
  return kernel;
}

OperatorKernel weighted_periodogram(const CoefficientSeries& series,
                                    double omega,
                                    const WeightKernel& weights) {
  if (series.length() < 2)
    throw std::invalid_argument("weighted_periodogram: T < 2");
  return FdftGrid(series).weighted_periodogram(omega, weights);
}

}  // namespace sphlrd
