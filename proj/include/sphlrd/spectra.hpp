#pragma once

#include <Eigen/Dense>
#include <complex>

#include "sphlrd/simulate.hpp"

// Frequency-domain machinery in harmonic coordinates: fDFT, rank-one
// periodogram operator, Fejer kernel, periodized weight function and the
// weighted periodogram operator smoothed over the Fourier grid.

namespace sphlrd {

struct FdftVector {
  double omega = 0.0;
  Eigen::VectorXcd coefficients;
};

struct OperatorKernel {
  double omega = 0.0;
  Eigen::MatrixXcd entries;
};

/// Compactly supported smoothing weight W with bandwidth B: positive, even,
/// bounded variation, W = 0 off (-1,1), integral 1. Default shape is the
/// Epanechnikov window W(x) = 3/4 (1 - x^2), whose L2 norm squared is 3/5.
class WeightKernel {
 public:
  static WeightKernel epanechnikov(double bandwidth);

  double bandwidth() const { return bandwidth_; }
  /// int W(x)^2 dx, which enters the null variance of the test statistic.
  double l2_norm_sq() const { return l2_norm_sq_; }
  /// The base function W.
  double base(double x) const;
  /// Periodization W^(T)(x) = sum_j W((x + 2 pi j)/B)/B.
  double periodized(double x) const;

 private:
  WeightKernel(double bandwidth, double l2_norm_sq);
  double bandwidth_;
  double l2_norm_sq_;
};

/// Bandwidth policy B_T = T^{-beta}.
double bandwidth_from_exponent(int T, double beta);

/// Fejer kernel (1/T)[sin(T w/2)/sin(w/2)]^2 with removable singularities
/// evaluated as T.
double fejer(int T, double omega);

/// (1/sqrt(2 pi T)) sum_t x_t e^{-i w t}, componentwise. Direct evaluation.
FdftVector fdft(const CoefficientSeries& series, double omega);

/// Rank-one kernel fdft(w) (x) conj(fdft(w)).
OperatorKernel periodogram(const CoefficientSeries& series, double omega);

/// fDFT of every channel at all Fourier frequencies 2 pi s / T, computed
/// once by FFT and shared read-only afterwards.
class FdftGrid {
 public:
  explicit FdftGrid(const CoefficientSeries& series);

  int length() const { return T_; }
  int dimension() const { return static_cast<int>(grid_.cols()); }
  const SieveBasis& sieve() const { return sieve_; }
  /// Row s = fDFT coefficients at frequency 2 pi s / T, s = 0..T-1.
  const Eigen::MatrixXcd& coefficients() const { return grid_; }
  /// Frequency of grid row s mapped into (-pi, pi].
  double frequency(int s) const;

  /// Weighted periodogram at omega: (2 pi / T) sum_s W^(T)(omega - w_s) p_{w_s}.
  OperatorKernel weighted_periodogram(double omega,
                                      const WeightKernel& weights) const;

 private:
  int T_;
  SieveBasis sieve_;
  Eigen::MatrixXcd grid_;  // T x k
};

/// Convenience form building the grid internally.
OperatorKernel weighted_periodogram(const CoefficientSeries& series,
                                    double omega, const WeightKernel& weights);

}  // namespace sphlrd
