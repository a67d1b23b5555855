#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "sphlrd/spectra.hpp"

#include "json.hpp"

// Plug-in LRD test statistic: sqrt(T) times the Riemann sum of the weighted
// periodogram over the Fourier frequencies inside [-sqrt(B_T)/2, sqrt(B_T)/2],
// its projections onto fixed directions, and Gaussian null calibration.

namespace sphlrd {

struct TestStatistic {
  Eigen::MatrixXd kernel;        // k x k, real symmetric
  int length = 0;                // T
  double bandwidth = 0.0;        // B_T
  double window_half_width = 0;  // sqrt(B_T)/2
  int window_frequencies = 0;    // Fourier frequencies inside the window
  SieveBasis sieve;
};

struct ProjectionDirection {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
};

struct ProjectionResult {
  double z = 0.0;          // standardized statistic
  double statistic = 0.0;  // <S u, v>
  double center = 0.0;     // m-hat
  double variance = 0.0;   // v-hat
  bool reject = false;
  bool degenerate = false;
};

struct TestOutcome {
  std::vector<ProjectionResult> projections;
  double hs_norm = 0.0;
  std::vector<double> block_norms;  // per eigenspace degree 0..N
  double level = 0.0;
  double critical_value = 0.0;
};

TestStatistic test_statistic(const CoefficientSeries& series,
                             const WeightKernel& weights);
TestStatistic test_statistic(const FdftGrid& grid, const WeightKernel& weights);

/// Unit-test hook: same window discretization, but fed an arbitrary spectral
/// estimate omega -> k x k kernel in place of the weighted periodogram.
TestStatistic statistic_from_spectral_estimate(
    int T, double bandwidth, const SieveBasis& sieve,
    const std::function<Eigen::MatrixXcd(double)>& estimate);

/// Frobenius norm of the coordinate matrix (= Hilbert-Schmidt norm in an
/// orthonormal basis).
double hs_norm(const Eigen::MatrixXd& kernel);
double hs_norm(const Eigen::MatrixXcd& kernel);
double hs_norm(const TestStatistic& statistic);

/// The (2n+1) x (2n+1) sub-block on degree-n rows and columns.
Eigen::MatrixXd eigenspace_block(const TestStatistic& statistic, int degree);

/// Six random projection directions supported on degrees 1..3, v = u,
/// deterministic in the seed. Requires max_degree >= 3.
std::vector<ProjectionDirection> default_projections(const SieveBasis& sieve,
                                                     std::uint64_t seed);

/// Standardizes the projected statistic against a null center and variance
/// estimated from periodogram mass flanking the statistic's window (see
/// implementation notes) and applies the two-sided Gaussian test at `level`.
TestOutcome null_calibration(const CoefficientSeries& series,
                             const WeightKernel& weights,
                             const std::vector<ProjectionDirection>& directions,
                             double level);
TestOutcome null_calibration(const FdftGrid& grid, const WeightKernel& weights,
                             const std::vector<ProjectionDirection>& directions,
                             double level);

nlohmann::json to_json(const TestOutcome& outcome);

}  // namespace sphlrd
