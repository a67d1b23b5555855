#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sphlrd/harmonics.hpp"

// Spherical functional ARMA models with per-index fractional integration:
// every harmonic coefficient channel (n, j) is an independent scalar Gaussian
// ARFIMA(p, alpha(n,j)/2, q) path whose spectral density is
//   f_{n,j}(w) = lambda_n(R0)/(2 pi) |Psi_n(e^{-iw})/Phi_n(e^{-iw})|^2
//                |1 - e^{-iw}|^{-alpha(n,j)}.

namespace sphlrd {

/// Per-degree ARMA eigenvalues plus per-index long-memory exponents.
/// Polynomial conventions: Phi_n(z) = 1 - sum_i ar[n][i] z^{i+1},
/// Psi_n(z) = 1 + sum_l ma[n][l] z^{l+1}.
struct SpectralModel {
  SieveBasis sieve;
  std::vector<std::vector<double>> ar;   // ar[n], size p per degree
  std::vector<std::vector<double>> ma;   // ma[n], size q per degree
  std::vector<double> innovation;        // lambda_n(R0) >= 0 per degree
  std::vector<double> lrd_alpha;         // alpha(n,j) in [0, 1/2) per flat index

  int ar_order() const;
  int ma_order() const;
  /// Throws if any degree violates stationarity/invertibility, shares
  /// AR/MA roots, or any alpha lies outside [0, 1/2).
  void validate() const;
};

/// Long-memory exponents over a sieve, bounded between a floor and a peak.
struct LRDProfile {
  std::vector<double> alpha;   // per flat index over the sieve
  double lower_bound = 0.0;    // l_alpha
  double upper_bound = 0.0;    // L_alpha
  double alpha_above_sieve = 0.0;  // exponents for degrees beyond the sieve
};

/// Time-by-coefficient array of the curve process in harmonic coordinates.
struct CoefficientSeries {
  SieveBasis sieve;
  Eigen::MatrixXd values;  // T x k

  int length() const { return static_cast<int>(values.rows()); }
};

/// f_{n,j}(omega). Returns +infinity at omega = 0 when alpha(n,j) > 0.
double theoretical_spectrum(const SpectralModel& model, int degree, int order,
                            double omega);

/// The three LRD operator profiles of the simulation study: the floor value
/// l_alpha everywhere, the peak L_alpha on the designated dominant index
/// (1: last function of the top eigenspace; 2: fifth function of degree 3;
/// 3: first function of degree 1). A dominant index beyond the sieve leaves
/// the in-sieve grid at the floor.
LRDProfile example_profile(int id, const SieveBasis& sieve);

/// SPHARMA(1,1) null model of the size study:
/// lambda_n(phi_1) = 0.7 ((n+1)/n)^{-3/2},
/// lambda_n(psi_1) = 0.4 ((n+1)/n)^{-5/1.95}, degree 0 mapped to 0 (the
/// n -> 0+ limit), all alpha = 0. Innovation eigenvalues are 1 per degree.
SpectralModel null_spharma11_model(const SieveBasis& sieve);

/// Null model with an example LRD profile overlaid.
SpectralModel alternative_model(int example_id, const SieveBasis& sieve);

/// Innovation eigenvalues lambda_n = (n+1)^{-(2s+d+1)} (d=2) giving sample
/// paths in the Sobolev space H^s and a Karhunen-Loeve tail O(k^{-s}).
std::vector<double> sobolev_innovation(const SieveBasis& sieve, double s = 3.0);

/// Simulates all channels; deterministic in (model, T, burn_in, seed).
/// Fractional integration of order alpha/2 uses the truncated MA(infinity)
/// binomial expansion with max(1000, 10 T) taps; burn_in leading steps are
/// discarded.
CoefficientSeries simulate_series(const SpectralModel& model, int T,
                                  int burn_in, std::uint64_t seed);

}  // namespace sphlrd
