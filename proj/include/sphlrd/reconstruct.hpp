#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sphlrd/harmonics.hpp"
#include "sphlrd/observe.hpp"
#include "sphlrd/simulate.hpp"

// Nonparametric series least-squares reconstruction of the harmonic
// coefficients from noisy discrete observations: the minimum-norm solution
// (B'B)^- B' y per time step, with one factorization of the design shared
// across all steps.

namespace sphlrd {

struct DesignMatrix {
  Eigen::MatrixXd values;  // M x k, row i = basis at location i
  SieveBasis sieve;
};

DesignMatrix design_matrix(const std::vector<SpherePoint>& locations,
                           const SieveBasis& sieve);

/// Squared Frobenius norm of B'B/M - I.
double mass_matrix_deviation(const DesignMatrix& design);

/// Thin-SVD pseudo-inverse of the design with relative singular value
/// cutoff 1e-10 * sigma_max, reusable across time steps.
class LeastSquaresSolver {
 public:
  explicit LeastSquaresSolver(const DesignMatrix& design,
                              double relative_cutoff = 1e-10);

  Eigen::VectorXd solve(const Eigen::VectorXd& y) const;
  Eigen::MatrixXd solve_all(const Eigen::MatrixXd& y_rows) const;  // T x M in

  int effective_rank() const { return effective_rank_; }
  bool rank_deficient() const { return effective_rank_ < sieve_.size; }
  const SieveBasis& sieve() const { return sieve_; }

 private:
  Eigen::MatrixXd pseudo_inverse_;  // k x M
  SieveBasis sieve_;
  int effective_rank_ = 0;
};

/// Minimum-norm least-squares coefficients for one snapshot.
Eigen::VectorXd reconstruct_snapshot(const Eigen::VectorXd& y,
                                     const DesignMatrix& design);

CoefficientSeries reconstruct_series(const ObservationSet& obs,
                                     const SieveBasis& sieve);

}  // namespace sphlrd
