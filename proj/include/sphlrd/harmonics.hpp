#pragma once

#include <Eigen/Dense>
#include <vector>

// Real orthonormal eigenbasis of the Laplace-Beltrami operator on the unit
// 2-sphere, normalized against the unit-mass surface measure, so that the
// degree-0 function is identically 1 and Monte Carlo Gram matrices of the
// basis converge to the identity.

namespace sphlrd {

/// Index (n, j) into the degree-n eigenspace, j running 1..2n+1.
struct HarmonicIndex {
  int degree = 0;
  int order = 1;
};

/// Dimension of the degree-n eigenspace on the 2-sphere: 2n+1.
int multiplicity(int degree);

/// Flattened position of (n, j): n^2 + (j - 1).
int flat_index(const HarmonicIndex& idx);

/// Inverse of flat_index.
HarmonicIndex harmonic_from_flat(int flat);

/// Truncated basis spanning all eigenspaces up to max_degree; its size is
/// (max_degree + 1)^2.
struct SieveBasis {
  int max_degree = 0;
  int size = 1;

  static SieveBasis from_max_degree(int max_degree);
};

/// Largest full-eigenspace sieve whose size does not exceed k_target.
SieveBasis sieve_from_budget(int k_target);

/// Point on the unit sphere, stored as a Cartesian 3-vector.
struct SpherePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  static SpherePoint from_angles(double colatitude, double longitude);
  double colatitude() const;
  double longitude() const;
  double norm() const;
};

/// Evaluates the real orthonormal harmonics up to max_degree at z.
/// Entry 0 is exactly 1. Throws std::domain_error if z is off the sphere
/// by more than 1e-12.
Eigen::VectorXd evaluate_basis(const SpherePoint& z, int max_degree);

/// Same, writing into out (resized to (max_degree+1)^2).
void evaluate_basis(const SpherePoint& z, int max_degree,
                    Eigen::VectorXd& out);

}  // namespace sphlrd
