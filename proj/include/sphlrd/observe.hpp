#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sphlrd/harmonics.hpp"
#include "sphlrd/simulate.hpp"

// Observation model Y_t(Z_i) = X_t(Z_i) + eps_{i,t}: one set of uniform
// random locations reused at every time step, i.i.d. Gaussian noise.

namespace sphlrd {

struct ObservationSet {
  std::vector<SpherePoint> locations;
  Eigen::MatrixXd values;  // T x M
  double noise_variance = 0.0;
};

/// M i.i.d. uniform points on the sphere (normalized Gaussian 3-vectors).
std::vector<SpherePoint> sample_uniform_sphere(int count, std::uint64_t seed);

/// Spatial sampling budget M(T) = max(1, floor(T^{2 gamma})).
int spatial_budget(int T, double gamma);

ObservationSet observe(const CoefficientSeries& series,
                       const std::vector<SpherePoint>& locations,
                       double sigma2, std::uint64_t seed);

/// CSV columns: t, i, theta, phi, y.
void write_csv(const ObservationSet& obs, std::ostream& out);
void write_csv(const ObservationSet& obs, const std::string& path);

}  // namespace sphlrd
