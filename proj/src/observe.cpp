#include "sphlrd/observe.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "sphlrd/rng.hpp"

namespace sphlrd {

std::vector<SpherePoint> sample_uniform_sphere(int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_uniform_sphere: count < 1");
  Rng rng(seed);
  std::vector<SpherePoint> points;
  points.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(points.size()) < count) {
    const double x = rng.gaussian();
    const double y = rng.gaussian();
    const double z = rng.gaussian();
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r < 1e-8) continue;  // essentially impossible, but keeps r sane
    points.push_back(SpherePoint{x / r, y / r, z / r});
  }
  return points;
}

int spatial_budget(int T, double gamma) {
  if (T < 2) throw std::invalid_argument("spatial_budget: T < 2");
  if (gamma <= 0.0 || gamma >= 1.0)
    throw std::invalid_argument("spatial_budget: gamma outside (0,1)");
  const double m = std::floor(std::pow(static_cast<double>(T), 2.0 * gamma));
  return std::max(1, static_cast<int>(m));
}

ObservationSet observe(const CoefficientSeries& series,
                       const std::vector<SpherePoint>& locations,
                       double sigma2, std::uint64_t seed) {
  if (locations.empty()) throw std::invalid_argument("observe: no locations");
  if (sigma2 < 0.0) throw std::invalid_argument("observe: sigma2 < 0");

  const int T = series.length();
  const int M = static_cast<int>(locations.size());
  const int k = series.sieve.size;

  Eigen::MatrixXd basis(M, k);
  Eigen::VectorXd row;
  for (int i = 0; i < M; ++i) {
    evaluate_basis(locations[i], series.sieve.max_degree, row);
    basis.row(i) = row;
  }

  ObservationSet obs;
  obs.locations = locations;
  obs.noise_variance = sigma2;
  obs.values.noalias() = series.values * basis.transpose();

  if (sigma2 > 0.0) {
    const double sd = std::sqrt(sigma2);
    Rng rng(seed);
    for (int t = 0; t < T; ++t)
      for (int i = 0; i < M; ++i) obs.values(t, i) += sd * rng.gaussian();
  }
  return obs;
}

void write_csv(const ObservationSet& obs, std::ostream& out) {
  out << "t,i,theta,phi,y\n";
  const int T = static_cast<int>(obs.values.rows());
  const int M = static_cast<int>(obs.values.cols());
  char line[160];
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < M; ++i) {
      const SpherePoint& p = obs.locations[static_cast<std::size_t>(i)];
      std::snprintf(line, sizeof(line), "%d,%d,%.10g,%.10g,%.10g\n", t, i,
                    p.colatitude(), p.longitude(), obs.values(t, i));
      out << line;
    }
  }
}

void write_csv(const ObservationSet& obs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(obs, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sphlrd
