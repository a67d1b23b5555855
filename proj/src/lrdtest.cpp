#include "sphlrd/lrdtest.hpp"

#include <cmath>
#include <stdexcept>

#include "sphlrd/rng.hpp"
#include "sphlrd/stats.hpp"

namespace sphlrd {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Flank geometry for the null center: periodogram mass over three bands of
// width kFlankWidth * h on both sides of the window [-h, h]. A quadratic in
// omega^2 fitted across the bands and averaged against the window's own
// weight moments centers smooth (short-memory) spectra to O(omega^6) while
// leaving a pole at zero outside the center's reach. The outermost band
// ends at 4 h <= 2 < pi for every B_T < 1.
constexpr int kFlankCount = 3;
constexpr double kFlankWidth = 1.0;

struct WindowWeights {
  std::vector<double> a;   // per grid row, statistic weights
  double weight_total = 0; // sum of a
  int n_half = 0;          // window radius in grid steps
  double half_width = 0;   // h = sqrt(B)/2
};

WindowWeights statistic_weights(int T, const WeightKernel& weights) {
  const double B = weights.bandwidth();
  const double delta = kTwoPi / T;
  WindowWeights w;
  w.half_width = std::sqrt(B) / 2.0;
  w.n_half = static_cast<int>(std::floor(w.half_width / delta));
  if (w.n_half < 1)
    throw std::invalid_argument(
        "test_statistic: no nonzero Fourier frequency falls inside the "
        "integration window; increase T or the bandwidth");

  w.a.assign(static_cast<std::size_t>(T), 0.0);
  const int nb = static_cast<int>(std::ceil(B / delta)) + 1;
  std::vector<double> wv(static_cast<std::size_t>(2 * nb + 1));
  for (int ds = -nb; ds <= nb; ++ds)
    wv[static_cast<std::size_t>(ds + nb)] = weights.periodized(delta * ds);
  for (int m = -w.n_half; m <= w.n_half; ++m) {
    for (int ds = -nb; ds <= nb; ++ds) {
      const double val = wv[static_cast<std::size_t>(ds + nb)];
      if (val == 0.0) continue;
      const int row = ((m + ds) % T + T) % T;
      w.a[static_cast<std::size_t>(row)] += delta * val;
    }
  }
  for (double v : w.a) w.weight_total += v;
  return w;
}

double signed_frequency(int row, int T) {
  const double wfreq = kTwoPi * row / T;
  return wfreq > kPi ? wfreq - kTwoPi : wfreq;
}

Eigen::MatrixXd real_symmetric_part(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXd re = m.real();
  return 0.5 * (re + re.transpose());
}

}  // namespace

TestStatistic test_statistic(const FdftGrid& grid,
                             const WeightKernel& weights) {
  const int T = grid.length();
  if (T < 2) throw std::invalid_argument("test_statistic: T < 2");
  const double B = weights.bandwidth();
  if (B >= 1.0)
    throw std::invalid_argument("test_statistic: bandwidth must lie in (0,1)");
  const WindowWeights w = statistic_weights(T, weights);

  const int k = grid.dimension();
  Eigen::MatrixXcd accum = Eigen::MatrixXcd::Zero(k, k);
  const Eigen::MatrixXcd& rows = grid.coefficients();
  for (int s = 0; s < T; ++s) {
    const double a = w.a[static_cast<std::size_t>(s)];
    if (a == 0.0) continue;
    accum.noalias() += a * (rows.row(s).transpose() * rows.row(s).conjugate());
  }
  const double scale = std::sqrt(static_cast<double>(T)) * kTwoPi / T;

  TestStatistic stat;
  stat.kernel = scale * real_symmetric_part(accum);
  stat.length = T;
  stat.bandwidth = B;
  stat.window_half_width = w.half_width;
  stat.window_frequencies = 2 * w.n_half + 1;
  stat.sieve = grid.sieve();
  return stat;
}

TestStatistic test_statistic(const CoefficientSeries& series,
                             const WeightKernel& weights) {
  return test_statistic(FdftGrid(series), weights);
}

TestStatistic statistic_from_spectral_estimate(
    int T, double bandwidth, const SieveBasis& sieve,
    const std::function<Eigen::MatrixXcd(double)>& estimate) {
  if (T < 2) throw std::invalid_argument("statistic hook: T < 2");
  const double delta = kTwoPi / T;
  const double h = std::sqrt(bandwidth) / 2.0;
  const int n_half = static_cast<int>(std::floor(h / delta));
  if (n_half < 1)
    throw std::invalid_argument(
        "statistic hook: no nonzero Fourier frequency falls inside the "
        "integration window; increase T or the bandwidth");
  Eigen::MatrixXcd accum = Eigen::MatrixXcd::Zero(sieve.size, sieve.size);
  for (int m = -n_half; m <= n_half; ++m) accum += estimate(delta * m);

  TestStatistic stat;
  stat.kernel = std::sqrt(static_cast<double>(T)) * delta *
                real_symmetric_part(accum);
  stat.length = T;
  stat.bandwidth = bandwidth;
  stat.window_half_width = h;
  stat.window_frequencies = 2 * n_half + 1;
  stat.sieve = sieve;
  return stat;
}

double hs_norm(const Eigen::MatrixXd& kernel) { return kernel.norm(); }
double hs_norm(const Eigen::MatrixXcd& kernel) { return kernel.norm(); }
double hs_norm(const TestStatistic& statistic) {
  return statistic.kernel.norm();
}

Eigen::MatrixXd eigenspace_block(const TestStatistic& statistic, int degree) {
  if (degree < 0 || degree > statistic.sieve.max_degree)
    throw std::invalid_argument("eigenspace_block: degree beyond sieve");
  const int offset = degree * degree;
  const int width = multiplicity(degree);
  return statistic.kernel.block(offset, offset, width, width);
}

std::vector<ProjectionDirection> default_projections(const SieveBasis& sieve,
                                                     std::uint64_t seed) {
  if (sieve.max_degree < 3)
    throw std::invalid_argument(
        "default_projections: sieve must contain degrees 1..3");
  const int lo = 1;          // first index of degree 1
  const int hi = 16;         // one past last index of degree 3
  Rng rng(seed);
  std::vector<ProjectionDirection> dirs;
  for (int m = 0; m < 6; ++m) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(sieve.size);
    double norm_sq = 0.0;
    do {
      for (int i = lo; i < hi; ++i) u[i] = rng.gaussian();
      norm_sq = u.squaredNorm();
    } while (norm_sq == 0.0);
    u /= std::sqrt(norm_sq);
    dirs.push_back(ProjectionDirection{u, u});
  }
  return dirs;
}

TestOutcome null_calibration(const FdftGrid& grid, const WeightKernel& weights,
                             const std::vector<ProjectionDirection>& directions,
                             double level) {
  if (directions.empty())
    throw std::invalid_argument("null_calibration: no directions");
  if (level <= 0.0 || level >= 1.0)
    throw std::invalid_argument("null_calibration: level outside (0,1)");

  const int T = grid.length();
  const int k = grid.dimension();
  const TestStatistic stat = test_statistic(grid, weights);
  const WindowWeights w = statistic_weights(T, weights);
  const double delta = kTwoPi / T;
  const double h = w.half_width;

  // Flank index sets with their omega^2 and omega^4 means.
  std::vector<int> flank_of(static_cast<std::size_t>(T), -1);
  double count[kFlankCount] = {};
  double m2m[kFlankCount] = {};  // mean omega^2 per flank
  double m4m[kFlankCount] = {};  // mean omega^4 per flank
  for (int s = 0; s < T; ++s) {
    const double f = std::abs(signed_frequency(s, T));
    if (f <= h) continue;
    const int band = static_cast<int>((f - h) / (kFlankWidth * h));
    if (band >= kFlankCount || f > h + kFlankCount * kFlankWidth * h) continue;
    flank_of[static_cast<std::size_t>(s)] = band;
    count[band] += 1.0;
    m2m[band] += f * f;
    m4m[band] += f * f * f * f;
  }
  for (int b = 0; b < kFlankCount; ++b) {
    if (count[b] < 2.0)
      throw std::invalid_argument(
          "null_calibration: too few Fourier frequencies flank the window; "
          "increase T");
    m2m[b] /= count[b];
    m4m[b] /= count[b];
  }

  // omega^2 and omega^4 moments of the statistic's own weights.
  double u_mean = 0.0, u2_mean = 0.0;
  for (int s = 0; s < T; ++s) {
    const double a = w.a[static_cast<std::size_t>(s)];
    if (a == 0.0) continue;
    const double f = signed_frequency(s, T);
    u_mean += a * f * f;
    u2_mean += a * f * f * f * f;
  }
  u_mean /= w.weight_total;
  u2_mean /= w.weight_total;

  // Flank combination matching the window's {1, omega^2, omega^4} moments:
  // exact centering for spectra quadratic in omega^2.
  Eigen::Matrix3d moments;
  for (int b = 0; b < kFlankCount; ++b) {
    moments(0, b) = 1.0;
    moments(1, b) = m2m[b];
    moments(2, b) = m4m[b];
  }
  const Eigen::Vector3d target(1.0, u_mean, u2_mean);
  const Eigen::Vector3d combo = moments.fullPivLu().solve(target);

  // Per-channel flank averages of the periodogram diagonal. The invariance
  // of the covariance and spectral density operators makes the density
  // operator diagonal in harmonic coordinates, so the calibration estimates
  // k scalar densities; off-diagonal periodogram noise never enters the
  // center or the null scale.
  const Eigen::MatrixXcd& rows = grid.coefficients();
  Eigen::MatrixXd band_avg(kFlankCount, k);  // lambda-hat_{b,c}
  band_avg.setZero();
  for (int s = 0; s < T; ++s) {
    const int b = flank_of[static_cast<std::size_t>(s)];
    if (b < 0) continue;
    band_avg.row(b) += rows.row(s).cwiseAbs2();
  }
  for (int b = 0; b < kFlankCount; ++b) band_avg.row(b) /= count[b];

  // Center density per channel and a positivity floor from the pooled level.
  Eigen::VectorXd center_density = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd pooled = Eigen::VectorXd::Zero(k);
  double pooled_count = 0.0;
  for (int b = 0; b < kFlankCount; ++b) {
    center_density += combo[b] * band_avg.row(b).transpose();
    pooled += count[b] * band_avg.row(b).transpose();
    pooled_count += count[b];
  }
  pooled /= pooled_count;
  const Eigen::VectorXd channel_floor = 1e-3 * pooled.cwiseMax(0.0);

  // Per-ordinate weights d_s of (statistic - center). The center applies
  // only to the diagonal forms; on ordinates where the statistic's smoothing
  // spills into the flanks both parts are active and their covariance is
  // subtracted below.
  const double sqrt_t = std::sqrt(static_cast<double>(T));
  std::vector<double> cweight(static_cast<std::size_t>(T), 0.0);
  for (int s = 0; s < T; ++s) {
    const int b = flank_of[static_cast<std::size_t>(s)];
    if (b >= 0)
      cweight[static_cast<std::size_t>(s)] = w.weight_total * combo[b] / count[b];
  }

  TestOutcome outcome;
  outcome.level = level;
  outcome.critical_value = normal_quantile(1.0 - level / 2.0);
  outcome.hs_norm = hs_norm(stat);
  for (int n = 0; n <= stat.sieve.max_degree; ++n)
    outcome.block_norms.push_back(eigenspace_block(stat, n).norm());

  // Quadratic-in-omega^2 interpolation of each channel density through its
  // three flank levels, clamped at the positivity floor.
  Eigen::MatrixXd lagrange_coeff(kFlankCount, k);
  for (int i = 0; i < kFlankCount; ++i) {
    double denom = 1.0;
    for (int j = 0; j < kFlankCount; ++j)
      if (j != i) denom *= m2m[i] - m2m[j];
    lagrange_coeff.row(i) = band_avg.row(i) / denom;
  }
  const auto fitted_density = [&](double u, Eigen::VectorXd& out) {
    out.setZero();
    for (int i = 0; i < kFlankCount; ++i) {
      double numer = 1.0;
      for (int j = 0; j < kFlankCount; ++j)
        if (j != i) numer *= u - m2m[j];
      out += numer * lagrange_coeff.row(i).transpose();
    }
    out = out.cwiseMax(channel_floor);
  };

  const double center_scale = sqrt_t * delta * w.weight_total;
  Eigen::VectorXd g(k);
  for (const ProjectionDirection& dir : directions) {
    ProjectionResult res;
    res.statistic = dir.u.transpose() * stat.kernel * dir.v;
    const Eigen::VectorXd wuv = dir.u.cwiseProduct(dir.v);
    const Eigen::VectorXd wuu = dir.u.cwiseProduct(dir.u);
    const Eigen::VectorXd wvv = dir.v.cwiseProduct(dir.v);
    res.center = center_scale * wuv.dot(center_density);

    // Variance of sum_s [a_s <p_s u, v> - c_s <diag(p_s), u .* v>] over the
    // full frequency circle, for Gaussian data with near-independent
    // ordinates: the full form carries F_uu F_vv + F_uv^2 per unit weight,
    // the diagonalized center 2 sum_c (u_c v_c f_c)^2, and their overlap
    // twice the latter.
    double variance = 0.0;
    for (int s = 0; s < T; ++s) {
      const double a = w.a[static_cast<std::size_t>(s)];
      const double c = cweight[static_cast<std::size_t>(s)];
      if (a == 0.0 && c == 0.0) continue;
      const double f = signed_frequency(s, T);
      fitted_density(f * f, g);
      const double guu = wuu.dot(g);
      const double gvv = wvv.dot(g);
      const double guv = wuv.dot(g);
      const double kappa_full = guu * gvv + guv * guv;
      const double kappa_diag = 2.0 * wuv.cwiseProduct(g).squaredNorm();
      variance += a * a * kappa_full + (c * c - 2.0 * a * c) * kappa_diag;
    }
    variance *= sqrt_t * delta * sqrt_t * delta;
    res.variance = variance;

    if (!(res.variance > 0.0) || !std::isfinite(res.variance)) {
      res.degenerate = true;
      res.z = 0.0;
      res.reject = false;
    } else {
      res.z = (res.statistic - res.center) / std::sqrt(res.variance);
      res.reject = std::abs(res.z) > outcome.critical_value;
    }
    outcome.projections.push_back(res);
  }
  return outcome;
}

TestOutcome null_calibration(const CoefficientSeries& series,
                             const WeightKernel& weights,
                             const std::vector<ProjectionDirection>& directions,
                             double level) {
  return null_calibration(FdftGrid(series), weights, directions, level);
}

nlohmann::json to_json(const TestOutcome& outcome) {
  nlohmann::json j;
  j["level"] = outcome.level;
  j["critical_value"] = outcome.critical_value;
  j["hs_norm"] = outcome.hs_norm;
  j["block_norms"] = outcome.block_norms;
  j["z"] = nlohmann::json::array();
  j["reject"] = nlohmann::json::array();
  j["statistic"] = nlohmann::json::array();
  j["center"] = nlohmann::json::array();
  j["variance"] = nlohmann::json::array();
  j["degenerate"] = nlohmann::json::array();
  for (const ProjectionResult& p : outcome.projections) {
    j["z"].push_back(p.z);
    j["reject"].push_back(p.reject);
    j["statistic"].push_back(p.statistic);
    j["center"].push_back(p.center);
    j["variance"].push_back(p.variance);
    j["degenerate"].push_back(p.degenerate);
  }
  return j;
}

}  // namespace sphlrd
