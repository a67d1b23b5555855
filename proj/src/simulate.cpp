#include "sphlrd/simulate.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "sphlrd/fft.hpp"
#include "sphlrd/rng.hpp"

namespace sphlrd {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Roots of p(z) = 1 + c[0] z + ... + c[deg-1] z^deg (trailing zeros trimmed)
// via the companion matrix.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& c) {
  int deg = static_cast<int>(c.size());
  while (deg > 0 && c[deg - 1] == 0.0) --deg;
  std::vector<std::complex<double>> roots;
  if (deg == 0) return roots;
  std::vector<double> a(deg + 1);  // ascending coefficients of p
  a[0] = 1.0;
  for (int i = 0; i < deg; ++i) a[i + 1] = c[i];
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) companion(0, i) = -a[deg - 1 - i] / a[deg];
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  for (int i = 0; i < deg; ++i) roots.push_back(solver.eigenvalues()[i]);
  return roots;
}

void check_roots_outside(const std::vector<double>& coeffs, bool negate,
                         const char* what, int degree) {
  // AR passes phi with Phi(z) = 1 - sum phi_i z^i, i.e. coefficients -phi.
  std::vector<double> c = coeffs;
  if (negate)
    for (double& v : c) v = -v;
  for (const auto& root : poly_roots(c)) {
    if (std::abs(root) <= 1.0 + 1e-12)
      throw std::invalid_argument(
          std::string(what) + " polynomial at degree " +
          std::to_string(degree) + " has a root inside the unit circle");
  }
}

}  // namespace

int SpectralModel::ar_order() const {
  return ar.empty() ? 0 : static_cast<int>(ar.front().size());
}

int SpectralModel::ma_order() const {
  return ma.empty() ? 0 : static_cast<int>(ma.front().size());
}

void SpectralModel::validate() const {
  const int degrees = sieve.max_degree + 1;
  if (static_cast<int>(ar.size()) != degrees ||
      static_cast<int>(ma.size()) != degrees ||
      static_cast<int>(innovation.size()) != degrees ||
      static_cast<int>(lrd_alpha.size()) != sieve.size)
    throw std::invalid_argument("SpectralModel: inconsistent dimensions");
  for (int n = 0; n < degrees; ++n) {
    if (static_cast<int>(ar[n].size()) != ar_order() ||
        static_cast<int>(ma[n].size()) != ma_order())
      throw std::invalid_argument("SpectralModel: ragged AR/MA orders");
    if (innovation[n] < 0.0)
      throw std::invalid_argument("SpectralModel: negative innovation eigenvalue");
    check_roots_outside(ar[n], true, "AR", n);
    check_roots_outside(ma[n], false, "MA", n);
    // No common AR/MA roots.
    std::vector<double> arc = ar[n];
    for (double& v : arc) v = -v;
    const auto ar_roots = poly_roots(arc);
    const auto ma_roots = poly_roots(ma[n]);
    for (const auto& ra : ar_roots)
      for (const auto& rm : ma_roots)
        if (std::abs(ra - rm) < 1e-10)
          throw std::invalid_argument(
              "SpectralModel: AR and MA share a root at degree " +
              std::to_string(n));
  }
  for (double a : lrd_alpha)
    if (a < 0.0 || a >= 0.5)
      throw std::invalid_argument("SpectralModel: alpha outside [0, 1/2)");
}

double theoretical_spectrum(const SpectralModel& model, int degree, int order,
                            double omega) {
  const int flat = flat_index(HarmonicIndex{degree, order});
  if (flat >= model.sieve.size)
    throw std::invalid_argument("theoretical_spectrum: index beyond sieve");
  const double alpha = model.lrd_alpha[flat];

  const std::complex<double> z = std::exp(std::complex<double>(0.0, -omega));
  std::complex<double> phi(1.0, 0.0), psi(1.0, 0.0);
  std::complex<double> zp = z;
  for (double c : model.ar[degree]) {
    phi -= c * zp;
    zp *= z;
  }
  zp = z;
  for (double c : model.ma[degree]) {
    psi += c * zp;
    zp *= z;
  }
  const double arma = std::norm(psi) / std::norm(phi);
  double value = model.innovation[degree] / (2.0 * kPi) * arma;
  if (alpha > 0.0) {
    const double gap = std::abs(1.0 - z);  // = 2 |sin(omega/2)|
    if (gap == 0.0) return std::numeric_limits<double>::infinity();
    value *= std::pow(gap, -alpha);
  }
  return value;
}

LRDProfile example_profile(int id, const SieveBasis& sieve) {
  LRDProfile profile;
  HarmonicIndex dominant;
  switch (id) {
    case 1:
      profile.upper_bound = 0.4929;
      profile.lower_bound = 0.2550;
      dominant = HarmonicIndex{sieve.max_degree,
                               multiplicity(sieve.max_degree)};
      profile.alpha_above_sieve = profile.upper_bound;
      break;
    case 2:
      profile.upper_bound = 0.4950;
      profile.lower_bound = 0.2629;
      dominant = HarmonicIndex{3, 5};
      profile.alpha_above_sieve = profile.lower_bound;
      break;
    case 3:
      profile.upper_bound = 0.4743;
      profile.lower_bound = 0.2678;
      dominant = HarmonicIndex{1, 1};
      profile.alpha_above_sieve = profile.lower_bound;
      break;
    default:
      throw std::invalid_argument("example_profile: id must be 1, 2 or 3");
  }
  profile.alpha.assign(sieve.size, profile.lower_bound);
  if (dominant.degree <= sieve.max_degree)
    profile.alpha[flat_index(dominant)] = profile.upper_bound;
  return profile;
}

SpectralModel null_spharma11_model(const SieveBasis& sieve) {
  SpectralModel model;
  model.sieve = sieve;
  const int degrees = sieve.max_degree + 1;
  model.ar.resize(degrees);
  model.ma.resize(degrees);
  model.innovation.assign(degrees, 1.0);
  model.lrd_alpha.assign(sieve.size, 0.0);
  for (int n = 0; n < degrees; ++n) {
    if (n == 0) {
      // ((n+1)/n)^{-c} -> 0 as n -> 0+; degree 0 is white noise.
      model.ar[n] = {0.0};
      model.ma[n] = {0.0};
    } else {
      const double ratio = (n + 1.0) / n;
      model.ar[n] = {0.7 * std::pow(ratio, -1.5)};
      model.ma[n] = {0.4 * std::pow(ratio, -5.0 / 1.95)};
    }
  }
  model.validate();
  return model;
}

SpectralModel alternative_model(int example_id, const SieveBasis& sieve) {
  SpectralModel model = null_spharma11_model(sieve);
  model.lrd_alpha = example_profile(example_id, sieve).alpha;
  model.validate();
  return model;
}

std::vector<double> sobolev_innovation(const SieveBasis& sieve, double s) {
  const double d = 2.0;  // sphere dimension
  std::vector<double> lambda(sieve.max_degree + 1);
  for (int n = 0; n <= sieve.max_degree; ++n)
    lambda[n] = std::pow(n + 1.0, -(2.0 * s + d + 1.0));
  return lambda;
}

CoefficientSeries simulate_series(const SpectralModel& model, int T,
                                  int burn_in, std::uint64_t seed) {
  if (T < 2) throw std::invalid_argument("simulate_series: T < 2");
  if (burn_in < 0) throw std::invalid_argument("simulate_series: burn_in < 0");
  model.validate();

  const int p = model.ar_order();
  const int q = model.ma_order();
  const int k = model.sieve.size;

  CoefficientSeries series;
  series.sieve = model.sieve;
  series.values.resize(T, k);

  for (int flat = 0; flat < k; ++flat) {
    const HarmonicIndex idx = harmonic_from_flat(flat);
    const double alpha = model.lrd_alpha[flat];
    const double sd = std::sqrt(model.innovation[idx.degree]);
    const double d = alpha / 2.0;
    const int taps = d > 0.0 ? std::max(1000, 10 * T) : 1;

    // ARMA recursion over enough steps that every retained output sees the
    // full fractional kernel.
    const int n_x = (taps - 1) + burn_in + T;
    std::vector<double> e(static_cast<std::size_t>(n_x) + q);
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(flat)));
    for (double& v : e) v = sd * rng.gaussian();

    std::vector<double> x(static_cast<std::size_t>(n_x), 0.0);
    const auto& phi = model.ar[idx.degree];
    const auto& psi = model.ma[idx.degree];
    for (int t = 0; t < n_x; ++t) {
      double v = e[t + q];
      for (int l = 0; l < q; ++l) v += psi[l] * e[t + q - (l + 1)];
      for (int i = 0; i < p && i < t; ++i) v += phi[i] * x[t - (i + 1)];
      x[t] = v;
    }

    if (d > 0.0) {
      // MA(infinity) expansion of (1-B)^{-d}: b_0 = 1, b_l = b_{l-1}(l-1+d)/l.
      std::vector<double> kernel(static_cast<std::size_t>(taps));
      kernel[0] = 1.0;
      for (int l = 1; l < taps; ++l)
        kernel[l] = kernel[l - 1] * (l - 1.0 + d) / l;
      const std::vector<double> y = fft_convolve(kernel, x);
      // Positions taps-1 .. n_x-1 carry full kernel support.
      for (int t = 0; t < T; ++t)
        series.values(t, flat) = y[static_cast<std::size_t>(taps) - 1 + burn_in + t];
    } else {
      for (int t = 0; t < T; ++t)
        series.values(t, flat) = x[static_cast<std::size_t>(burn_in) + t];
    }
  }
  return series;
}

}  // namespace sphlrd
