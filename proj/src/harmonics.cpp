#include "sphlrd/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sphlrd {

int multiplicity(int degree) {
  if (degree < 0) throw std::invalid_argument("multiplicity: degree < 0");
  return 2 * degree + 1;
}

int flat_index(const HarmonicIndex& idx) {
  if (idx.degree < 0 || idx.order < 1 || idx.order > multiplicity(idx.degree))
    throw std::invalid_argument("flat_index: order outside 1..2n+1");
  return idx.degree * idx.degree + (idx.order - 1);
}

HarmonicIndex harmonic_from_flat(int flat) {
  if (flat < 0) throw std::invalid_argument("harmonic_from_flat: flat < 0");
  const int n = static_cast<int>(std::sqrt(static_cast<double>(flat)));
  // Guard against sqrt landing one off for perfect squares.
  const int degree = (n + 1) * (n + 1) <= flat ? n + 1 : n;
  return HarmonicIndex{degree, flat - degree * degree + 1};
}

SieveBasis SieveBasis::from_max_degree(int max_degree) {
  if (max_degree < 0)
    throw std::invalid_argument("SieveBasis: max_degree < 0");
  return SieveBasis{max_degree, (max_degree + 1) * (max_degree + 1)};
}

SieveBasis sieve_from_budget(int k_target) {
  if (k_target < 1) throw std::invalid_argument("sieve_from_budget: k < 1");
  int n = static_cast<int>(std::sqrt(static_cast<double>(k_target))) - 1;
  while ((n + 2) * (n + 2) <= k_target) ++n;
  if (n < 0) n = 0;
  return SieveBasis::from_max_degree(n);
}

SpherePoint SpherePoint::from_angles(double colatitude, double longitude) {
  const double s = std::sin(colatitude);
  return SpherePoint{s * std::cos(longitude), s * std::sin(longitude),
                     std::cos(colatitude)};
}

double SpherePoint::colatitude() const {
  return std::acos(std::clamp(z, -1.0, 1.0));
}

double SpherePoint::longitude() const { return std::atan2(y, x); }

double SpherePoint::norm() const { return std::sqrt(x * x + y * y + z * z); }

namespace {

// Associated Legendre functions normalized so that the resulting real
// harmonics are orthonormal under the unit-mass measure:
//   S_{n, m=0} = P~_n^0(cos theta)
//   S_{n, m>0} = sqrt(2) P~_n^m(cos theta) cos(m phi)   (and sin for m<0)
// with int_{-1}^{1} [P~_n^m]^2 dx = 2. Stable three-term recurrences; see
// e.g. the geodesy "fully normalized" convention.
void normalized_legendre(int max_degree, double ct, double st,
                         std::vector<double>& p) {
  const int stride = max_degree + 1;
  p.assign(static_cast<std::size_t>(stride) * stride, 0.0);
  auto at = [&](int n, int m) -> double& { return p[n * stride + m]; };

  at(0, 0) = 1.0;
  for (int m = 1; m <= max_degree; ++m)
    at(m, m) = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * at(m - 1, m - 1);
  for (int m = 0; m < max_degree; ++m)
    at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * ct * at(m, m);
  for (int m = 0; m <= max_degree; ++m) {
    for (int n = m + 2; n <= max_degree; ++n) {
      const double a = std::sqrt((4.0 * n * n - 1.0) /
                                 (static_cast<double>(n) * n - m * m));
      const double b =
          std::sqrt(((n - 1.0) * (n - 1.0) - m * m) / (4.0 * (n - 1.0) * (n - 1.0) - 1.0));
      at(n, m) = a * (ct * at(n - 1, m) - b * at(n - 2, m));
    }
  }
}

}  // namespace

void evaluate_basis(const SpherePoint& z, int max_degree,
                    Eigen::VectorXd& out) {
  if (max_degree < 0)
    throw std::invalid_argument("evaluate_basis: max_degree < 0");
  const double r = z.norm();
  if (std::abs(r - 1.0) > 1e-12)
    throw std::domain_error("evaluate_basis: point off the unit sphere, |z| = " +
                            std::to_string(r));

  const double ct = std::clamp(z.z, -1.0, 1.0);
  const double rho = std::hypot(z.x, z.y);
  const double st = rho;
  // cos/sin of m*phi by the angle-addition recurrence; at the poles phi is
  // arbitrary but every m>0 term carries sin(theta)^m = 0.
  const double cphi = rho > 0.0 ? z.x / rho : 1.0;
  const double sphi = rho > 0.0 ? z.y / rho : 0.0;

  static thread_local std::vector<double> plm;
  normalized_legendre(max_degree, ct, st, plm);
  const int stride = max_degree + 1;

  out.resize((max_degree + 1) * (max_degree + 1));
  const double sqrt2 = std::sqrt(2.0);
  double cm = 1.0, sm = 0.0;  // cos(m phi), sin(m phi), starting at m=0
  // Fill order m across all degrees, then advance m.
  for (int m = 0; m <= max_degree; ++m) {
    for (int n = m; n <= max_degree; ++n) {
      const double pv = plm[n * stride + m];
      const int base = n * n;  // flat index of (n, j=1), i.e. m = -n
      if (m == 0) {
        out[base + n] = pv;  // j = n+1
      } else {
        out[base + n + m] = sqrt2 * pv * cm;  // j = n+1+m  (cosine branch)
        out[base + n - m] = sqrt2 * pv * sm;  // j = n+1-m  (sine branch)
      }
    }
    const double cm_next = cm * cphi - sm * sphi;
    sm = sm * cphi + cm * sphi;
    cm = cm_next;
  }
}

Eigen::VectorXd evaluate_basis(const SpherePoint& z, int max_degree) {
  Eigen::VectorXd out;
  evaluate_basis(z, max_degree, out);
  return out;
}

}  // namespace sphlrd
