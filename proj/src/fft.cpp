#include "sphlrd/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace sphlrd {

namespace {

// FFTW plan creation is not thread-safe; new-array execution is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan r2c_plan(int n) {
  static std::map<int, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> in(static_cast<std::size_t>(n));
  std::vector<fftw_complex> out(static_cast<std::size_t>(n) / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.data(), out.data(),
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) throw std::runtime_error("fftw: r2c plan creation failed");
  cache.emplace(n, plan);
  return plan;
}

fftw_plan c2r_plan(int n) {
  static std::map<int, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<fftw_complex> in(static_cast<std::size_t>(n) / 2 + 1);
  std::vector<double> out(static_cast<std::size_t>(n));
  fftw_plan plan = fftw_plan_dft_c2r_1d(n, in.data(), out.data(),
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) throw std::runtime_error("fftw: c2r plan creation failed");
  cache.emplace(n, plan);
  return plan;
}

}  // namespace

Eigen::VectorXcd real_dft(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  if (n < 1) throw std::invalid_argument("real_dft: empty input");
  std::vector<double> in(x.data(), x.data() + n);
  std::vector<fftw_complex> half(static_cast<std::size_t>(n) / 2 + 1);
  fftw_execute_dft_r2c(r2c_plan(n), in.data(), half.data());

  Eigen::VectorXcd out(n);
  const int nh = n / 2;
  for (int s = 0; s <= nh; ++s)
    out[s] = std::complex<double>(half[s][0], half[s][1]);
  for (int s = nh + 1; s < n; ++s) out[s] = std::conj(out[n - s]);
  return out;
}

std::vector<double> fft_convolve(const std::vector<double>& a,
                                 const std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("fft_convolve: empty input");
  const std::size_t out_len = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < out_len) n <<= 1;

  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());

  const int ni = static_cast<int>(n);
  std::vector<fftw_complex> fa(n / 2 + 1), fb(n / 2 + 1);
  fftw_execute_dft_r2c(r2c_plan(ni), pa.data(), fa.data());
  fftw_execute_dft_r2c(r2c_plan(ni), pb.data(), fb.data());
  for (std::size_t s = 0; s < fa.size(); ++s) {
    const double re = fa[s][0] * fb[s][0] - fa[s][1] * fb[s][1];
    const double im = fa[s][0] * fb[s][1] + fa[s][1] * fb[s][0];
    fa[s][0] = re / static_cast<double>(n);
    fa[s][1] = im / static_cast<double>(n);
  }
  std::vector<double> full(n);
  fftw_execute_dft_c2r(c2r_plan(ni), fa.data(), full.data());
  full.resize(out_len);
  return full;
}

}  // namespace sphlrd
