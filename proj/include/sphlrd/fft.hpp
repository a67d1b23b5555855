#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

// Thin wrapper over FFTW with a mutex-guarded plan cache; execution runs
// concurrently on caller-owned buffers.

namespace sphlrd {

/// DFT of a real sequence at all n Fourier frequencies:
/// out[s] = sum_t x[t] exp(-i 2 pi s t / n), s = 0..n-1.
Eigen::VectorXcd real_dft(const Eigen::VectorXd& x);

/// Linear convolution of a and b (length a+b-1) via FFT.
std::vector<double> fft_convolve(const std::vector<double>& a,
                                 const std::vector<double>& b);

}  // namespace sphlrd
