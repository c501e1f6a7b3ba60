#pragma once

#include <complex>
#include <vector>

namespace capssc {

// In-place radix-2 complex FFT.  Sizes must be powers of two. forward uses
// the e^{-i 2pi jk/n} kernel; inverse applies the conjugate kernel and the
// 1/n factor, so inverse(forward(x)) == x up to roundoff.
void fft_forward(std::vector<std::complex<double>>& a);
void fft_inverse(std::vector<std::complex<double>>& a);

// Spectrum of a real sequence: full complex spectrum (hermitian redundancy
// retained for simple indexing).
std::vector<std::complex<double>> fft_of_real(const std::vector<double>& x);

bool is_power_of_two(std::size_t n);

}  // namespace capssc
