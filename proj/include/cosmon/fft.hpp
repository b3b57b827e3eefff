#pragma once
#include <complex>
#include <vector>

namespace cosmon {

using cplx = std::complex<double>;

bool is_pow2(std::size_t n);

// In-place radix-2 FFT, forward convention X_p = sum_j x_j exp(-2*pi*i*j*p/N).
// N must be a power of two.
void fft(std::vector<cplx>& x);

// Inverse transform with the 1/N factor, x_j = (1/N) sum_p X_p exp(+2*pi*i*j*p/N).
void ifft(std::vector<cplx>& x);

// O(N^2) reference DFT (same convention), kept for tests and the benchmark.
std::vector<cplx> dft_naive(const std::vector<cplx>& x);

// Signed frequency index for bin p of an N-point transform: p for p <= N/2,
// p - N otherwise (N/2 maps to +N/2 by this convention).
inline long signed_bin(std::size_t p, std::size_t n) {
    return p <= n / 2 ? static_cast<long>(p) : static_cast<long>(p) - static_cast<long>(n);
}

} // namespace cosmon
