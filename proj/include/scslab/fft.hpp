#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace scslab {

// In-place iterative radix-2 complex FFT (binary64). Deterministic: fixed
// butterfly order, twiddles from one precomputed half-table.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: length must be 2^m");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    std::vector<std::complex<double>> tw(n / 2);
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n / 2; ++i)
        tw[i] = std::polar(1.0, sgn * 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n));
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const auto u = a[i + j];
                const auto v = a[i + j + len / 2] * tw[j * stride];
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

// autocorrelation C(h) = sum_n s(n) s(n+h) for real input, h = 0..|s|-1
inline std::vector<double> autocorrelation(const std::vector<double>& s) {
    std::size_t L = 1;
    while (L < 2 * s.size()) L <<= 1;
    std::vector<std::complex<double>> a(L);
    for (std::size_t i = 0; i < s.size(); ++i) a[i] = s[i];
    fft_inplace(a, false);
    for (auto& x : a) x = std::complex<double>(std::norm(x), 0.0);
    fft_inplace(a, true);
    std::vector<double> c(s.size());
    for (std::size_t h = 0; h < s.size(); ++h) c[h] = a[h].real();
    return c;
}

}  // namespace scslab
