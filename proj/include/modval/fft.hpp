#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace modval::fft {

// Unnormalized DFT, X_m = sum_k x_k exp(sign * 2 pi i m k / n), sign = -1 forward.
// Radix-2 in place for powers of two, direct O(n^2) sum otherwise.
template <typename T>
void transform(std::span<std::complex<T>> x, int sign) {
    const std::size_t n = x.size();
    if (n < 2) return;
    const T two_pi = T(2) * std::numbers::pi_v<T>;

    if (!std::has_single_bit(n)) {
        std::vector<std::complex<T>> out(n);
        for (std::size_t m = 0; m < n; ++m) {
            std::complex<T> acc{};
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t mk = (m * k) % n;
                acc += x[k] * std::polar(T(1), sign * two_pi * T(mk) / T(n));
            }
            out[m] = acc;
        }
        std::copy(out.begin(), out.end(), x.begin());
        return;
    }

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    // twiddles exp(sign 2 pi i k / n), k < n/2, evaluated directly (no recurrence drift)
    std::vector<std::complex<T>> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) w[k] = std::polar(T(1), sign * two_pi * T(k) / T(n));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::complex<T> u = x[start + k];
                const std::complex<T> v = x[start + k + half] * w[k * stride];
                x[start + k] = u + v;
                x[start + k + half] = u - v;
            }
        }
    }
}

template <typename T>
void forward(std::span<std::complex<T>> x) {
    transform(x, -1);
}

/// Inverse transform including the 1/n factor.
template <typename T>
void inverse(std::span<std::complex<T>> x) {
    transform(x, +1);
    const T scale = T(1) / T(x.size());
    for (auto& v : x) v *= scale;
}

/// Signed integer frequency of DFT bin m in the symmetric range [-n/2, n/2).
inline long long signed_frequency(std::size_t m, std::size_t n) {
    const auto mm = static_cast<long long>(m);
    const auto nn = static_cast<long long>(n);
    return (2 * mm >= nn) ? mm - nn : mm;
}

}  // namespace modval::fft
