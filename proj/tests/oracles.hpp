#pragma once

// Test-only reference computations. Nothing here calls into the library's
// numerical paths, so they can check those paths independently.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

/// Direct O(n) evaluation of one DFT bin in long double.
inline std::complex<long double> dft_bin(std::span<const double> x, std::size_t k) {
    const long double n = static_cast<long double>(x.size());
    std::complex<long double> acc = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const std::size_t idx = (k * j) % x.size();
        const long double a = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(idx) / n;
        acc += static_cast<long double>(x[j]) * std::complex<long double>(std::cos(a), std::sin(a));
    }
    return acc;
}

/// RMS of the component at bin k (k > 0, below Nyquist).
inline double bin_rms(std::span<const double> x, std::size_t k) {
    const long double n = static_cast<long double>(x.size());
    return static_cast<double>(std::sqrt(2.0L) * std::abs(dft_bin(x, k)) / n);
}

/// THD from direct DFT at harmonic bins of a window holding `cycles` periods.
inline double thd_direct(std::span<const double> x, std::size_t cycles, std::size_t max_harmonic) {
    const double v1 = bin_rms(x, cycles);
    long double sum = 0;
    for (std::size_t h = 2; h <= max_harmonic && h * cycles < x.size() / 2; ++h) {
        const double vh = bin_rms(x, h * cycles);
        if ((vh * vh) / (v1 * v1) > 1e-9) sum += static_cast<long double>(vh) * vh;
    }
    return static_cast<double>(std::sqrt(sum)) / v1;
}

/// One period of `transfer(offset + amplitude*sin)` sampled at n points.
inline std::vector<double> mapped_sinusoid(const std::function<double(double)>& transfer,
                                           double offset, double amplitude, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double ph = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        out[k] = transfer(offset + amplitude * std::sin(ph));
    }
    return out;
}

/// Collector current on the resistive load line, literal form with 1/tan in
/// long double: (V_CC - V_a) / (R + 1/tan(s*i_b)).
inline double collector_current_literal(double va, double s, double vcc, double r, double ib) {
    const long double ro = 1.0L / std::tan(static_cast<long double>(s) * ib);
    return static_cast<double>((static_cast<long double>(vcc) - va) / (r + ro));
}

/// Central finite difference.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle
