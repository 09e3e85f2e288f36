#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "rra/polarfft.hpp"
#include "rra/spharm.hpp"

namespace rra::testing {

inline cdouble random_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

inline BesselImage random_bessel(const PolarGridPtr& grid, std::mt19937_64& rng) {
    BesselImage b(grid);
    for (auto& c : b.coeffs) c = random_complex(rng);
    return b;
}

/// Bessel coefficients of a random real-valued image: conj symmetry
/// B(k, -q) = conj(B(k, q)) and real Nyquist / zero terms.
inline BesselImage random_real_bessel(const PolarGridPtr& grid, std::mt19937_64& rng) {
    PolarImage p(grid);
    std::normal_distribution<double> n(0.0, 1.0);
    // Fourier samples of a real image obey F(k, psi + pi) = conj(F(k, psi)).
    const int Q = grid->Q;
    for (int r = 0; r < grid->R; ++r) {
        for (int q = 0; q < Q / 2; ++q) {
            const double re = n(rng);
            const double im = n(rng);
            p.at(r, q) = {re, im};
            p.at(r, q + Q / 2) = {re, -im};
        }
    }
    return bessel_forward(p);
}

inline SphVolume random_volume(const SphereGridPtr& grid, std::mt19937_64& rng) {
    SphVolume v(grid);
    for (auto& c : v.coeffs) c = random_complex(rng);
    return v;
}

/// Coefficients of a real-valued function on each shell: A_l^{-m} = (-1)^m conj(A_l^m).
inline SphVolume random_real_volume(const SphereGridPtr& grid, std::mt19937_64& rng) {
    SphVolume v(grid);
    for (int r = 0; r < grid->R; ++r) {
        for (int l = 0; l <= grid->L; ++l) {
            v.at(r, l, 0) = {random_complex(rng).real(), 0.0};
            for (int m = 1; m <= l; ++m) {
                const cdouble c = random_complex(rng);
                v.at(r, l, m) = c;
                v.at(r, l, -m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(c);
            }
        }
    }
    return v;
}

template <class T>
double max_abs_diff(const std::vector<T>& a, const std::vector<T>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, static_cast<double>(std::abs(a[i] - b[i])));
    return m;
}

template <class T>
double max_abs(const std::vector<T>& a) {
    double m = 0.0;
    for (const T& v : a) m = std::max(m, static_cast<double>(std::abs(v)));
    return m;
}

}  // namespace rra::testing
