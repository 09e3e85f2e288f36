#pragma once

#include <span>
#include <vector>

#include "rra/grids.hpp"

namespace rra {

/// N x N real image on [-1, 1]^2. values[n2 * N + n1] is the pixel centred at
/// (dx (n1 + 1/2) - 1, dx (n2 + 1/2) - 1).
struct CartImage {
    int N = 0;
    std::vector<double> values;

    CartImage() = default;
    explicit CartImage(int n);

    double dx() const { return 2.0 / N; }
    double pixel_center(int n) const { return dx() * (n + 0.5) - 1.0; }
    double& at(int n1, int n2) { return values[static_cast<std::size_t>(n2) * N + n1]; }
    double at(int n1, int n2) const { return values[static_cast<std::size_t>(n2) * N + n1]; }
};

/// Fourier samples on a polar grid, R x Q row-major: values[r * Q + q'].
struct PolarImage {
    PolarGridPtr grid;
    std::vector<cdouble> values;

    PolarImage() = default;
    explicit PolarImage(PolarGridPtr g);

    cdouble& at(int r, int q) { return values[static_cast<std::size_t>(r) * grid->Q + q]; }
    const cdouble& at(int r, int q) const { return values[static_cast<std::size_t>(r) * grid->Q + q]; }
};

/// Fourier-Bessel coefficients per ring, R x Q, q in FFT-natural order
/// (slot j holds signed frequency signed_frequency(j, Q)).
struct BesselImage {
    PolarGridPtr grid;
    std::vector<cdouble> coeffs;

    BesselImage() = default;
    explicit BesselImage(PolarGridPtr g);

    cdouble& at(int r, int j) { return coeffs[static_cast<std::size_t>(r) * grid->Q + j]; }
    const cdouble& at(int r, int j) const { return coeffs[static_cast<std::size_t>(r) * grid->Q + j]; }
};

/// Direct evaluation of dx^2 sum A_n exp(-i k . x_n) at one frequency.
cdouble fourier_at(const CartImage& img, double kx, double ky);

/// Fourier transform of a pixel image sampled on every polar node (direct
/// summation, parallel over rings). Warns on stderr when K exceeds Nyquist.
PolarImage sample_polar(const CartImage& img, const PolarGridPtr& grid);

/// Ring-wise trapezoidal Fourier-Bessel coefficients:
/// coeff(k, q) = sum_q' F(k, psi_q') exp(-i q psi_q') dpsi.
BesselImage bessel_forward(const PolarImage& p);

/// Inverse of bessel_forward (includes the 1 / (2 pi) factor).
PolarImage bessel_inverse(const BesselImage& b);

/// In-plane rotation by any angle gamma: coeff(k, q) *= exp(-i q gamma).
BesselImage rotate_bessel(const BesselImage& b, double gamma);

void require_same_grid(const PolarGrid& a, const PolarGrid& b, const char* where);

}  // namespace rra
