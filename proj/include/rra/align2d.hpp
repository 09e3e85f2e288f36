#pragma once

#include <span>
#include <vector>

#include "rra/polarfft.hpp"

namespace rra {

/// Inner products X(gamma) on gamma_j = 2 pi j / Q_out.
struct Landscape1D {
    std::vector<double> gammas;
    std::vector<double> values;
    int argmax_index = 0;
    double max_value = 0.0;

    int size() const { return static_cast<int>(values.size()); }
};

/// Builds a landscape from values, filling gammas and the argmax (smallest
/// index among equal maxima).
Landscape1D make_landscape_1d(std::vector<double> values);

/// Step 1: Xhat(q) = 2 pi sum_r w_r conj(A(k_r, q)) B(k_r, q), FFT-natural order.
std::vector<cdouble> landscape_2d_spectrum(const BesselImage& a, const BesselImage& b);

/// Step 2: X(gamma_j) = Re sum_q Xhat(q) exp(-i q gamma_j), zero-padded to Q_out.
Landscape1D landscape_from_spectrum(std::span<const cdouble> xhat, int Q_out);

/// Two-step FFT landscape. Q_out = 0 means Q_out = Q.
Landscape1D landscape_2d(const BesselImage& a, const BesselImage& b, int Q_out = 0);

/// Literal O(R Q Q_out) double sum over q and r for each gamma.
Landscape1D brute_force_landscape_2d(const BesselImage& a, const BesselImage& b, int Q_out = 0);

/// Grid argmax angle; with `interpolate`, the vertex of the parabola through
/// the argmax and its two cyclic neighbours.
double argmax_refine(const Landscape1D& l, bool interpolate = false);

namespace detail {

/// acc[j] += weight * conj(a[j]) * b[j] for j < n, on interleaved complex data.
void accumulate_conj_product(const cdouble* a, const cdouble* b, double weight, int n, cdouble* acc);

/// Real part of the zero-padded step-2 FFT written to out[0 .. Q_out).
/// `scratch` must hold Q_out / 2 + 1 entries.
void spectrum_to_values(const cdouble* xhat, int Q, int Q_out, double* out, cdouble* scratch);

int argmax_first(std::span<const double> values);

}  // namespace detail

}  // namespace rra
