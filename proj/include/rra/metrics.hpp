#pragma once

#include <span>
#include <vector>

#include "rra/common.hpp"

namespace rra {

/// ||approx - full||_F / ||full||_F.
double rel_frobenius(std::span<const double> approx, std::span<const double> full);

/// Pearson correlation of the flattened arrays. Constant input is an error.
double correlation(std::span<const double> approx, std::span<const double> full);

/// Fraction of grid points whose full value is <= the full value at the
/// approximate argmax (first index among ties).
double backward_fraction(std::span<const double> approx, std::span<const double> full);

/// Comparison of one rank against the full landscapes.
struct ComparisonReport {
    int H = 0;
    int H_degree = 0;  // 3-D only
    double rel_frobenius = 0.0;
    double correlation = 0.0;
    double correlation_pair_mean = 0.0;
    double backward_fraction_mean = 0.0;
    std::vector<double> backward_fractions;  // per pair
    double seconds_precompute = 0.0;
    double seconds_per_pair = 0.0;
};

}  // namespace rra
