#include "rra/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace rra {

namespace {

void check_shapes(std::span<const double> a, std::span<const double> b, const char* where) {
    require(a.size() == b.size(), std::string(where) + ": arrays differ in size");
    require(!a.empty(), std::string(where) + ": empty arrays");
}

}  // namespace

double rel_frobenius(std::span<const double> approx, std::span<const double> full) {
    check_shapes(approx, full, "rel_frobenius");
    double diff = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        diff += (approx[i] - full[i]) * (approx[i] - full[i]);
        norm += full[i] * full[i];
    }
    require(norm > 0.0, "rel_frobenius: reference array is zero");
    return std::sqrt(diff / norm);
}

double correlation(std::span<const double> approx, std::span<const double> full) {
    check_shapes(approx, full, "correlation");
    const auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    };
    require(!constant(approx) && !constant(full), "correlation: undefined for a constant array");
    const double n = static_cast<double>(full.size());
    double ma = 0.0, mf = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        ma += approx[i];
        mf += full[i];
    }
    ma /= n;
    mf /= n;
    double saa = 0.0, sff = 0.0, saf = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        const double a = approx[i] - ma;
        const double f = full[i] - mf;
        saa += a * a;
        sff += f * f;
        saf += a * f;
    }
    require(saa > 0.0 && sff > 0.0, "correlation: undefined for a constant array");
    return saf / std::sqrt(saa * sff);
}

double backward_fraction(std::span<const double> approx, std::span<const double> full) {
    check_shapes(approx, full, "backward_fraction");
    std::size_t best = 0;
    for (std::size_t i = 1; i < approx.size(); ++i) {
        if (approx[i] > approx[best]) best = i;
    }
    const double attained = full[best];
    std::size_t count = 0;
    for (double v : full) count += (v <= attained) ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(full.size());
}

}  // namespace rra
