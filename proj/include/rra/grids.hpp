#pragma once

#include <memory>
#include <vector>

#include "rra/common.hpp"

namespace rra {

/// Nodes and weights of a Gauss rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;
};

/// n-point Gauss-Jacobi rule for weight (1-t)^alpha (1+t)^beta on [-1, 1].
/// Golub-Welsch start, Newton-polished on the orthonormal recurrence.
GaussRule gauss_jacobi(int n, double alpha, double beta);

/// n-point Gauss-Legendre rule on [-1, 1].
inline GaussRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

/// Polar quadrature: Gauss-Jacobi radii for k dk on [0, K], Q equispaced angles.
struct PolarGrid {
    double K = 0.0;
    int R = 0;
    int Q = 0;
    std::vector<double> k_nodes;
    std::vector<double> w_radial;
    double dpsi = 0.0;
    std::vector<double> psi_nodes;

    bool same_as(const PolarGrid& other) const;
};

using PolarGridPtr = std::shared_ptr<const PolarGrid>;

PolarGridPtr build_polar_grid(double K, int R, int Q);

/// Spherical quadrature: Gauss-Jacobi radii for k^2 dk on [0, K], Gauss-Legendre
/// in cos(theta) with L+1 nodes, 2L+2 equispaced azimuths.
struct SphereGrid {
    double K = 0.0;
    int R = 0;
    int L = 0;
    int M = 0;  // 1 + 2L
    std::vector<double> k_nodes;
    std::vector<double> w_radial;
    std::vector<double> polar_nodes;    // cos(theta_j), ascending
    std::vector<double> polar_weights;  // sum to 2
    std::vector<double> azimuth_nodes;  // phi_p = 2 pi p / n_azimuth

    int n_polar() const { return static_cast<int>(polar_nodes.size()); }
    int n_azimuth() const { return static_cast<int>(azimuth_nodes.size()); }
    int coeffs_per_shell() const { return (L + 1) * (L + 1); }
    double azimuth_weight() const { return kTwoPi / n_azimuth(); }

    bool same_as(const SphereGrid& other) const;
};

using SphereGridPtr = std::shared_ptr<const SphereGrid>;

SphereGridPtr build_sphere_grid(double K, int R, int L);

/// Sphere grid on caller-supplied radial nodes/weights (e.g. a 2-D polar grid's
/// radii, when spherical-harmonic data feeds a 2-D kernel).
SphereGridPtr build_sphere_grid_on_radii(double K, std::vector<double> k_nodes,
                                         std::vector<double> w_radial, int L);

/// R = ceil(K) + 1, the default radial resolution for band limit K.
int default_radial_count(double K);

}  // namespace rra
