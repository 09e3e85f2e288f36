#pragma once

#include <array>
#include <span>
#include <vector>

#include "rra/grids.hpp"

namespace rra {

/// Packed position of (l, m) within one shell: l^2 + l + m.
constexpr int sph_index(int l, int m) { return l * l + l + m; }

/// Spherical-harmonic coefficients A_l^m(k_r); shell r occupies
/// coeffs[r * (L+1)^2, (r+1) * (L+1)^2).
struct SphVolume {
    SphereGridPtr grid;
    std::vector<cdouble> coeffs;

    SphVolume() = default;
    explicit SphVolume(SphereGridPtr g);

    int shell_size() const { return grid->coeffs_per_shell(); }
    cdouble* shell(int r) { return coeffs.data() + static_cast<std::size_t>(r) * shell_size(); }
    const cdouble* shell(int r) const { return coeffs.data() + static_cast<std::size_t>(r) * shell_size(); }
    cdouble& at(int r, int l, int m) { return shell(r)[sph_index(l, m)]; }
    const cdouble& at(int r, int l, int m) const { return shell(r)[sph_index(l, m)]; }
};

/// Orthonormal associated Legendre values with Condon-Shortley phase,
/// Pbar_l^m(x) for 0 <= m <= l <= L, packed at l (l + 1) / 2 + m.
std::vector<double> normalized_legendre(int L, double x);

constexpr int legendre_index(int l, int m) { return l * (l + 1) / 2 + m; }

/// Y_l^m(theta, phi) = Pbar_l^{|m|}(cos theta) e^{i m phi}, with
/// Y_l^{-m} = (-1)^m conj(Y_l^m).
cdouble spherical_harmonic(int l, int m, double cos_theta, double phi);

/// Sphere quadrature of conj(Y_l^m) * samples. Samples are laid out
/// [polar j][azimuth p] on the grid's sphere nodes.
std::vector<cdouble> sph_forward(std::span<const cdouble> samples, const SphereGrid& grid);

/// Evaluates sum_{l,m} A_l^m Y_l^m on the sphere nodes.
std::vector<cdouble> sph_synthesis(std::span<const cdouble> coeffs, const SphereGrid& grid);

/// Evaluates sum_{l,m} A_l^m Y_l^m at an arbitrary direction.
cdouble sph_evaluate(std::span<const cdouble> coeffs, int L, double cos_theta, double phi);

/// Real Wigner-d blocks d^l_{m1,m2}(beta), l = 0..L.
struct WignerDTable {
    double beta = 0.0;
    int L = 0;
    std::vector<std::vector<double>> blocks;  // block l: row-major (2l+1)^2, index (m1+l, m2+l)

    double operator()(int l, int m1, int m2) const {
        return blocks[l][static_cast<std::size_t>(m1 + l) * (2 * l + 1) + (m2 + l)];
    }
};

/// Risbo half-integer recursion; matches the standard (z-y-z, active) d-matrix.
WignerDTable wigner_d(double beta, int L);

/// Euler angles of the rotation R = Rz(alpha) Ry(beta) Rz(gamma).
struct EulerAngles {
    double gamma = 0.0;
    double beta = 0.0;
    double alpha = 0.0;
};

using Rotation3 = std::array<double, 9>;  // row-major 3x3

Rotation3 rotation_matrix(const EulerAngles& tau);
EulerAngles euler_from_matrix(const Rotation3& rot);
Rotation3 multiply(const Rotation3& a, const Rotation3& b);
std::array<double, 3> rotate_vector(const Rotation3& rot, const std::array<double, 3>& v);
Rotation3 transpose(const Rotation3& rot);

/// Euler angles of "first, then second": R(second) * R(first).
EulerAngles compose(const EulerAngles& first, const EulerAngles& second);

/// B_l^{m1} = sum_{m2} e^{-i m1 alpha} d^l_{m1,m2}(beta) e^{-i m2 gamma} A_l^{m2};
/// the synthesized function becomes f(R^{-1} k).
SphVolume rotate_sph(const SphVolume& vol, const EulerAngles& tau);
SphVolume rotate_sph(const SphVolume& vol, const EulerAngles& tau, const WignerDTable& table);

}  // namespace rra
