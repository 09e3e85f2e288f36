#pragma once

#include <span>
#include <vector>

#include "rra/spharm.hpp"

namespace rra {

/// X(tau) over tau = (gamma_g, beta_b, alpha_a), alpha_a = 2 pi a / M,
/// gamma_g = 2 pi g / M. values[(b * M + a) * M + g].
struct Landscape3D {
    std::vector<double> betas;
    int M = 0;
    std::vector<double> values;
    int argmax_flat = 0;
    double max_value = 0.0;

    std::size_t slab() const { return static_cast<std::size_t>(M) * M; }
    double at(int b, int a, int g) const { return values[b * slab() + static_cast<std::size_t>(a) * M + g]; }
    EulerAngles tau(std::size_t flat) const;
    EulerAngles argmax_tau() const { return tau(argmax_flat); }
};

/// Fills argmax fields (smallest flat index among equal maxima).
void finalize_landscape_3d(Landscape3D& l);

/// M equispaced values on [-pi, pi).
std::vector<double> default_beta_grid(int M);

/// Wigner tables for a fixed beta list, reused across volume pairs.
struct WignerSet {
    int L = 0;
    std::vector<double> betas;
    std::vector<WignerDTable> tables;
};

WignerSet make_wigner_set(int L, std::span<const double> betas);

/// Step-1 array Xtilde(m1, m2; l) stored dense (L+1) x M x M, index
/// [(l * M + m1 + L) * M + m2 + L]; entries with l < max(|m1|, |m2|) are zero.
struct XTilde {
    int L = 0;
    std::vector<cdouble> values;

    int M() const { return 2 * L + 1; }
    std::size_t index(int l, int m1, int m2) const {
        const std::size_t m = static_cast<std::size_t>(M());
        return (static_cast<std::size_t>(l) * m + (m1 + L)) * m + (m2 + L);
    }
};

/// Step 1: Xtilde(m1, m2; l) = sum_r w_r conj(A_l^{m1}(k_r)) B_l^{m2}(k_r).
XTilde landscape_3d_step1(const SphVolume& a, const SphVolume& b);

/// Steps 2 and 3 for every beta of the set.
Landscape3D landscape_3d_from_xtilde(const XTilde& xt, const WignerSet& wigner);

Landscape3D landscape_3d(const SphVolume& a, const SphVolume& b, std::span<const double> betas);
Landscape3D landscape_3d(const SphVolume& a, const SphVolume& b, const WignerSet& wigner);

/// For every grid tau: sum_r w_r sum_{l,m} conj(A) [rotate_sph(B, tau)].
Landscape3D brute_force_landscape_3d(const SphVolume& a, const SphVolume& b, std::span<const double> betas);

/// sum_r w_r sum_{l,m} conj(A) B.
cdouble sph_inner_product(const SphVolume& a, const SphVolume& b);

namespace detail {

/// Step 3: out[a * M + g] = Re sum_{m1,m2} xhat(m1,m2) e^{-i (m1 alpha_a + m2 gamma_g)},
/// xhat centred M x M. `scratch` holds M * (M / 2 + 1) entries.
void orders_to_values(const cdouble* xhat, int L, double* out, cdouble* scratch);

}  // namespace detail

}  // namespace rra
