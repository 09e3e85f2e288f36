#pragma once

#include <span>
#include <vector>

#include "rra/align3d.hpp"
#include "rra/compress2d.hpp"

namespace rra {

/// Principal-volume-shells: coeffs[h * (L+1)^2 + sph_index(l, m)] =
/// sum_r u_{h,r} eta_r A_l^m(k_r), eta_r = sqrt(w_r).
struct CompressedVolume {
    PrincipalBasisPtr basis;
    int L = 0;
    std::vector<cdouble> coeffs;

    int H() const { return basis->H; }
    int shell_size() const { return (L + 1) * (L + 1); }
    const cdouble* shell(int h) const { return coeffs.data() + static_cast<std::size_t>(h) * shell_size(); }
};

/// C_{r,r'} = sum_{l>=1} sum_m eta_r conj(A_l^m(k_r)) A_l^m(k_r') eta_r'.
KernelMatrix kernel_3d_radial(const SphVolume& b);

/// D_{l,l'} = sum_r w_r sum_{|m| <= min(l,l')} conj(A_l^m(k_r)) A_{l'}^m(k_r),
/// with row and column 0 zero.
KernelMatrix kernel_3d_degree(const SphVolume& b);

CompressedVolume compress_volume(const SphVolume& a, const PrincipalBasisPtr& basis);

/// Degree-compressed Wigner tables [v_j^T d](beta), one dense centred M x M
/// matrix per (beta, j): tables[(b * H_D + j) * M^2 + (m1+L) * M + (m2+L)].
struct DegreeWignerSet {
    int L = 0;
    int H = 0;
    std::vector<double> betas;
    PrincipalBasisPtr degree_basis;
    std::vector<double> tables;

    int M() const { return 2 * L + 1; }
    const double* table(std::size_t b, int j) const {
        return tables.data() + (b * H + j) * static_cast<std::size_t>(M()) * M();
    }
};

/// [v^T d]_{m1,m2}(beta) = sum_l v_l d^l_{m1,m2}(beta), for every beta of the set.
DegreeWignerSet compress_wigner(const WignerSet& wigner, const PrincipalBasisPtr& degree_basis);

/// Steps 1, 1b, 2 and 3 of the compressed landscape.
Landscape3D landscape_3d_compressed(const CompressedVolume& a, const CompressedVolume& b,
                                    const DegreeWignerSet& degree_wigner);

/// Convenience overload that builds the Wigner tables for `betas`.
Landscape3D landscape_3d_compressed(const CompressedVolume& a, const CompressedVolume& b,
                                    const PrincipalBasisPtr& degree_basis, std::span<const double> betas);

}  // namespace rra
