#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rra/align2d.hpp"
#include "rra/spharm.hpp"

namespace rra {

enum class KernelKind : int { Radial2D = 1, Radial3D = 2, Degree3D = 3, Radial2DTranslated = 4 };

const char* to_string(KernelKind kind);

/// Symmetric PSD alignment-quality kernel (C over radii or D over degrees).
/// scale_factors are the eta applied when data are projected onto the
/// kernel's eigenvectors; landscape_scale undoes the eta^2 product so that a
/// full-rank compressed landscape equals the uncompressed one.
struct KernelMatrix {
    KernelKind kind = KernelKind::Radial2D;
    Eigen::MatrixXd entries;
    std::vector<double> scale_factors;
    double landscape_scale = 1.0;

    int dim() const { return static_cast<int>(entries.rows()); }
};

/// Top-H eigenpairs of a kernel, eigenvalues descending. Vectors are the
/// columns of `vectors` (dim x H); the first nonzero entry of each is positive.
struct PrincipalBasis {
    KernelKind kind = KernelKind::Radial2D;
    int H = 0;
    Eigen::MatrixXd vectors;
    std::vector<double> eigenvalues;
    std::vector<double> scale_factors;
    double landscape_scale = 1.0;

    int dim() const { return static_cast<int>(vectors.rows()); }
};

using PrincipalBasisPtr = std::shared_ptr<const PrincipalBasis>;

/// coeffs[h * Q + j] = sum_r u_{h,r} eta_r A(k_r, q_j).
struct CompressedImage {
    PrincipalBasisPtr basis;
    int Q = 0;
    std::vector<cdouble> coeffs;

    int H() const { return basis->H; }
};

/// eta_r = sqrt(w_r dpsi).
std::vector<double> radial_scale_2d(const PolarGrid& grid);

/// Target-averaged radial kernel with the q = 0 term excluded.
KernelMatrix kernel_2d(std::span<const BesselImage> targets);

/// exp(-sigma^2 (k^2 + k'^2) / 2) exp(k k' sigma^2).
double translation_factor_plus(double k, double k_prime, double sigma);
/// k~ sqrt(pi/2) exp(-k~^2) (I_{-1/2}(k~^2) - I_{1/2}(k~^2)), k~ = k sigma / 2,
/// via the half-integer closed forms of the modified Bessel function.
double translation_factor_minus(double k, double sigma);

/// Translation-averaged kernel for projections of a reference volume whose
/// spherical-harmonic coefficients sit on the polar grid's radii.
KernelMatrix kernel_2d_translated(const SphVolume& target, const PolarGrid& grid, double sigma);

/// An arbitrary symmetric matrix wrapped as a kernel of the given kind.
KernelMatrix make_kernel(KernelKind kind, Eigen::MatrixXd entries, std::vector<double> scale_factors,
                         double landscape_scale);

PrincipalBasisPtr principal_basis(const KernelMatrix& kern, int H);

CompressedImage compress_image(const BesselImage& b, const PrincipalBasisPtr& basis);

/// Xhat(q) = 2 pi s sum_{h<H} conj(a_h(q)) b_h(q) with s the basis landscape scale.
std::vector<cdouble> landscape_2d_compressed_spectrum(const CompressedImage& a, const CompressedImage& b);

Landscape1D landscape_2d_compressed(const CompressedImage& a, const CompressedImage& b, int Q_out = 0);

}  // namespace rra
