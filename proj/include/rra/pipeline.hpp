#pragma once

#include <chrono>
#include <vector>

#include "rra/batch.hpp"
#include "rra/manifest.hpp"
#include "rra/metrics.hpp"
#include "rra/synth.hpp"

namespace rra {

/// A synthetic 2-D experiment: images are CTF-filtered templates of random
/// views, rotated in-plane by an on-grid planted angle, plus noise; targets
/// are CTF-filtered templates of independent random views.
struct ImageSet2D {
    PolarGridPtr grid;
    int image_size = 0;
    std::vector<PolarImage> images;
    std::vector<PolarImage> targets;
    std::vector<int> image_groups;
    std::vector<int> target_groups;
    std::vector<EulerAngles> image_views;
    std::vector<EulerAngles> target_views;
    std::vector<int> planted_shifts;  // gamma_0 = planted_shift * dpsi
    std::vector<double> noise_sigmas;
    std::vector<CtfProfile> ctfs;  // one per group
};

/// Jittered, rotated copies of the phantom and the unrotated phantom as target.
struct VolumeSet3D {
    SphereGridPtr grid;
    std::vector<SphVolume> volumes;
    SphVolume target;
    std::vector<EulerAngles> planted;
};

/// alpha, gamma uniform on [0, 2 pi), cos(beta) uniform on [-1, 1].
EulerAngles random_rotation(const CounterRng& rng, std::uint64_t counter);

/// Polar samples of Cartesian white noise of real-space level sigma.
PolarImage polar_noise(const PolarGridPtr& grid, int image_size, double sigma, std::uint64_t seed);

/// out(r, q) = in(r, q - shift): the image rotated by shift * dpsi.
PolarImage rotate_on_grid(const PolarImage& in, int shift);

ImageSet2D synthesize_images_2d(const RunManifest& m, const ExecPolicy& policy);
VolumeSet3D synthesize_volumes_3d(const RunManifest& m, const ExecPolicy& policy);

/// Every (image, target) pair sharing a group, image-major.
std::vector<PairIndex> group_pairs(std::span<const int> image_groups, std::span<const int> target_groups);

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct PhaseTimes {
    double precompute = 0.0;
    double per_pair = 0.0;

    double total() const { return precompute + per_pair; }
};

struct FullRun2D {
    int Q_out = 0;
    std::vector<double> values;  // [pair][Q_out]
    PhaseTimes times;
};

FullRun2D run_full_2d(std::span<const BesselImage> images, std::span<const BesselImage> targets,
                      std::span<const PairIndex> pairs, int Q_out, const ExecPolicy& policy);

/// Per-group kernels and bases built from each group's targets, with every
/// image and target compressed by its group's basis.
struct GroupCompression {
    std::vector<KernelMatrix> kernels;     // per group
    std::vector<PrincipalBasisPtr> bases;  // per group, null when the group has no targets
    std::vector<CompressedImage> images;
    std::vector<CompressedImage> targets;
};

GroupCompression compress_by_group(std::span<const BesselImage> images, std::span<const BesselImage> targets,
                                   std::span<const int> image_groups, std::span<const int> target_groups, int H,
                                   const ExecPolicy& policy);

struct CompressedRun2D {
    int H = 0;
    int Q_out = 0;
    std::vector<double> values;
    std::vector<KernelMatrix> kernels;      // per group
    std::vector<PrincipalBasisPtr> bases;   // per group, null when the group has no targets
    PhaseTimes times;
};

/// Per-group kernels from each group's targets; every pair must lie within one group.
/// Precompute covers kernels, eigendecompositions and compressing all images and
/// targets; per-pair covers the compressed landscapes.
CompressedRun2D run_compressed_2d(std::span<const BesselImage> images, std::span<const BesselImage> targets,
                                  std::span<const int> image_groups, std::span<const int> target_groups,
                                  std::span<const PairIndex> pairs, int H, int Q_out, const ExecPolicy& policy);

struct FullRun3D {
    std::vector<Landscape3D> landscapes;
    PhaseTimes times;  // precompute: Wigner tables
};

FullRun3D run_full_3d(std::span<const SphVolume> volumes, const SphVolume& target, std::span<const double> betas,
                      const ExecPolicy& policy);

struct CompressedRun3D {
    int H_radial = 0;
    int H_degree = 0;
    std::vector<Landscape3D> landscapes;
    KernelMatrix radial_kernel;
    KernelMatrix degree_kernel;
    PrincipalBasisPtr radial_basis;
    PrincipalBasisPtr degree_basis;
    PhaseTimes times;
};

/// Kernels from the target. Precompute covers both kernels and
/// eigendecompositions, the Wigner tables and their degree compression, and
/// the compressed target; per-pair covers compressing each volume and its landscape.
CompressedRun3D run_compressed_3d(std::span<const SphVolume> volumes, const SphVolume& target,
                                  std::span<const double> betas, int H_radial, int H_degree,
                                  const ExecPolicy& policy);

/// Metrics of a 2-D approximation. rel_frobenius and correlation are taken over
/// the whole [pair][Q_out] array; correlation_pair_mean averages per-pair values.
ComparisonReport compare_2d(std::span<const double> approx, std::span<const double> full, int Q_out, int H);

/// Metrics of a 3-D approximation after subtracting each landscape's mean.
ComparisonReport compare_3d(std::span<const Landscape3D> approx, std::span<const Landscape3D> full, int H_radial,
                            int H_degree);

ExecPolicy policy_for(const RunManifest& m);

}  // namespace rra
