#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rra/compress2d.hpp"
#include "rra/compress3d.hpp"

namespace rra {

/// Serial is the reference loop; Parallel distributes independent pairs over
/// OpenMP threads. Both run the same per-pair kernel, so outputs are bitwise equal.
enum class Execution { Serial, Parallel };

struct ExecPolicy {
    Execution mode = Execution::Parallel;
    int workers = 0;  // 0: OpenMP default
};

struct PairIndex {
    int image = 0;
    int target = 0;
};

std::vector<PairIndex> all_pairs(int n_images, int n_targets);

/// Landscapes for every pair, row-major [pair][Q_out].
std::vector<double> batch_landscapes_2d(std::span<const BesselImage> images, std::span<const BesselImage> targets,
                                        std::span<const PairIndex> pairs, int Q_out, const ExecPolicy& policy);

std::vector<double> batch_landscapes_2d_compressed(std::span<const CompressedImage> images,
                                                   std::span<const CompressedImage> targets,
                                                   std::span<const PairIndex> pairs, int Q_out,
                                                   const ExecPolicy& policy);

std::vector<CompressedImage> compress_images(std::span<const BesselImage> images, const PrincipalBasisPtr& basis,
                                             const ExecPolicy& policy);

std::vector<BesselImage> bessel_forward_all(std::span<const PolarImage> images, const ExecPolicy& policy);

std::vector<Landscape3D> batch_landscapes_3d(std::span<const SphVolume> volumes, const SphVolume& target,
                                             const WignerSet& wigner, const ExecPolicy& policy);

std::vector<Landscape3D> batch_landscapes_3d_compressed(std::span<const CompressedVolume> volumes,
                                                        const CompressedVolume& target,
                                                        const DegreeWignerSet& degree_wigner,
                                                        const ExecPolicy& policy);

std::vector<CompressedVolume> compress_volumes(std::span<const SphVolume> volumes, const PrincipalBasisPtr& basis,
                                               const ExecPolicy& policy);

/// Number of OpenMP threads a policy resolves to.
int resolved_workers(const ExecPolicy& policy);

/// Runs body(i) for i in [0, n) under the policy; body(i) must write only
/// its own outputs. The lowest-index exception is rethrown after the loop.
void for_each_index(int n, const ExecPolicy& policy, const std::function<void(int)>& body);

}  // namespace rra
