#include "rra/batch.hpp"

#include <omp.h>

#include <exception>

namespace rra {

int resolved_workers(const ExecPolicy& policy) {
    if (policy.mode == Execution::Serial) return 1;
    return policy.workers > 0 ? policy.workers : omp_get_max_threads();
}

void for_each_index(int n, const ExecPolicy& policy, const std::function<void(int)>& body) {
    if (policy.mode == Execution::Serial) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    // Exceptions may not cross the parallel region; keep the lowest-index one.
    std::exception_ptr error;
    int error_index = n;
#pragma omp parallel for schedule(static) num_threads(resolved_workers(policy))
    for (int i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(rra_batch_error)
            if (i < error_index) {
                error_index = i;
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
}

namespace {

void check_pairs(std::span<const PairIndex> pairs, std::size_t n_images, std::size_t n_targets) {
    for (const auto& p : pairs) {
        require(p.image >= 0 && static_cast<std::size_t>(p.image) < n_images && p.target >= 0 &&
                    static_cast<std::size_t>(p.target) < n_targets,
                "batch: pair index out of range");
    }
}

}  // namespace

std::vector<PairIndex> all_pairs(int n_images, int n_targets) {
    std::vector<PairIndex> pairs;
    pairs.reserve(static_cast<std::size_t>(n_images) * n_targets);
    for (int i = 0; i < n_images; ++i) {
        for (int t = 0; t < n_targets; ++t) pairs.push_back({i, t});
    }
    return pairs;
}

std::vector<double> batch_landscapes_2d(std::span<const BesselImage> images, std::span<const BesselImage> targets,
                                        std::span<const PairIndex> pairs, int Q_out, const ExecPolicy& policy) {
    require(!images.empty() && !targets.empty(), "batch_landscapes_2d: empty input");
    check_pairs(pairs, images.size(), targets.size());
    const PolarGridPtr grid = images.front().grid;
    for (const auto& im : images) require_same_grid(*grid, *im.grid, "batch_landscapes_2d");
    for (const auto& t : targets) require_same_grid(*grid, *t.grid, "batch_landscapes_2d");
    const int R = grid->R;
    const int Q = grid->Q;
    if (Q_out == 0) Q_out = Q;
    require(Q_out >= Q, "batch_landscapes_2d: Q_out must be >= Q");
    std::vector<double> weights(R);
    for (int r = 0; r < R; ++r) weights[r] = kTwoPi * grid->w_radial[r];

    std::vector<double> out(pairs.size() * static_cast<std::size_t>(Q_out));
    const int n = static_cast<int>(pairs.size());
    for_each_index(n, policy, [&](int i) {
        thread_local std::vector<cdouble> xhat, scratch;
        xhat.assign(Q, cdouble{});
        scratch.resize(Q_out / 2 + 1);
        const auto& a = images[pairs[i].image];
        const auto& b = targets[pairs[i].target];
        for (int r = 0; r < R; ++r) {
            const std::size_t off = static_cast<std::size_t>(r) * Q;
            detail::accumulate_conj_product(&a.coeffs[off], &b.coeffs[off], weights[r], Q, xhat.data());
        }
        detail::spectrum_to_values(xhat.data(), Q, Q_out, &out[static_cast<std::size_t>(i) * Q_out],
                                   scratch.data());
    });
    return out;
}

std::vector<double> batch_landscapes_2d_compressed(std::span<const CompressedImage> images,
                                                   std::span<const CompressedImage> targets,
                                                   std::span<const PairIndex> pairs, int Q_out,
                                                   const ExecPolicy& policy) {
    require(!images.empty() && !targets.empty(), "batch_landscapes_2d_compressed: empty input");
    check_pairs(pairs, images.size(), targets.size());
    const int Q = images.front().Q;
    if (Q_out == 0) Q_out = Q;
    require(Q_out >= Q, "batch_landscapes_2d_compressed: Q_out must be >= Q");
    for (const auto& p : pairs) {
        require(images[p.image].basis == targets[p.target].basis && images[p.image].Q == Q &&
                    targets[p.target].Q == Q,
                "batch_landscapes_2d_compressed: pair uses different bases");
    }

    std::vector<double> out(pairs.size() * static_cast<std::size_t>(Q_out));
    const int n = static_cast<int>(pairs.size());
    for_each_index(n, policy, [&](int i) {
        thread_local std::vector<cdouble> xhat, scratch;
        xhat.assign(Q, cdouble{});
        scratch.resize(Q_out / 2 + 1);
        const auto& a = images[pairs[i].image];
        const auto& b = targets[pairs[i].target];
        const double weight = kTwoPi * a.basis->landscape_scale;
        for (int h = 0; h < a.H(); ++h) {
            const std::size_t off = static_cast<std::size_t>(h) * Q;
            detail::accumulate_conj_product(&a.coeffs[off], &b.coeffs[off], weight, Q, xhat.data());
        }
        detail::spectrum_to_values(xhat.data(), Q, Q_out, &out[static_cast<std::size_t>(i) * Q_out],
                                   scratch.data());
    });
    return out;
}

std::vector<CompressedImage> compress_images(std::span<const BesselImage> images, const PrincipalBasisPtr& basis,
                                             const ExecPolicy& policy) {
    std::vector<CompressedImage> out(images.size());
    for_each_index(static_cast<int>(images.size()), policy,
                   [&](int i) { out[i] = compress_image(images[i], basis); });
    return out;
}

std::vector<BesselImage> bessel_forward_all(std::span<const PolarImage> images, const ExecPolicy& policy) {
    std::vector<BesselImage> out(images.size());
    for_each_index(static_cast<int>(images.size()), policy, [&](int i) { out[i] = bessel_forward(images[i]); });
    return out;
}

std::vector<Landscape3D> batch_landscapes_3d(std::span<const SphVolume> volumes, const SphVolume& target,
                                             const WignerSet& wigner, const ExecPolicy& policy) {
    std::vector<Landscape3D> out(volumes.size());
    for_each_index(static_cast<int>(volumes.size()), policy,
                   [&](int i) { out[i] = landscape_3d(volumes[i], target, wigner); });
    return out;
}

std::vector<Landscape3D> batch_landscapes_3d_compressed(std::span<const CompressedVolume> volumes,
                                                        const CompressedVolume& target,
                                                        const DegreeWignerSet& degree_wigner,
                                                        const ExecPolicy& policy) {
    std::vector<Landscape3D> out(volumes.size());
    for_each_index(static_cast<int>(volumes.size()), policy,
                   [&](int i) { out[i] = landscape_3d_compressed(volumes[i], target, degree_wigner); });
    return out;
}

std::vector<CompressedVolume> compress_volumes(std::span<const SphVolume> volumes, const PrincipalBasisPtr& basis,
                                               const ExecPolicy& policy) {
    std::vector<CompressedVolume> out(volumes.size());
    for_each_index(static_cast<int>(volumes.size()), policy,
                   [&](int i) { out[i] = compress_volume(volumes[i], basis); });
    return out;
}

}  // namespace rra
