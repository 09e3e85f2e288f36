#include "rra/pipeline.hpp"

#include <cmath>

namespace rra {

namespace {

// Counter ranges of the run RNG, one per kind of draw.
constexpr std::uint64_t kImageViews = 1ULL << 40;
constexpr std::uint64_t kPlantedShifts = 2ULL << 40;
constexpr std::uint64_t kTargetViews = 3ULL << 40;
constexpr std::uint64_t kVolumeViews = 4ULL << 40;
constexpr std::uint64_t kJitter = 5ULL << 40;

std::vector<CtfProfile> group_ctfs(const RunManifest& m, const PolarGrid& grid) {
    std::vector<CtfProfile> out;
    if (m.ctf_lambdas.empty()) {
        out.push_back({std::vector<double>(grid.R, 1.0)});
    } else {
        for (double lambda : m.ctf_lambdas) out.push_back(toy_ctf(grid, lambda));
    }
    return out;
}

}  // namespace

EulerAngles random_rotation(const CounterRng& rng, std::uint64_t counter) {
    EulerAngles tau;
    tau.alpha = kTwoPi * rng.uniform(counter);
    tau.beta = std::acos(2.0 * rng.uniform(counter + 1) - 1.0);
    tau.gamma = kTwoPi * rng.uniform(counter + 2);
    return tau;
}

PolarImage polar_noise(const PolarGridPtr& grid, int image_size, double sigma, std::uint64_t seed) {
    if (sigma == 0.0) return PolarImage(grid);
    return sample_polar(add_noise_cart(CartImage(image_size), {sigma, seed}), grid);
}

PolarImage rotate_on_grid(const PolarImage& in, int shift) {
    require(in.grid != nullptr, "rotate_on_grid: null grid");
    const int Q = in.grid->Q;
    const int s = ((shift % Q) + Q) % Q;
    PolarImage out(in.grid);
    for (int r = 0; r < in.grid->R; ++r) {
        for (int q = 0; q < Q; ++q) out.at(r, (q + s) % Q) = in.at(r, q);
    }
    return out;
}

ImageSet2D synthesize_images_2d(const RunManifest& m, const ExecPolicy& policy) {
    require(m.kind == RunKind::Images2D, "synthesize_images_2d: manifest is not images2d");
    ImageSet2D set;
    set.grid = m.polar_grid();
    set.image_size = m.image_size;
    set.ctfs = group_ctfs(m, *set.grid);
    const int groups = m.n_groups();
    const CounterRng rng(m.seed);

    set.images.resize(m.n_images);
    set.image_groups.resize(m.n_images);
    set.image_views.resize(m.n_images);
    set.planted_shifts.resize(m.n_images);
    set.noise_sigmas.resize(m.n_images);
    for (int i = 0; i < m.n_images; ++i) {
        set.image_groups[i] = i % groups;
        set.image_views[i] = random_rotation(rng, kImageViews + 3 * static_cast<std::uint64_t>(i));
        set.planted_shifts[i] = static_cast<int>(rng.bits(kPlantedShifts + i) % static_cast<std::uint64_t>(m.Q));
    }
    for_each_index(m.n_images, policy, [&](int i) {
        double sigma = m.noise_sigma;
        if (m.pixel_snr) {
            sigma = sigma_for_pixel_snr(phantom_projection(m.phantom, set.image_views[i], m.image_size), *m.pixel_snr);
        }
        set.noise_sigmas[i] = sigma;
        const auto clean = apply_ctf(phantom_polar_template(m.phantom, set.image_views[i], set.grid),
                                     set.ctfs[set.image_groups[i]]);
        auto img = rotate_on_grid(clean, set.planted_shifts[i]);
        if (sigma > 0.0) {
            const auto noise = polar_noise(set.grid, m.image_size, sigma, derived_seed(m.seed, i));
            for (std::size_t k = 0; k < img.values.size(); ++k) img.values[k] += noise.values[k];
        }
        set.images[i] = std::move(img);
    });

    set.targets.resize(m.n_targets);
    set.target_groups.resize(m.n_targets);
    set.target_views.resize(m.n_targets);
    for (int t = 0; t < m.n_targets; ++t) {
        set.target_groups[t] = t % groups;
        set.target_views[t] = random_rotation(rng, kTargetViews + 3 * static_cast<std::uint64_t>(t));
    }
    for_each_index(m.n_targets, policy, [&](int t) {
        set.targets[t] = apply_ctf(phantom_polar_template(m.phantom, set.target_views[t], set.grid),
                                   set.ctfs[set.target_groups[t]]);
    });
    return set;
}

VolumeSet3D synthesize_volumes_3d(const RunManifest& m, const ExecPolicy& policy) {
    require(m.kind == RunKind::Volumes3D, "synthesize_volumes_3d: manifest is not volumes3d");
    VolumeSet3D set;
    set.grid = m.sphere_grid();
    set.target = phantom_sph_volume(m.phantom, set.grid);
    const CounterRng rng(m.seed);
    const auto n_blobs = static_cast<std::uint64_t>(m.phantom.blobs.size());

    std::vector<BlobPhantom> sources(m.n_images, m.phantom);
    set.planted.resize(m.n_images);
    for (int i = 0; i < m.n_images; ++i) {
        for (std::uint64_t b = 0; b < n_blobs; ++b) {
            auto& c = sources[i].blobs[b].center;
            for (int axis = 0; axis < 3; ++axis) {
                c[axis] += m.jitter * rng.normal(kJitter + (i * n_blobs + b) * 3 + axis);
            }
            const double norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
            if (norm > 0.95) {
                for (double& x : c) x *= 0.95 / norm;
            }
        }
        set.planted[i] = random_rotation(rng, kVolumeViews + 3 * static_cast<std::uint64_t>(i));
        sources[i] = sources[i].rotated(rotation_matrix(set.planted[i]));
    }
    set.volumes.resize(m.n_images);
    for_each_index(m.n_images, policy, [&](int i) { set.volumes[i] = phantom_sph_volume(sources[i], set.grid); });
    return set;
}

std::vector<PairIndex> group_pairs(std::span<const int> image_groups, std::span<const int> target_groups) {
    std::vector<PairIndex> pairs;
    for (int i = 0; i < static_cast<int>(image_groups.size()); ++i) {
        for (int t = 0; t < static_cast<int>(target_groups.size()); ++t) {
            if (image_groups[i] == target_groups[t]) pairs.push_back({i, t});
        }
    }
    return pairs;
}

FullRun2D run_full_2d(std::span<const BesselImage> images, std::span<const BesselImage> targets,
                      std::span<const PairIndex> pairs, int Q_out, const ExecPolicy& policy) {
    FullRun2D run;
    run.Q_out = Q_out;
    const Stopwatch clock;
    run.values = batch_landscapes_2d(images, targets, pairs, Q_out, policy);
    run.times.per_pair = clock.seconds();
    return run;
}

GroupCompression compress_by_group(std::span<const BesselImage> images, std::span<const BesselImage> targets,
                                   std::span<const int> image_groups, std::span<const int> target_groups, int H,
                                   const ExecPolicy& policy) {
    require(image_groups.size() == images.size() && target_groups.size() == targets.size(),
            "compress_by_group: one group id per image and target");
    int n_groups = 0;
    for (int g : image_groups) n_groups = std::max(n_groups, g + 1);
    for (int g : target_groups) n_groups = std::max(n_groups, g + 1);

    GroupCompression out;
    out.kernels.resize(n_groups);
    out.bases.resize(n_groups);
    out.images.resize(images.size());
    out.targets.resize(targets.size());
    const auto members = [](std::span<const BesselImage> all, std::span<const int> groups, int g) {
        std::pair<std::vector<BesselImage>, std::vector<std::size_t>> m;
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (groups[i] == g) {
                m.first.push_back(all[i]);
                m.second.push_back(i);
            }
        }
        return m;
    };
    for (int g = 0; g < n_groups; ++g) {
        const auto [group_targets, target_ids] = members(targets, target_groups, g);
        if (group_targets.empty()) continue;
        out.kernels[g] = kernel_2d(group_targets);
        out.bases[g] = principal_basis(out.kernels[g], H);
        auto ct = compress_images(group_targets, out.bases[g], policy);
        for (std::size_t k = 0; k < target_ids.size(); ++k) out.targets[target_ids[k]] = std::move(ct[k]);

        const auto [group_images, image_ids] = members(images, image_groups, g);
        auto ci = compress_images(group_images, out.bases[g], policy);
        for (std::size_t k = 0; k < image_ids.size(); ++k) out.images[image_ids[k]] = std::move(ci[k]);
    }
    return out;
}

CompressedRun2D run_compressed_2d(std::span<const BesselImage> images, std::span<const BesselImage> targets,
                                  std::span<const int> image_groups, std::span<const int> target_groups,
                                  std::span<const PairIndex> pairs, int H, int Q_out, const ExecPolicy& policy) {
    require(image_groups.size() == images.size() && target_groups.size() == targets.size(),
            "run_compressed_2d: one group id per image and target");
    for (const auto& p : pairs) {
        require(p.image >= 0 && static_cast<std::size_t>(p.image) < images.size() && p.target >= 0 &&
                    static_cast<std::size_t>(p.target) < targets.size(),
                "run_compressed_2d: pair index out of range");
        require(image_groups[p.image] == target_groups[p.target], "run_compressed_2d: pair crosses groups");
    }
    CompressedRun2D run;
    run.H = H;
    run.Q_out = Q_out;

    const Stopwatch pre;
    auto compressed = compress_by_group(images, targets, image_groups, target_groups, H, policy);
    run.times.precompute = pre.seconds();
    run.kernels = std::move(compressed.kernels);
    run.bases = std::move(compressed.bases);

    const Stopwatch per_pair;
    run.values = batch_landscapes_2d_compressed(compressed.images, compressed.targets, pairs, Q_out, policy);
    run.times.per_pair = per_pair.seconds();
    return run;
}

FullRun3D run_full_3d(std::span<const SphVolume> volumes, const SphVolume& target, std::span<const double> betas,
                      const ExecPolicy& policy) {
    FullRun3D run;
    const Stopwatch pre;
    const auto wigner = make_wigner_set(target.grid->L, betas);
    run.times.precompute = pre.seconds();
    const Stopwatch per_pair;
    run.landscapes = batch_landscapes_3d(volumes, target, wigner, policy);
    run.times.per_pair = per_pair.seconds();
    return run;
}

CompressedRun3D run_compressed_3d(std::span<const SphVolume> volumes, const SphVolume& target,
                                  std::span<const double> betas, int H_radial, int H_degree,
                                  const ExecPolicy& policy) {
    CompressedRun3D run;
    run.H_radial = H_radial;
    run.H_degree = H_degree;
    const Stopwatch pre;
    run.radial_kernel = kernel_3d_radial(target);
    run.radial_basis = principal_basis(run.radial_kernel, H_radial);
    run.degree_kernel = kernel_3d_degree(target);
    run.degree_basis = principal_basis(run.degree_kernel, H_degree);
    const auto degree_wigner = compress_wigner(make_wigner_set(target.grid->L, betas), run.degree_basis);
    const auto c_target = compress_volume(target, run.radial_basis);
    run.times.precompute = pre.seconds();

    const Stopwatch per_pair;
    const auto c_volumes = compress_volumes(volumes, run.radial_basis, policy);
    run.landscapes = batch_landscapes_3d_compressed(c_volumes, c_target, degree_wigner, policy);
    run.times.per_pair = per_pair.seconds();
    return run;
}

ComparisonReport compare_2d(std::span<const double> approx, std::span<const double> full, int Q_out, int H) {
    require(Q_out > 0 && full.size() % static_cast<std::size_t>(Q_out) == 0, "compare_2d: bad landscape length");
    require(approx.size() == full.size(), "compare_2d: arrays differ in size");
    ComparisonReport rep;
    rep.H = H;
    rep.rel_frobenius = rel_frobenius(approx, full);
    rep.correlation = correlation(approx, full);
    const std::size_t n = full.size() / Q_out;
    double corr_sum = 0.0;
    double f_sum = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        const auto a = approx.subspan(p * Q_out, Q_out);
        const auto f = full.subspan(p * Q_out, Q_out);
        corr_sum += correlation(a, f);
        rep.backward_fractions.push_back(backward_fraction(a, f));
        f_sum += rep.backward_fractions.back();
    }
    rep.correlation_pair_mean = corr_sum / static_cast<double>(n);
    rep.backward_fraction_mean = f_sum / static_cast<double>(n);
    return rep;
}

ComparisonReport compare_3d(std::span<const Landscape3D> approx, std::span<const Landscape3D> full, int H_radial,
                            int H_degree) {
    require(approx.size() == full.size() && !full.empty(), "compare_3d: landscape counts differ");
    ComparisonReport rep;
    rep.H = H_radial;
    rep.H_degree = H_degree;
    std::vector<double> all_a, all_f;
    double corr_sum = 0.0;
    double f_sum = 0.0;
    for (std::size_t p = 0; p < full.size(); ++p) {
        require(approx[p].values.size() == full[p].values.size(), "compare_3d: landscape shapes differ");
        const auto centred = [](const std::vector<double>& v) {
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            std::vector<double> out(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - mean;
            return out;
        };
        const auto a = centred(approx[p].values);
        const auto f = centred(full[p].values);
        corr_sum += correlation(a, f);
        rep.backward_fractions.push_back(backward_fraction(a, f));
        f_sum += rep.backward_fractions.back();
        all_a.insert(all_a.end(), a.begin(), a.end());
        all_f.insert(all_f.end(), f.begin(), f.end());
    }
    rep.rel_frobenius = rel_frobenius(all_a, all_f);
    rep.correlation = correlation(all_a, all_f);
    rep.correlation_pair_mean = corr_sum / static_cast<double>(full.size());
    rep.backward_fraction_mean = f_sum / static_cast<double>(full.size());
    return rep;
}

ExecPolicy policy_for(const RunManifest& m) { return {Execution::Parallel, m.workers}; }

}  // namespace rra
