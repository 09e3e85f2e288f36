#include "rra/bench.hpp"

#include <limits>

#include "rra/align2d.hpp"

namespace rra {

namespace {

void keep_fastest(PhaseTimes& best, const PhaseTimes& t) {
    best.precompute = std::min(best.precompute, t.precompute);
    best.per_pair = std::min(best.per_pair, t.per_pair);
}

PhaseTimes unset_times() {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
}

double step1_time(const GroupCompression& c, std::span<const PairIndex> pairs, const BenchOptions& opts) {
    const int Q = c.images.front().Q;
    std::vector<double> sink(pairs.size());
    double best = std::numeric_limits<double>::infinity();
    for (int rep = -opts.warmup; rep < opts.repeats; ++rep) {
        const Stopwatch clock;
        for_each_index(static_cast<int>(pairs.size()), opts.policy, [&](int i) {
            thread_local std::vector<cdouble> xhat;
            xhat.assign(Q, cdouble{});
            const auto& a = c.images[pairs[i].image];
            const auto& b = c.targets[pairs[i].target];
            for (int h = 0; h < a.H(); ++h) {
                const std::size_t off = static_cast<std::size_t>(h) * Q;
                detail::accumulate_conj_product(&a.coeffs[off], &b.coeffs[off], 1.0, Q, xhat.data());
            }
            sink[i] = xhat[1].real();
        });
        if (rep >= 0) best = std::min(best, clock.seconds());
    }
    volatile double keep = sink.empty() ? 0.0 : sink.front();
    (void)keep;
    return best / static_cast<double>(pairs.size());
}

}  // namespace

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "fit_line: need two or more points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0.0, "fit_line: x values are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

BenchResult2D bench_2d(std::span<const BesselImage> images, std::span<const BesselImage> targets,
                       std::span<const int> image_groups, std::span<const int> target_groups, int H, int Q_out,
                       std::span<const int> sweep_H, const BenchOptions& opts) {
    require(!images.empty() && !targets.empty(), "bench_2d: empty input");
    require(opts.repeats >= 1 && opts.warmup >= 0, "bench_2d: need repeats >= 1 and warmup >= 0");
    const auto pairs = group_pairs(image_groups, target_groups);
    require(!pairs.empty(), "bench_2d: no image and target share a group");

    BenchResult2D res;
    res.n_images = static_cast<int>(images.size());
    res.n_targets = static_cast<int>(targets.size());
    res.n_pairs = static_cast<int>(pairs.size());
    res.R = images.front().grid->R;
    res.Q = images.front().grid->Q;
    res.Q_out = Q_out > 0 ? Q_out : res.Q;
    res.H = H;
    res.full = unset_times();
    res.compressed = unset_times();

    std::vector<double> full_values, comp_values;
    for (int rep = -opts.warmup; rep < opts.repeats; ++rep) {
        auto full = run_full_2d(images, targets, pairs, res.Q_out, opts.policy);
        auto comp = run_compressed_2d(images, targets, image_groups, target_groups, pairs, H, res.Q_out, opts.policy);
        if (rep < 0) continue;
        keep_fastest(res.full, full.times);
        keep_fastest(res.compressed, comp.times);
        full_values = std::move(full.values);
        comp_values = std::move(comp.values);
    }
    res.full.precompute = 0.0;
    res.speedup_per_pair = res.full.per_pair / res.compressed.per_pair;
    res.speedup_total = res.full.total() / res.compressed.total();
    res.rel_frobenius = rel_frobenius(comp_values, full_values);

    for (int h : sweep_H) {
        const auto c = compress_by_group(images, targets, image_groups, target_groups, h, opts.policy);
        res.sweep_H.push_back(h);
        res.step1_seconds.push_back(step1_time(c, pairs, opts));
    }
    if (res.sweep_H.size() >= 2) {
        const std::vector<double> x(res.sweep_H.begin(), res.sweep_H.end());
        const auto fit = fit_line(x, res.step1_seconds);
        res.step1_slope = fit.slope;
        res.step1_r2 = fit.r2;
    }
    return res;
}

BenchResult3D bench_3d(std::span<const SphVolume> volumes, const SphVolume& target, std::span<const double> betas,
                       int H_radial, int H_degree, const BenchOptions& opts) {
    require(!volumes.empty(), "bench_3d: no volumes");
    require(opts.repeats >= 1 && opts.warmup >= 0, "bench_3d: need repeats >= 1 and warmup >= 0");
    BenchResult3D res;
    res.n_volumes = static_cast<int>(volumes.size());
    res.R = target.grid->R;
    res.L = target.grid->L;
    res.n_betas = static_cast<int>(betas.size());
    res.H_radial = H_radial;
    res.H_degree = H_degree;
    res.full = unset_times();
    res.compressed = unset_times();
    std::vector<Landscape3D> full_l, comp_l;
    for (int rep = -opts.warmup; rep < opts.repeats; ++rep) {
        auto full = run_full_3d(volumes, target, betas, opts.policy);
        auto comp = run_compressed_3d(volumes, target, betas, H_radial, H_degree, opts.policy);
        if (rep < 0) continue;
        keep_fastest(res.full, full.times);
        keep_fastest(res.compressed, comp.times);
        full_l = std::move(full.landscapes);
        comp_l = std::move(comp.landscapes);
    }
    res.speedup_per_pair = res.full.per_pair / res.compressed.per_pair;
    res.speedup_total = res.full.total() / res.compressed.total();
    res.rel_frobenius = compare_3d(comp_l, full_l, H_radial, H_degree).rel_frobenius;
    return res;
}

}  // namespace rra
