#pragma once

#include <vector>

#include "rra/pipeline.hpp"

namespace rra {

struct BenchOptions {
    int warmup = 1;
    int repeats = 3;  // each phase reports its fastest repeat
    ExecPolicy policy;
};

struct BenchResult2D {
    int n_images = 0;
    int n_targets = 0;
    int n_pairs = 0;
    int R = 0;
    int Q = 0;
    int Q_out = 0;
    int H = 0;
    PhaseTimes full;
    PhaseTimes compressed;
    double speedup_per_pair = 0.0;
    double speedup_total = 0.0;
    double rel_frobenius = 0.0;  // of the timed compressed run, as a sanity check

    /// Per-pair step-1 time (the H x Q spectrum accumulation) over a rank sweep.
    std::vector<int> sweep_H;
    std::vector<double> step1_seconds;
    double step1_slope = 0.0;
    double step1_r2 = 0.0;
};

/// Full vs compressed timing on pre-transformed Bessel data. The full run's
/// phases are all per-pair; the compressed precompute covers kernels,
/// eigendecompositions and compression, its per-pair phase the landscapes.
BenchResult2D bench_2d(std::span<const BesselImage> images, std::span<const BesselImage> targets,
                       std::span<const int> image_groups, std::span<const int> target_groups, int H, int Q_out,
                       std::span<const int> sweep_H, const BenchOptions& opts);

struct BenchResult3D {
    int n_volumes = 0;
    int R = 0;
    int L = 0;
    int n_betas = 0;
    int H_radial = 0;
    int H_degree = 0;
    PhaseTimes full;
    PhaseTimes compressed;
    double speedup_per_pair = 0.0;
    double speedup_total = 0.0;
    double rel_frobenius = 0.0;  // mean-subtracted
};

BenchResult3D bench_3d(std::span<const SphVolume> volumes, const SphVolume& target, std::span<const double> betas,
                       int H_radial, int H_degree, const BenchOptions& opts);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace rra
