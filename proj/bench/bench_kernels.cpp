#include <benchmark/benchmark.h>

#include <random>

#include "rra/batch.hpp"

using namespace rra;

namespace {

constexpr int kImages = 64;
constexpr int kTargets = 64;

ExecPolicy policy_from(const benchmark::State& state) {
    return state.range(0) == 0 ? ExecPolicy{Execution::Serial, 1}
                               : ExecPolicy{Execution::Parallel, static_cast<int>(state.range(0))};
}

std::vector<BesselImage> random_images(const PolarGridPtr& grid, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<BesselImage> out;
    for (int i = 0; i < n; ++i) {
        BesselImage b(grid);
        for (auto& c : b.coeffs) c = {normal(rng), normal(rng)};
        out.push_back(std::move(b));
    }
    return out;
}

SphVolume random_volume(const SphereGridPtr& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    SphVolume v(grid);
    for (auto& c : v.coeffs) c = {normal(rng), normal(rng)};
    return v;
}

struct Data2D {
    std::vector<BesselImage> images = random_images(build_polar_grid(48.0, 49, 98), kImages, 1);
    std::vector<BesselImage> targets = random_images(images.front().grid, kTargets, 2);
    std::vector<PairIndex> pairs = all_pairs(kImages, kTargets);
};

const Data2D& data_2d() {
    static const Data2D d;
    return d;
}

void BM_Landscapes2DFull(benchmark::State& state) {
    const auto& d = data_2d();
    const auto policy = policy_from(state);
    for (auto _ : state) benchmark::DoNotOptimize(batch_landscapes_2d(d.images, d.targets, d.pairs, 0, policy));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.pairs.size()));
}

void BM_Landscapes2DCompressed(benchmark::State& state) {
    const auto& d = data_2d();
    const auto policy = policy_from(state);
    const auto basis = principal_basis(kernel_2d(d.targets), static_cast<int>(state.range(1)));
    const auto ci = compress_images(d.images, basis, policy);
    const auto ct = compress_images(d.targets, basis, policy);
    for (auto _ : state) benchmark::DoNotOptimize(batch_landscapes_2d_compressed(ci, ct, d.pairs, 0, policy));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.pairs.size()));
}

void BM_CompressImages(benchmark::State& state) {
    const auto& d = data_2d();
    const auto policy = policy_from(state);
    const auto basis = principal_basis(kernel_2d(d.targets), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(compress_images(d.images, basis, policy));
}

struct Data3D {
    SphereGridPtr grid = build_sphere_grid(24.0, 25, 24);
    std::vector<SphVolume> volumes = [this] {
        std::vector<SphVolume> v;
        for (int i = 0; i < 16; ++i) v.push_back(random_volume(grid, 10 + i));
        return v;
    }();
    SphVolume target = random_volume(grid, 3);
    WignerSet wigner = make_wigner_set(24, default_beta_grid(49));
};

const Data3D& data_3d() {
    static const Data3D d;
    return d;
}

void BM_Landscapes3DFull(benchmark::State& state) {
    const auto& d = data_3d();
    const auto policy = policy_from(state);
    for (auto _ : state) benchmark::DoNotOptimize(batch_landscapes_3d(d.volumes, d.target, d.wigner, policy));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.volumes.size()));
}

void BM_Landscapes3DCompressed(benchmark::State& state) {
    const auto& d = data_3d();
    const auto policy = policy_from(state);
    const int H = static_cast<int>(state.range(1));
    const auto radial = principal_basis(kernel_3d_radial(d.target), H);
    const auto degree_wigner = compress_wigner(d.wigner, principal_basis(kernel_3d_degree(d.target), H));
    const auto ct = compress_volume(d.target, radial);
    for (auto _ : state) {
        const auto cv = compress_volumes(d.volumes, radial, policy);
        benchmark::DoNotOptimize(batch_landscapes_3d_compressed(cv, ct, degree_wigner, policy));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.volumes.size()));
}

// range(0): 0 = serial reference, n > 0 = parallel with n workers.
BENCHMARK(BM_Landscapes2DFull)->Arg(0)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Landscapes2DCompressed)
    ->ArgsProduct({{0, 1, 4}, {8}})
    ->Args({0, 2})
    ->Args({0, 16})
    ->Args({0, 49})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompressImages)->ArgsProduct({{0, 4}, {8}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Landscapes3DFull)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Landscapes3DCompressed)->ArgsProduct({{0, 4}, {8}})->Args({0, 25})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
