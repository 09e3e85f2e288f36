#include <gtest/gtest.h>

#include <random>

#include "rra/batch.hpp"
#include "test_util.hpp"

using namespace rra;
using rra::testing::random_real_bessel;
using rra::testing::random_real_volume;

namespace {

const ExecPolicy kSerial{Execution::Serial, 1};
const ExecPolicy kOne{Execution::Parallel, 1};
const ExecPolicy kEight{Execution::Parallel, 8};

}  // namespace

TEST(Batch, AllPairsIsImageMajor) {
    const auto p = all_pairs(2, 3);
    ASSERT_EQ(p.size(), 6u);
    EXPECT_EQ(p[4].image, 1);
    EXPECT_EQ(p[4].target, 1);
    EXPECT_EQ(resolved_workers(kSerial), 1);
    EXPECT_EQ(resolved_workers(kEight), 8);
}

TEST(Batch, Landscapes2DMatchSingleCallsAndAreWorkerIndependent) {
    std::mt19937_64 rng(1);
    const auto g = build_polar_grid(10.0, 11, 22);
    std::vector<BesselImage> images, targets;
    for (int i = 0; i < 5; ++i) images.push_back(random_real_bessel(g, rng));
    for (int i = 0; i < 3; ++i) targets.push_back(random_real_bessel(g, rng));
    const auto pairs = all_pairs(5, 3);
    const auto serial = batch_landscapes_2d(images, targets, pairs, 44, kSerial);
    EXPECT_EQ(serial, batch_landscapes_2d(images, targets, pairs, 44, kOne));
    EXPECT_EQ(serial, batch_landscapes_2d(images, targets, pairs, 44, kEight));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto l = landscape_2d(images[pairs[i].image], targets[pairs[i].target], 44);
        for (int j = 0; j < 44; ++j) EXPECT_EQ(serial[i * 44 + j], l.values[j]);
    }
}

TEST(Batch, Compressed2DWorkerIndependent) {
    std::mt19937_64 rng(2);
    const auto g = build_polar_grid(10.0, 11, 22);
    std::vector<BesselImage> images, targets;
    for (int i = 0; i < 6; ++i) images.push_back(random_real_bessel(g, rng));
    for (int i = 0; i < 4; ++i) targets.push_back(random_real_bessel(g, rng));
    const auto basis = principal_basis(kernel_2d(targets), 4);
    const auto ci = compress_images(images, basis, kEight);
    const auto ct = compress_images(targets, basis, kSerial);
    for (std::size_t i = 0; i < images.size(); ++i) EXPECT_EQ(ci[i].coeffs, compress_image(images[i], basis).coeffs);
    const auto pairs = all_pairs(6, 4);
    const auto serial = batch_landscapes_2d_compressed(ci, ct, pairs, 22, kSerial);
    EXPECT_EQ(serial, batch_landscapes_2d_compressed(ci, ct, pairs, 22, kOne));
    EXPECT_EQ(serial, batch_landscapes_2d_compressed(ci, ct, pairs, 22, kEight));
    const auto l = landscape_2d_compressed(ci[5], ct[2]);
    for (int j = 0; j < 22; ++j) EXPECT_EQ(serial[(5 * 4 + 2) * 22 + j], l.values[j]);
}

TEST(Batch, BesselForwardAllWorkerIndependent) {
    std::mt19937_64 rng(3);
    const auto g = build_polar_grid(8.0, 9, 16);
    std::vector<PolarImage> images;
    for (int i = 0; i < 7; ++i) images.push_back(bessel_inverse(random_real_bessel(g, rng)));
    const auto a = bessel_forward_all(images, kSerial);
    const auto b = bessel_forward_all(images, kEight);
    for (std::size_t i = 0; i < images.size(); ++i) EXPECT_EQ(a[i].coeffs, b[i].coeffs);
}

TEST(Batch, Landscapes3DWorkerIndependent) {
    std::mt19937_64 rng(4);
    const int L = 4;
    const auto g = build_sphere_grid(3.0, 4, L);
    std::vector<SphVolume> volumes;
    for (int i = 0; i < 5; ++i) volumes.push_back(random_real_volume(g, rng));
    const auto target = random_real_volume(g, rng);
    const auto betas = default_beta_grid(4);
    const auto wigner = make_wigner_set(L, betas);
    const auto serial = batch_landscapes_3d(volumes, target, wigner, kSerial);
    const auto eight = batch_landscapes_3d(volumes, target, wigner, kEight);
    for (std::size_t i = 0; i < volumes.size(); ++i) EXPECT_EQ(serial[i].values, eight[i].values);

    const auto radial = principal_basis(kernel_3d_radial(target), 3);
    const auto degree = principal_basis(kernel_3d_degree(target), 3);
    const auto dw = compress_wigner(wigner, degree);
    const auto cv = compress_volumes(volumes, radial, kEight);
    const auto ct = compress_volume(target, radial);
    const auto cs = batch_landscapes_3d_compressed(cv, ct, dw, kSerial);
    const auto c1 = batch_landscapes_3d_compressed(cv, ct, dw, kOne);
    const auto c8 = batch_landscapes_3d_compressed(cv, ct, dw, kEight);
    for (std::size_t i = 0; i < volumes.size(); ++i) {
        EXPECT_EQ(cs[i].values, c1[i].values);
        EXPECT_EQ(cs[i].values, c8[i].values);
    }
}

TEST(Batch, ErrorsInsideParallelLoopPropagate) {
    std::mt19937_64 rng(5);
    std::vector<SphVolume> volumes{random_real_volume(build_sphere_grid(3.0, 4, 4), rng),
                                   random_real_volume(build_sphere_grid(3.0, 4, 3), rng)};
    const auto target = random_real_volume(build_sphere_grid(3.0, 4, 4), rng);
    const auto wigner = make_wigner_set(4, default_beta_grid(2));
    EXPECT_THROW(batch_landscapes_3d(volumes, target, wigner, kEight), ValidationError);
    EXPECT_THROW(batch_landscapes_3d(volumes, target, wigner, kSerial), ValidationError);
}

TEST(Batch, RejectsBadPairs) {
    std::mt19937_64 rng(6);
    const auto g = build_polar_grid(6.0, 5, 12);
    const std::vector<BesselImage> images{random_real_bessel(g, rng)};
    const std::vector<PairIndex> pairs{{0, 1}};
    EXPECT_THROW(batch_landscapes_2d(images, images, pairs, 12, kEight), ValidationError);
}
