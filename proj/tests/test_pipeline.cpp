#include <gtest/gtest.h>

#include <cstring>

#include "rra/pipeline.hpp"
#include "test_util.hpp"

using namespace rra;

namespace {

const char* kPhantom = R"({"blobs": [
    {"center": [0.3, 0.1, 0.0], "width": 0.12, "amplitude": 1.0},
    {"center": [-0.2, 0.25, 0.1], "width": 0.15, "amplitude": 0.7},
    {"center": [0.0, -0.3, -0.2], "width": 0.1, "amplitude": 0.5}]})";

RunManifest small_2d(const std::string& extra = "") {
    return manifest_from_json_text(std::string(R"({"kind": "images2d", "grid": {"K": 10, "R": 8, "Q": 24},
        "image_size": 32, "n_images": 6, "n_targets": 4, "seed": 11, "phantom": )") +
                                       kPhantom + extra + "}",
                                   ".");
}

RunManifest small_3d(const std::string& extra = "") {
    return manifest_from_json_text(std::string(R"({"kind": "volumes3d", "grid": {"K": 4, "R": 5, "L": 8},
        "n_images": 3, "seed": 5, "betas": 9, "phantom": )") +
                                       kPhantom + extra + "}",
                                   ".");
}

bool same_bits(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(cdouble)) == 0;
}

}  // namespace

TEST(Pipeline, RotateOnGridMatchesBesselRotation) {
    std::mt19937_64 rng(1);
    const auto grid = build_polar_grid(6.0, 5, 16);
    PolarImage p(grid);
    for (auto& v : p.values) v = rra::testing::random_complex(rng);
    for (int shift : {0, 1, 5, -3, 17}) {
        const auto expected = bessel_inverse(rotate_bessel(bessel_forward(p), shift * grid->dpsi));
        EXPECT_LT(rra::testing::max_abs_diff(rotate_on_grid(p, shift).values, expected.values), 1e-12) << shift;
    }
}

TEST(Pipeline, RandomRotationsCoverTheSphereUniformly) {
    const CounterRng rng(3);
    double mean_cos = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) mean_cos += std::cos(random_rotation(rng, 3 * i).beta);
    EXPECT_NEAR(mean_cos / n, 0.0, 0.02);
}

TEST(Pipeline, NoiselessImagesAreRotatedTemplates) {
    const auto m = small_2d();
    const auto set = synthesize_images_2d(m, {Execution::Serial});
    ASSERT_EQ(set.images.size(), 6u);
    ASSERT_EQ(set.targets.size(), 4u);
    for (int i = 0; i < 6; ++i) {
        const auto tmpl = phantom_polar_template(m.phantom, set.image_views[i], set.grid);
        EXPECT_TRUE(same_bits(set.images[i].values, rotate_on_grid(tmpl, set.planted_shifts[i]).values));
        // The planted angle is the landscape argmax against the unrotated template.
        const auto l = landscape_2d(bessel_forward(set.images[i]), bessel_forward(tmpl));
        EXPECT_EQ(l.argmax_index, set.planted_shifts[i]);
    }
}

TEST(Pipeline, SynthesisIsIndependentOfWorkers) {
    const auto m = small_2d(R"(, "noise": {"pixel_snr": 0.5}, "ctf_lambdas": [0.01, 0.02])");
    const auto a = synthesize_images_2d(m, {Execution::Serial});
    const auto b = synthesize_images_2d(m, {Execution::Parallel, 8});
    for (std::size_t i = 0; i < a.images.size(); ++i) EXPECT_TRUE(same_bits(a.images[i].values, b.images[i].values));
    for (std::size_t t = 0; t < a.targets.size(); ++t) EXPECT_TRUE(same_bits(a.targets[t].values, b.targets[t].values));
    EXPECT_GT(a.noise_sigmas[0], 0.0);
    EXPECT_EQ(a.image_groups, (std::vector<int>{0, 1, 0, 1, 0, 1}));

    const auto other_seed = synthesize_images_2d(small_2d(R"(, "noise": {"pixel_snr": 0.5}, "ctf_lambdas": [0.01, 0.02], "seed": 12)"),
                                                 {Execution::Serial});
    EXPECT_FALSE(same_bits(a.images[0].values, other_seed.images[0].values));
}

TEST(Pipeline, GroupPairs) {
    const std::vector<int> images{0, 1, 0};
    const std::vector<int> targets{1, 0, 0, 1};
    const auto pairs = group_pairs(images, targets);
    ASSERT_EQ(pairs.size(), 6u);
    EXPECT_EQ(pairs[0].image, 0);
    EXPECT_EQ(pairs[0].target, 1);
    EXPECT_EQ(pairs[2].image, 1);
    EXPECT_EQ(pairs[2].target, 0);
}

TEST(Pipeline, FullRankCompressedRunReproducesFullRun) {
    const auto m = small_2d(R"(, "ctf_lambdas": [0.01, 0.02])");
    const auto set = synthesize_images_2d(m, {Execution::Serial});
    const auto images = bessel_forward_all(set.images, {Execution::Serial});
    const auto targets = bessel_forward_all(set.targets, {Execution::Serial});
    const auto pairs = group_pairs(set.image_groups, set.target_groups);
    const auto full = run_full_2d(images, targets, pairs, 48, {Execution::Serial});
    const auto comp = run_compressed_2d(images, targets, set.image_groups, set.target_groups, pairs, m.R, 48,
                                        {Execution::Serial});
    ASSERT_EQ(full.values.size(), pairs.size() * 48);
    ASSERT_EQ(comp.bases.size(), 2u);
    const auto rep = compare_2d(comp.values, full.values, 48, m.R);
    EXPECT_LT(rep.rel_frobenius, 1e-10);
    EXPECT_NEAR(rep.correlation, 1.0, 1e-12);
    EXPECT_EQ(rep.backward_fraction_mean, 1.0);
    EXPECT_EQ(rep.backward_fractions.size(), pairs.size());

    double previous = 2.0;
    for (int H = 1; H <= m.R; ++H) {
        const auto c = run_compressed_2d(images, targets, set.image_groups, set.target_groups, pairs, H, 48,
                                         {Execution::Serial});
        const double err = compare_2d(c.values, full.values, 48, H).rel_frobenius;
        EXPECT_LE(err, previous * (1.0 + 1e-9) + 1e-12) << H;
        previous = err;
    }
}

TEST(Pipeline, CompressedRunRejectsCrossGroupPairs) {
    const auto m = small_2d(R"(, "ctf_lambdas": [0.01, 0.02])");
    const auto set = synthesize_images_2d(m, {Execution::Serial});
    const auto images = bessel_forward_all(set.images, {Execution::Serial});
    const auto targets = bessel_forward_all(set.targets, {Execution::Serial});
    const std::vector<PairIndex> cross{{0, 1}};
    EXPECT_THROW(run_compressed_2d(images, targets, set.image_groups, set.target_groups, cross, 2, 24, {}),
                 ValidationError);
}

TEST(Pipeline, VolumesAreRotatedTargetsWithoutJitter) {
    const auto m = small_3d();
    const auto set = synthesize_volumes_3d(m, {Execution::Serial});
    ASSERT_EQ(set.volumes.size(), 3u);
    for (std::size_t i = 0; i < set.volumes.size(); ++i) {
        const auto expected = rotate_sph(set.target, set.planted[i]);
        EXPECT_LT(rra::testing::max_abs_diff(set.volumes[i].coeffs, expected.coeffs),
                  1e-8 * rra::testing::max_abs(expected.coeffs));
    }
    const auto jittered = synthesize_volumes_3d(small_3d(R"(, "jitter": 0.05)"), {Execution::Parallel, 4});
    EXPECT_GT(rra::testing::max_abs_diff(jittered.volumes[0].coeffs, set.volumes[0].coeffs), 1e-3);
}

TEST(Pipeline, FullRankCompressed3DReproducesFull) {
    const auto m = small_3d(R"(, "jitter": 0.03)");
    const auto set = synthesize_volumes_3d(m, {Execution::Serial});
    const auto betas = m.resolved_betas();
    const auto full = run_full_3d(set.volumes, set.target, betas, {Execution::Serial});
    const auto comp = run_compressed_3d(set.volumes, set.target, betas, m.R, m.L + 1, {Execution::Serial});
    const auto rep = compare_3d(comp.landscapes, full.landscapes, m.R, m.L + 1);
    EXPECT_LT(rep.rel_frobenius, 1e-10);
    EXPECT_EQ(rep.backward_fraction_mean, 1.0);
    EXPECT_EQ(rep.H_degree, m.L + 1);

    const auto low = run_compressed_3d(set.volumes, set.target, betas, 2, 2, {Execution::Parallel, 3});
    const auto low_rep = compare_3d(low.landscapes, full.landscapes, 2, 2);
    EXPECT_GT(low_rep.rel_frobenius, rep.rel_frobenius);
    EXPECT_GT(low_rep.correlation, 0.5);
}

TEST(Pipeline, CompareRejectsBadShapes) {
    const std::vector<double> a{1, 2, 3, 4}, b{1, 2, 3};
    EXPECT_THROW(compare_2d(a, b, 2, 1), ValidationError);
    EXPECT_THROW(compare_2d(a, a, 3, 1), ValidationError);
}
