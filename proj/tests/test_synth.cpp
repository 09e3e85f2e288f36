#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rra/align2d.hpp"
#include "rra/synth.hpp"
#include "test_util.hpp"

using namespace rra;

namespace {

BlobPhantom two_blobs() {
    BlobPhantom p;
    p.blobs = {{{0.2, -0.1, 0.15}, 0.1, 1.0}, {{-0.3, 0.05, -0.2}, 0.15, 0.6}};
    return p;
}

}  // namespace

TEST(Phantom, CanonicalFileLoads) {
    const auto p = load_phantom(std::string(RRA_DATA_DIR) + "/phantom_6blob.json");
    ASSERT_EQ(p.blobs.size(), 6u);
    EXPECT_DOUBLE_EQ(p.blobs[2].width, 0.12);
    EXPECT_DOUBLE_EQ(p.blobs[5].center[1], 0.35);
}

TEST(Phantom, JsonRoundTripAndValidation) {
    const auto p = two_blobs();
    const auto q = phantom_from_json_text(phantom_to_json_text(p));
    ASSERT_EQ(q.blobs.size(), 2u);
    for (int i = 0; i < 2; ++i) {
        EXPECT_EQ(q.blobs[i].center, p.blobs[i].center);
        EXPECT_EQ(q.blobs[i].width, p.blobs[i].width);
        EXPECT_EQ(q.blobs[i].amplitude, p.blobs[i].amplitude);
    }
    EXPECT_THROW(phantom_from_json_text("{\"blobs\":[{\"center\":[1.2,0,0],\"width\":0.1,\"amplitude\":1}]}"),
                 ValidationError);
    EXPECT_THROW(phantom_from_json_text("{\"blobs\":[{\"center\":[0,0,0],\"width\":-1,\"amplitude\":1}]}"),
                 ValidationError);
    EXPECT_THROW(phantom_from_json_text("not json"), ValidationError);
    EXPECT_THROW(load_phantom("/nonexistent/phantom.json"), ValidationError);
}

TEST(PolarTemplate, CentredBlobIsRadial) {
    BlobPhantom p;
    p.blobs = {{{0.0, 0.0, 0.0}, 0.2, 1.3}};
    const auto g = build_polar_grid(10.0, 11, 20);
    const auto t = phantom_polar_template(p, {0.4, 1.1, -2.0}, g);
    for (int r = 0; r < g->R; ++r) {
        for (int q = 1; q < g->Q; ++q) EXPECT_LT(std::abs(t.at(r, q) - t.at(r, 0)), 1e-12);
    }
}

TEST(PolarTemplate, LinearInAmplitude) {
    auto p = two_blobs();
    const auto g = build_polar_grid(10.0, 11, 20);
    const EulerAngles tau{0.3, 0.8, 1.9};
    const auto t1 = phantom_polar_template(p, tau, g);
    for (auto& b : p.blobs) b.amplitude *= 2.0;
    const auto t2 = phantom_polar_template(p, tau, g);
    for (std::size_t i = 0; i < t1.values.size(); ++i) EXPECT_LT(std::abs(t2.values[i] - 2.0 * t1.values[i]), 1e-12);
}

TEST(PolarTemplate, InPlaneRotationShiftsPsi) {
    const auto p = two_blobs();
    const auto g = build_polar_grid(10.0, 11, 20);
    const EulerAngles tau{0.3, 0.8, 1.9};
    const int shift = 3;
    const EulerAngles turned{tau.gamma + shift * g->dpsi, tau.beta, tau.alpha};
    const auto t1 = phantom_polar_template(p, tau, g);
    const auto t2 = phantom_polar_template(p, turned, g);
    for (int r = 0; r < g->R; ++r) {
        for (int q = 0; q < g->Q; ++q) EXPECT_LT(std::abs(t2.at(r, q) - t1.at(r, (q + shift) % g->Q)), 1e-12);
    }
}

TEST(PolarTemplate, MatchesTransformOfProjection) {
    const auto p = two_blobs();
    const EulerAngles tau{0.7, 1.2, -0.4};
    const auto g = build_polar_grid(12.0, 13, 24);
    const auto t = phantom_polar_template(p, tau, g);
    const auto s = sample_polar(phantom_projection(p, tau, 96), g);
    double err = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        err += std::norm(s.values[i] - t.values[i]);
        norm += std::norm(t.values[i]);
    }
    EXPECT_LT(std::sqrt(err / norm), 1e-6);
}

TEST(SphVolumeSynth, CentredBlobIsMonopole) {
    BlobPhantom p;
    p.blobs = {{{0.0, 0.0, 0.0}, 0.2, 1.0}};
    const auto g = build_sphere_grid(6.0, 7, 8);
    const auto v = phantom_sph_volume(p, g);
    for (int r = 0; r < g->R; ++r) {
        EXPECT_GT(std::abs(v.at(r, 0, 0)), 1e-6);
        for (int i = 1; i < g->coeffs_per_shell(); ++i) EXPECT_LT(std::abs(v.shell(r)[i]), 1e-9);
    }
}

TEST(SphVolumeSynth, RotationEquivariance) {
    const auto p = two_blobs();
    const auto g = build_sphere_grid(4.0, 5, 14);
    const EulerAngles tau{0.9, 2.1, -1.3};
    const auto rotated_first = phantom_sph_volume(p.rotated(rotation_matrix(tau)), g);
    const auto rotated_after = rotate_sph(phantom_sph_volume(p, g), tau);
    double worst = 0.0;
    for (std::size_t i = 0; i < rotated_first.coeffs.size(); ++i) {
        worst = std::max(worst, std::abs(rotated_first.coeffs[i] - rotated_after.coeffs[i]));
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(SphVolumeSynth, ZeroAmplitudeGivesZero) {
    auto p = two_blobs();
    for (auto& b : p.blobs) b.amplitude = 0.0;
    const auto v = phantom_sph_volume(p, build_sphere_grid(3.0, 4, 4));
    for (const auto& c : v.coeffs) EXPECT_EQ(std::abs(c), 0.0);
}

TEST(Ctf, ToyProfileAndApplication) {
    const auto g = build_polar_grid(10.0, 11, 20);
    const auto ctf = toy_ctf(*g, 0.02);
    for (int r = 0; r < g->R; ++r) {
        EXPECT_DOUBLE_EQ(ctf.values[r], -std::sin(kPi * 0.02 * g->k_nodes[r] * g->k_nodes[r] / 2.0));
    }
    std::mt19937_64 rng(1);
    PolarImage t(g);
    for (auto& v : t.values) v = rra::testing::random_complex(rng);
    const CtfProfile one{std::vector<double>(g->R, 1.0)};
    const CtfProfile zero{std::vector<double>(g->R, 0.0)};
    EXPECT_EQ(apply_ctf(t, one).values, t.values);
    for (const auto& v : apply_ctf(t, zero).values) EXPECT_EQ(std::abs(v), 0.0);
    const auto c = apply_ctf(t, ctf);
    for (int r = 0; r < g->R; ++r) {
        double before = 0.0, after = 0.0;
        for (int q = 0; q < g->Q; ++q) {
            before += std::norm(t.at(r, q));
            after += std::norm(c.at(r, q));
        }
        EXPECT_NEAR(std::sqrt(after), std::abs(ctf.values[r]) * std::sqrt(before), 1e-12 * std::sqrt(before));
    }
    EXPECT_THROW(apply_ctf(t, CtfProfile{{1.0, 2.0}}), ValidationError);
}

TEST(Ctf, CommutesWithBesselTransform) {
    std::mt19937_64 rng(2);
    const auto g = build_polar_grid(10.0, 11, 20);
    PolarImage t(g);
    for (auto& v : t.values) v = rra::testing::random_complex(rng);
    const auto ctf = toy_ctf(*g, 0.01);
    const auto a = bessel_forward(apply_ctf(t, ctf));
    const auto b = apply_ctf(bessel_forward(t), ctf);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) EXPECT_LT(std::abs(a.coeffs[i] - b.coeffs[i]), 1e-13);
}

TEST(CounterRngTest, PureFunctionOfSeedAndCounter) {
    const CounterRng a(42), b(42), c(43);
    EXPECT_EQ(a.bits(17), b.bits(17));
    EXPECT_NE(a.bits(17), c.bits(17));
    EXPECT_NE(a.bits(17), a.bits(18));
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const double u = a.uniform(i);
        EXPECT_GT(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(CartNoise, ZeroSigmaIsIdentity) {
    const auto img = phantom_projection(two_blobs(), {}, 16);
    EXPECT_EQ(add_noise_cart(img, {0.0, 5}).values, img.values);
}

TEST(CartNoise, VarianceMatchesSigmaOverDx) {
    const int N = 64;
    CartImage zero(N);
    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (std::uint64_t i = 0; count < 1'000'000; ++i) {
        const auto noisy = add_noise_cart(zero, {1.0, derived_seed(99, i)});
        for (double v : noisy.values) {
            sum += v;
            sum2 += v * v;
            ++count;
        }
    }
    const double mean = sum / count;
    const double var = sum2 / count - mean * mean;
    EXPECT_NEAR(var, 1024.0, 0.01 * 1024.0);
}

TEST(CartNoise, Deterministic) {
    const auto img = phantom_projection(two_blobs(), {}, 32);
    const auto a = add_noise_cart(img, {0.3, 7});
    const auto b = add_noise_cart(img, {0.3, 7});
    const auto c = add_noise_cart(img, {0.3, 8});
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, c.values);
}

TEST(PolarNoise, VarianceMatchesQuadratureModel) {
    const auto g = build_polar_grid(8.0, 9, 16);
    const double sh = 0.7;
    const PolarImage zero(g);
    std::vector<double> ring_power(g->R, 0.0);
    const int images = 100000 / (g->Q) + 1;  // >= 10^5 draws per ring
    for (int i = 0; i < images; ++i) {
        const auto noisy = add_noise_polar(zero, sh, derived_seed(5, i));
        for (int r = 0; r < g->R; ++r) {
            for (int q = 0; q < g->Q; ++q) ring_power[r] += std::norm(noisy.at(r, q));
        }
    }
    for (int r = 0; r < g->R; ++r) {
        const double var = ring_power[r] / (static_cast<double>(images) * g->Q);
        const double expected = sh * sh / (g->w_radial[r] * g->dpsi);
        EXPECT_NEAR(var, expected, 0.05 * expected) << "ring " << r;
    }
}

TEST(PolarNoise, SigmaHatFromPixelSpacing) {
    EXPECT_DOUBLE_EQ(sigma_hat({0.5, 0}, 2.0 / 64.0), kPi * 0.5 * 32.0);
}

TEST(PixelSnr, SigmaReproducesRequestedRatio) {
    const auto img = phantom_projection(two_blobs(), {0.2, 0.4, 0.6}, 48);
    const double sigma = sigma_for_pixel_snr(img, 0.1);
    double mean = 0.0;
    for (double v : img.values) mean += v;
    mean /= img.values.size();
    double var = 0.0;
    for (double v : img.values) var += (v - mean) * (v - mean);
    var /= img.values.size();
    EXPECT_NEAR(var / (sigma * sigma / (img.dx() * img.dx())), 0.1, 1e-12);
}

TEST(LogLikelihood, Examples) {
    std::mt19937_64 rng(3);
    const auto g = build_polar_grid(6.0, 7, 12);
    PolarImage a(g), b(g);
    for (auto& v : a.values) v = rra::testing::random_complex(rng);
    for (auto& v : b.values) v = rra::testing::random_complex(rng);
    EXPECT_EQ(log_likelihood(a, a, 0.5), 0.0);
    PolarImage far = b;
    for (std::size_t i = 0; i < far.values.size(); ++i) far.values[i] = a.values[i] + 2.0 * (b.values[i] - a.values[i]);
    EXPECT_NEAR(log_likelihood(a, far, 0.5), 4.0 * log_likelihood(a, b, 0.5), 1e-10);
    double direct = 0.0;
    for (int r = 0; r < g->R; ++r) {
        for (int q = 0; q < g->Q; ++q) direct += std::norm(a.at(r, q) - b.at(r, q)) * g->w_radial[r] * g->dpsi;
    }
    EXPECT_NEAR(log_likelihood(a, b, 0.5), -direct / (2.0 * 0.25), 1e-12 * direct);
    EXPECT_THROW(log_likelihood(a, b, 0.0), ValidationError);
}

TEST(LogLikelihood, MaximumMatchesLandscapeArgmax) {
    const auto p = load_phantom(std::string(RRA_DATA_DIR) + "/phantom_6blob.json");
    const auto g = build_polar_grid(12.0, 13, 36);
    for (const EulerAngles view : {EulerAngles{0.0, 0.5, 1.0}, EulerAngles{2.0, 1.4, -0.7}}) {
        const auto tmpl = phantom_polar_template(p, view, g);
        const auto image = phantom_polar_template(p, {view.gamma + 0.31, view.beta, view.alpha}, g);
        const auto bt = bessel_forward(tmpl);
        const auto l = landscape_2d(bessel_forward(image), bt);
        int best = 0;
        double best_ll = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < g->Q; ++j) {
            const double ll = log_likelihood(image, bessel_inverse(rotate_bessel(bt, l.gammas[j])), 1.0);
            if (ll > best_ll) {
                best_ll = ll;
                best = j;
            }
        }
        EXPECT_EQ(best, l.argmax_index);
    }
}
