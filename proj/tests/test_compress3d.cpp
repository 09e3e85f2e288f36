#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "rra/compress3d.hpp"
#include "rra/metrics.hpp"
#include "rra/synth.hpp"
#include "test_util.hpp"

using namespace rra;
using rra::testing::random_complex;
using rra::testing::random_real_volume;
using rra::testing::random_volume;

namespace {

std::vector<double> flatten(const Eigen::MatrixXd& m) { return {m.data(), m.data() + m.size()}; }

std::vector<double> centred(std::vector<double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double& x : v) x -= mean;
    return v;
}

PrincipalBasisPtr random_full_basis(KernelKind kind, int dim, std::vector<double> eta, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) g(i, j) = n(rng);
    }
    const auto k = make_kernel(kind, g * g.transpose() + 0.1 * Eigen::MatrixXd::Identity(dim, dim), std::move(eta), 1.0);
    return principal_basis(k, dim);
}

std::vector<double> sqrt_weights(const SphereGrid& g) {
    std::vector<double> eta(g.R);
    for (int r = 0; r < g.R; ++r) eta[r] = std::sqrt(g.w_radial[r]);
    return eta;
}

BlobPhantom smooth_phantom() {
    BlobPhantom p;
    p.blobs = {{{0.30, 0.10, 0.05}, 0.25, 1.0}, {{-0.25, 0.20, -0.10}, 0.2, 0.8}, {{0.05, -0.35, 0.20}, 0.3, 1.2}};
    return p;
}

}  // namespace

TEST(Kernel3DRadial, MonopoleOnlyGivesZero) {
    std::mt19937_64 rng(1);
    const auto g = build_sphere_grid(3.0, 4, 3);
    SphVolume v(g);
    for (int r = 0; r < g->R; ++r) v.at(r, 0, 0) = random_complex(rng);
    EXPECT_EQ(kernel_3d_radial(v).entries.norm(), 0.0);
}

TEST(Kernel3DRadial, RotationInvariant) {
    std::mt19937_64 rng(2);
    const auto g = build_sphere_grid(3.0, 4, 6);
    const auto v = random_volume(g, rng);
    const auto c1 = kernel_3d_radial(v).entries;
    const auto c2 = kernel_3d_radial(rotate_sph(v, {0.3, 1.9, -2.4})).entries;
    EXPECT_LT((c1 - c2).cwiseAbs().maxCoeff(), 1e-11 * c1.cwiseAbs().maxCoeff());
}

TEST(Kernel3DRadial, MatchesRotationIntegral) {
    // The double integral over (tau, tau') of the kernel bracket depends only on
    // the relative rotation, so it reduces to one Haar integral of
    // 2 Re[<B_r, B_r'> - <B_r, R_tau B_r'>] over SO(3).
    std::mt19937_64 rng(3);
    const int L = 3;
    const auto g = build_sphere_grid(2.0, 4, L);
    const auto v = random_volume(g, rng);
    const int n = 20;
    const auto beta_rule = gauss_legendre(n);
    const auto eta = sqrt_weights(*g);
    Eigen::MatrixXd direct = Eigen::MatrixXd::Zero(g->R, g->R);
    for (int ib = 0; ib < n; ++ib) {
        const double beta = std::acos(beta_rule.nodes[ib]);
        const auto d = wigner_d(beta, L);
        for (int ia = 0; ia < n; ++ia) {
            for (int ig = 0; ig < n; ++ig) {
                const EulerAngles tau{kTwoPi * ig / n, beta, kTwoPi * ia / n};
                const auto rv = rotate_sph(v, tau, d);
                for (int r = 0; r < g->R; ++r) {
                    for (int s = 0; s < g->R; ++s) {
                        cdouble same{}, moved{};
                        for (int i = 0; i < g->coeffs_per_shell(); ++i) {
                            same += std::conj(v.shell(r)[i]) * v.shell(s)[i];
                            moved += std::conj(v.shell(r)[i]) * rv.shell(s)[i];
                        }
                        direct(r, s) += beta_rule.weights[ib] * 2.0 * (same - moved).real() * eta[r] * eta[s];
                    }
                }
            }
        }
    }
    direct = 0.5 * (direct + direct.transpose()).eval();
    const auto c = kernel_3d_radial(v).entries;
    EXPECT_GE(correlation(flatten(c), flatten(direct)), 0.999);
    const double ratio = direct(0, 0) / c(0, 0);
    EXPECT_GT(ratio, 0.0);
    EXPECT_LT((direct - ratio * c).cwiseAbs().maxCoeff(), 1e-9 * direct.cwiseAbs().maxCoeff());
}

TEST(Kernel3DDegree, RowAndColumnZeroVanish) {
    std::mt19937_64 rng(4);
    const auto g = build_sphere_grid(3.0, 4, 5);
    const auto d = kernel_3d_degree(random_volume(g, rng)).entries;
    for (int l = 0; l <= 5; ++l) {
        EXPECT_EQ(d(0, l), 0.0);
        EXPECT_EQ(d(l, 0), 0.0);
    }
    EXPECT_GT(d(1, 1), 0.0);
}

TEST(Kernel3DDegree, SingleDegreeGivesSingleEntry) {
    std::mt19937_64 rng(5);
    const auto g = build_sphere_grid(3.0, 4, 5);
    SphVolume v(g);
    for (int r = 0; r < g->R; ++r) {
        for (int m = -3; m <= 3; ++m) v.at(r, 3, m) = random_complex(rng);
    }
    const auto d = kernel_3d_degree(v).entries;
    for (int l = 0; l <= 5; ++l) {
        for (int lp = 0; lp <= 5; ++lp) {
            if (l == 3 && lp == 3) {
                EXPECT_GT(d(l, lp), 0.0);
            } else {
                EXPECT_EQ(d(l, lp), 0.0);
            }
        }
    }
}

TEST(Kernel3DDegree, DiagonalRotationInvariant) {
    std::mt19937_64 rng(6);
    const auto g = build_sphere_grid(3.0, 4, 6);
    const auto v = random_volume(g, rng);
    const auto d1 = kernel_3d_degree(v).entries;
    const auto d2 = kernel_3d_degree(rotate_sph(v, {1.0, 0.7, 2.0})).entries;
    for (int l = 0; l <= 6; ++l) EXPECT_NEAR(d1(l, l), d2(l, l), 1e-11 * d1.diagonal().maxCoeff());
}

TEST(Kernels3D, SymmetricPositiveSemidefinite) {
    std::mt19937_64 rng(7);
    const auto g = build_sphere_grid(3.0, 5, 6);
    const auto v = random_real_volume(g, rng);
    for (const auto& k : {kernel_3d_radial(v), kernel_3d_degree(v)}) {
        EXPECT_LT((k.entries - k.entries.transpose()).cwiseAbs().maxCoeff(), 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k.entries);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10 * es.eigenvalues().maxCoeff());
    }
}

TEST(CompressVolume, UnitVectorSelectsScaledShell) {
    std::mt19937_64 rng(8);
    const auto g = build_sphere_grid(3.0, 4, 3);
    const auto v = random_volume(g, rng);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4, 4);
    d(2, 2) = 1.0;
    const auto basis = principal_basis(make_kernel(KernelKind::Radial3D, d, sqrt_weights(*g), 1.0), 1);
    const auto c = compress_volume(v, basis);
    for (int i = 0; i < g->coeffs_per_shell(); ++i) {
        EXPECT_LT(std::abs(c.shell(0)[i] - std::sqrt(g->w_radial[2]) * v.shell(2)[i]), 1e-14);
    }
}

TEST(CompressVolume, FullBasisReconstructs) {
    std::mt19937_64 rng(9);
    const auto g = build_sphere_grid(3.0, 5, 4);
    const auto v = random_volume(g, rng);
    const auto basis = random_full_basis(KernelKind::Radial3D, 5, sqrt_weights(*g), rng);
    const auto c = compress_volume(v, basis);
    // shells = diag(1/eta) U * principal shells
    const Eigen::MatrixXd inverse = basis->vectors;
    for (int r = 0; r < g->R; ++r) {
        for (int i = 0; i < g->coeffs_per_shell(); ++i) {
            cdouble s{};
            for (int h = 0; h < 5; ++h) s += inverse(r, h) * c.shell(h)[i];
            EXPECT_LT(std::abs(s / basis->scale_factors[r] - v.shell(r)[i]), 1e-11);
        }
    }
}

TEST(CompressVolume, ZeroVolumeGivesZero) {
    std::mt19937_64 rng(10);
    const auto g = build_sphere_grid(3.0, 4, 3);
    const auto c = compress_volume(SphVolume(g), random_full_basis(KernelKind::Radial3D, 4, sqrt_weights(*g), rng));
    for (const auto& x : c.coeffs) EXPECT_EQ(x, cdouble{});
}

TEST(CompressWigner, UnitDegreeVectorIsPaddedBlock) {
    const int L = 4;
    const int M = 2 * L + 1;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(L + 1, L + 1);
    d(2, 2) = 1.0;
    const auto basis = principal_basis(make_kernel(KernelKind::Degree3D, d, std::vector<double>(L + 1, 1.0), 1.0), 1);
    const std::vector<double> betas{0.6};
    const auto set = compress_wigner(make_wigner_set(L, betas), basis);
    const auto table = wigner_d(0.6, L);
    for (int m1 = -L; m1 <= L; ++m1) {
        for (int m2 = -L; m2 <= L; ++m2) {
            const double expected = (std::abs(m1) <= 2 && std::abs(m2) <= 2) ? table(2, m1, m2) : 0.0;
            EXPECT_EQ(set.table(0, 0)[(m1 + L) * M + (m2 + L)], expected);
        }
    }
}

TEST(CompressWigner, ZeroBetaIsDiagonalPartialSum) {
    std::mt19937_64 rng(11);
    const int L = 5;
    const int M = 2 * L + 1;
    const auto basis = random_full_basis(KernelKind::Degree3D, L + 1, std::vector<double>(L + 1, 1.0), rng);
    const std::vector<double> betas{0.0};
    const auto set = compress_wigner(make_wigner_set(L, betas), basis);
    for (int j = 0; j < L + 1; ++j) {
        for (int m1 = -L; m1 <= L; ++m1) {
            for (int m2 = -L; m2 <= L; ++m2) {
                double expected = 0.0;
                if (m1 == m2) {
                    for (int l = std::abs(m1); l <= L; ++l) expected += basis->vectors(l, j);
                }
                EXPECT_NEAR(set.table(0, j)[(m1 + L) * M + (m2 + L)], expected, 1e-13);
            }
        }
    }
}

TEST(CompressWigner, MatchesDirectSum) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> order(-6, 6);
    const int L = 6;
    const int M = 2 * L + 1;
    const auto basis = random_full_basis(KernelKind::Degree3D, L + 1, std::vector<double>(L + 1, 1.0), rng);
    const std::vector<double> betas{1.234};
    const auto set = compress_wigner(make_wigner_set(L, betas), basis);
    const auto d = wigner_d(1.234, L);
    for (int trial = 0; trial < 5; ++trial) {
        const int m1 = order(rng), m2 = order(rng);
        for (int j = 0; j < L + 1; ++j) {
            double expected = 0.0;
            for (int l = std::max(std::abs(m1), std::abs(m2)); l <= L; ++l) expected += basis->vectors(l, j) * d(l, m1, m2);
            EXPECT_NEAR(set.table(0, j)[(m1 + L) * M + (m2 + L)], expected, 1e-12);
        }
    }
}

TEST(CompressedLandscape3D, FullRankWithArtificialBasesIsExact) {
    std::mt19937_64 rng(13);
    const int L = 4;
    const auto g = build_sphere_grid(3.0, 5, L);
    const auto a = random_volume(g, rng);
    const auto b = random_volume(g, rng);
    const auto radial = random_full_basis(KernelKind::Radial3D, g->R, sqrt_weights(*g), rng);
    const auto degree = random_full_basis(KernelKind::Degree3D, L + 1, std::vector<double>(L + 1, 1.0), rng);
    const std::vector<double> betas{-2.0, 0.3, 1.5};
    const auto full = landscape_3d(a, b, betas);
    const auto approx = landscape_3d_compressed(compress_volume(a, radial), compress_volume(b, radial), degree, betas);
    EXPECT_LT(rel_frobenius(approx.values, full.values), 1e-9);
}

TEST(CompressedLandscape3D, FullRankFromDataKernelsCorrelatesAfterCentering) {
    const int L = 10;
    const auto g = build_sphere_grid(6.0, 7, L);
    const auto p = smooth_phantom();
    const auto target = phantom_sph_volume(p, g);
    const auto image = phantom_sph_volume(p.rotated(rotation_matrix({0.5, 1.1, -0.8})), g);
    const auto radial = principal_basis(kernel_3d_radial(target), g->R);
    const auto degree = principal_basis(kernel_3d_degree(target), L + 1);
    const auto betas = default_beta_grid(8);
    const auto full = landscape_3d(image, target, betas);
    const auto approx =
        landscape_3d_compressed(compress_volume(image, radial), compress_volume(target, radial), degree, betas);
    EXPECT_GE(correlation(centred(approx.values), centred(full.values)), 0.99);
}

TEST(CompressedLandscape3D, CenteredErrorShrinksWithRank) {
    const int L = 10;
    const auto g = build_sphere_grid(6.0, 7, L);
    const auto p = smooth_phantom();
    const auto target = phantom_sph_volume(p, g);
    const auto image = phantom_sph_volume(p.rotated(rotation_matrix({-0.3, 0.9, 2.2})), g);
    const auto kc = kernel_3d_radial(target);
    const auto kd = kernel_3d_degree(target);
    const auto betas = default_beta_grid(6);
    const auto full = centred(landscape_3d(image, target, betas).values);
    double previous = std::numeric_limits<double>::infinity();
    for (int H : {1, 2, 4, 7}) {
        const auto radial = principal_basis(kc, H);
        const auto degree = principal_basis(kd, H);
        const auto approx = centred(
            landscape_3d_compressed(compress_volume(image, radial), compress_volume(target, radial), degree, betas)
                .values);
        const double err = rel_frobenius(approx, full);
        EXPECT_LE(err, previous * 1.01 + 1e-12) << "H=" << H;
        previous = err;
    }
}

TEST(Spectra3D, KernelEigenvaluesDecayOnPhantom) {
    const int L = 12;
    const auto g = build_sphere_grid(12.0, 13, L);
    const auto v = phantom_sph_volume(smooth_phantom(), g);
    const auto radial = principal_basis(kernel_3d_radial(v), g->R);
    const auto degree = principal_basis(kernel_3d_degree(v), L + 1);
    const int hc = (g->R + 2) / 3;
    const int hd = (L + 1 + 2) / 3;
    EXPECT_LE(radial->eigenvalues[hc] / radial->eigenvalues[0], 1e-2);
    EXPECT_LE(degree->eigenvalues[hd] / degree->eigenvalues[0], 1e-2);
}
