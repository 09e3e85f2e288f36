#include "rra/compress3d.hpp"

#include <algorithm>
#include <cmath>

namespace rra {

KernelMatrix kernel_3d_radial(const SphVolume& b) {
    require(b.grid != nullptr, "kernel_3d_radial: null grid");
    const auto& g = *b.grid;
    const int R = g.R;
    const int first = sph_index(1, -1);  // skip l = 0
    const int n = g.coeffs_per_shell() - first;
    std::vector<double> eta(R);
    for (int r = 0; r < R; ++r) eta[r] = std::sqrt(g.w_radial[r]);

    Eigen::MatrixXd z(R, 2 * std::max(n, 0));
    for (int r = 0; r < R; ++r) {
        for (int i = 0; i < n; ++i) {
            const cdouble v = eta[r] * b.shell(r)[first + i];
            z(r, 2 * i) = v.real();
            z(r, 2 * i + 1) = v.imag();
        }
    }
    Eigen::MatrixXd c = z * z.transpose();
    return make_kernel(KernelKind::Radial3D, std::move(c), std::move(eta), 1.0);
}

KernelMatrix kernel_3d_degree(const SphVolume& b) {
    require(b.grid != nullptr, "kernel_3d_degree: null grid");
    const auto& g = *b.grid;
    const int L = g.L;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(L + 1, L + 1);
    for (int r = 0; r < g.R; ++r) {
        const cdouble* s = b.shell(r);
        for (int l = 1; l <= L; ++l) {
            for (int lp = 1; lp <= L; ++lp) {
                const int mmax = std::min(l, lp);
                double total = 0.0;
                for (int m = -mmax; m <= mmax; ++m) {
                    total += (std::conj(s[sph_index(l, m)]) * s[sph_index(lp, m)]).real();
                }
                d(l, lp) += g.w_radial[r] * total;
            }
        }
    }
    return make_kernel(KernelKind::Degree3D, std::move(d), std::vector<double>(L + 1, 1.0), 1.0);
}

CompressedVolume compress_volume(const SphVolume& a, const PrincipalBasisPtr& basis) {
    require(basis != nullptr, "compress_volume: null basis");
    require(a.grid != nullptr, "compress_volume: null grid");
    const int R = a.grid->R;
    require(basis->dim() == R, "compress_volume: basis dimension " + std::to_string(basis->dim()) +
                                   " does not match R=" + std::to_string(R));
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const Eigen::VectorXd> eta(basis->scale_factors.data(), R);
    const RowMajor weights = basis->vectors.transpose() * eta.asDiagonal();

    CompressedVolume out;
    out.basis = basis;
    out.L = a.grid->L;
    const int n = out.shell_size();
    out.coeffs.assign(static_cast<std::size_t>(basis->H) * n, cdouble{});
    const Eigen::Map<const RowMajor> shells(reinterpret_cast<const double*>(a.coeffs.data()), R, 2 * n);
    Eigen::Map<RowMajor> rows(reinterpret_cast<double*>(out.coeffs.data()), basis->H, 2 * n);
    rows.noalias() = weights * shells;
    return out;
}

DegreeWignerSet compress_wigner(const WignerSet& wigner, const PrincipalBasisPtr& degree_basis) {
    require(degree_basis != nullptr, "compress_wigner: null basis");
    const int L = wigner.L;
    require(degree_basis->dim() == L + 1, "compress_wigner: degree basis dimension must be L+1");
    DegreeWignerSet set;
    set.L = L;
    set.H = degree_basis->H;
    set.betas = wigner.betas;
    set.degree_basis = degree_basis;
    const int M = set.M();
    set.tables.assign(wigner.betas.size() * set.H * static_cast<std::size_t>(M) * M, 0.0);
    for (std::size_t b = 0; b < wigner.betas.size(); ++b) {
        for (int j = 0; j < set.H; ++j) {
            double* t = set.tables.data() + (b * set.H + j) * static_cast<std::size_t>(M) * M;
            for (int l = 0; l <= L; ++l) {
                const double v = degree_basis->vectors(l, j);
                const auto& block = wigner.tables[b].blocks[l];
                const int n = 2 * l + 1;
                for (int m1 = -l; m1 <= l; ++m1) {
                    double* row = t + static_cast<std::size_t>(m1 + L) * M + (L - l);
                    const double* d = block.data() + static_cast<std::size_t>(m1 + l) * n;
                    for (int k = 0; k < n; ++k) row[k] += v * d[k];
                }
            }
        }
    }
    return set;
}

Landscape3D landscape_3d_compressed(const CompressedVolume& a, const CompressedVolume& b,
                                    const DegreeWignerSet& dw) {
    require(a.basis != nullptr && a.basis == b.basis, "landscape_3d_compressed: volumes use different bases");
    require(a.L == b.L && a.L == dw.L, "landscape_3d_compressed: degree mismatch");
    require(dw.degree_basis != nullptr && !dw.betas.empty(), "landscape_3d_compressed: empty degree tables");
    const int L = a.L;
    const int M = 2 * L + 1;
    const std::size_t MM = static_cast<std::size_t>(M) * M;
    const double scale = a.basis->landscape_scale;

    // Step 1: Xtilde(m1, m2; l) = sum_h conj(a_h) b_h, dense (L+1) x M x M.
    XTilde xt;
    xt.L = L;
    xt.values.assign(static_cast<std::size_t>(L + 1) * MM, cdouble{});
    double* out = reinterpret_cast<double*>(xt.values.data());
    for (int h = 0; h < a.H(); ++h) {
        const double* pa = reinterpret_cast<const double*>(a.shell(h));
        const double* pb = reinterpret_cast<const double*>(b.shell(h));
        for (int l = 0; l <= L; ++l) {
            const int base = sph_index(l, 0);
            for (int m1 = -l; m1 <= l; ++m1) {
                const double ar = scale * pa[2 * (base + m1)];
                const double ai = scale * pa[2 * (base + m1) + 1];
                double* row = out + 2 * xt.index(l, m1, 0);
                const double* brow = pb + 2 * base;
                for (int m2 = -l; m2 <= l; ++m2) {
                    const double br = brow[2 * m2], bi = brow[2 * m2 + 1];
                    row[2 * m2] += ar * br + ai * bi;
                    row[2 * m2 + 1] += ar * bi - ai * br;
                }
            }
        }
    }

    // Step 1b: Y_j(m1, m2) = sum_l v_{j,l} Xtilde(m1, m2; l), dense M x M.
    const int HD = dw.H;
    const auto& v = dw.degree_basis->vectors;
    std::vector<cdouble> y(static_cast<std::size_t>(HD) * MM, cdouble{});
    for (int j = 0; j < HD; ++j) {
        double* yj = reinterpret_cast<double*>(y.data() + j * MM);
        for (int l = 0; l <= L; ++l) {
            const double vl = v(l, j);
            for (int m1 = -l; m1 <= l; ++m1) {
                double* row = yj + 2 * (static_cast<std::size_t>(m1 + L) * M + (L - l));
                const double* x = out + 2 * xt.index(l, m1, -l);
                for (int k = 0; k < 2 * (2 * l + 1); ++k) row[k] += vl * x[k];
            }
        }
    }

    // Steps 2 and 3 per beta.
    Landscape3D land;
    land.betas = dw.betas;
    land.M = M;
    land.values.assign(dw.betas.size() * MM, 0.0);
    std::vector<cdouble> xhat(MM);
    std::vector<cdouble> scratch(static_cast<std::size_t>(M) * (M / 2 + 1));
    for (std::size_t bi = 0; bi < dw.betas.size(); ++bi) {
        std::fill(xhat.begin(), xhat.end(), cdouble{});
        double* acc = reinterpret_cast<double*>(xhat.data());
        for (int j = 0; j < HD; ++j) {
            const double* t = dw.table(bi, j);
            const double* yj = reinterpret_cast<const double*>(y.data() + j * MM);
            for (std::size_t i = 0; i < MM; ++i) {
                acc[2 * i] += t[i] * yj[2 * i];
                acc[2 * i + 1] += t[i] * yj[2 * i + 1];
            }
        }
        detail::orders_to_values(xhat.data(), L, land.values.data() + bi * MM, scratch.data());
    }
    finalize_landscape_3d(land);
    return land;
}

Landscape3D landscape_3d_compressed(const CompressedVolume& a, const CompressedVolume& b,
                                    const PrincipalBasisPtr& degree_basis, std::span<const double> betas) {
    return landscape_3d_compressed(a, b, compress_wigner(make_wigner_set(a.L, betas), degree_basis));
}

}  // namespace rra
