#include "rra/align3d.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"

namespace rra {

EulerAngles Landscape3D::tau(std::size_t flat) const {
    const std::size_t b = flat / slab();
    const std::size_t rem = flat % slab();
    EulerAngles t;
    t.beta = betas[b];
    t.alpha = kTwoPi * static_cast<double>(rem / M) / M;
    t.gamma = kTwoPi * static_cast<double>(rem % M) / M;
    return t;
}

void finalize_landscape_3d(Landscape3D& l) {
    require(!l.values.empty(), "landscape_3d: empty landscape");
    const auto it = std::max_element(l.values.begin(), l.values.end());
    l.argmax_flat = static_cast<int>(it - l.values.begin());
    l.max_value = *it;
}

std::vector<double> default_beta_grid(int M) {
    require(M >= 1, "default_beta_grid: M must be at least 1");
    std::vector<double> betas(M);
    for (int j = 0; j < M; ++j) betas[j] = -kPi + kTwoPi * j / M;
    return betas;
}

WignerSet make_wigner_set(int L, std::span<const double> betas) {
    require(!betas.empty(), "make_wigner_set: empty beta list");
    WignerSet set;
    set.L = L;
    set.betas.assign(betas.begin(), betas.end());
    set.tables.resize(betas.size());
    for (std::size_t j = 0; j < betas.size(); ++j) set.tables[j] = wigner_d(betas[j], L);
    return set;
}

namespace {

void check_pair(const SphVolume& a, const SphVolume& b, const char* where) {
    require(a.grid && b.grid, std::string(where) + ": null grid");
    require(a.grid->same_as(*b.grid), std::string(where) + ": sphere grid mismatch");
}

}  // namespace

cdouble sph_inner_product(const SphVolume& a, const SphVolume& b) {
    check_pair(a, b, "sph_inner_product");
    cdouble total{};
    for (int r = 0; r < a.grid->R; ++r) {
        cdouble shell{};
        for (int i = 0; i < a.shell_size(); ++i) shell += std::conj(a.shell(r)[i]) * b.shell(r)[i];
        total += a.grid->w_radial[r] * shell;
    }
    return total;
}

XTilde landscape_3d_step1(const SphVolume& a, const SphVolume& b) {
    check_pair(a, b, "landscape_3d");
    const int L = a.grid->L;
    XTilde xt;
    xt.L = L;
    xt.values.assign(static_cast<std::size_t>(L + 1) * xt.M() * xt.M(), cdouble{});
    double* out = reinterpret_cast<double*>(xt.values.data());
    for (int r = 0; r < a.grid->R; ++r) {
        const double w = a.grid->w_radial[r];
        const double* pa = reinterpret_cast<const double*>(a.shell(r));
        const double* pb = reinterpret_cast<const double*>(b.shell(r));
        for (int l = 0; l <= L; ++l) {
            const int base = sph_index(l, 0);
            for (int m1 = -l; m1 <= l; ++m1) {
                const double ar = w * pa[2 * (base + m1)];
                const double ai = w * pa[2 * (base + m1) + 1];
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
    return xt;
}

namespace detail {

void orders_to_values(const cdouble* xhat, int L, double* out, cdouble* scratch) {
    const int M = 2 * L + 1;
    const int half = M / 2 + 1;
    const auto centred = [&](int m1, int m2) { return xhat[static_cast<std::size_t>(m1 + L) * M + (m2 + L)]; };
    for (int t1 = 0; t1 < M; ++t1) {
        const int m1 = signed_frequency(t1, M);
        for (int t2 = 0; t2 < half; ++t2) {
            const int m2 = signed_frequency(t2, M);
            scratch[static_cast<std::size_t>(t1) * half + t2] =
                0.5 * (std::conj(centred(m1, m2)) + centred(-m1, -m2));
        }
    }
    FftPlan::real_2d(M, M).execute_real(scratch, out);
}

}  // namespace detail

Landscape3D landscape_3d_from_xtilde(const XTilde& xt, const WignerSet& wigner) {
    const int L = xt.L;
    const int M = xt.M();
    require(wigner.L >= L, "landscape_3d: Wigner set degree too small");
    require(!wigner.betas.empty(), "landscape_3d: empty beta list");
    Landscape3D land;
    land.betas = wigner.betas;
    land.M = M;
    land.values.assign(wigner.betas.size() * land.slab(), 0.0);
    std::vector<cdouble> xhat(land.slab());
    std::vector<cdouble> scratch(static_cast<std::size_t>(M) * (M / 2 + 1));
    for (std::size_t b = 0; b < wigner.betas.size(); ++b) {
        std::fill(xhat.begin(), xhat.end(), cdouble{});
        double* acc = reinterpret_cast<double*>(xhat.data());
        const double* src = reinterpret_cast<const double*>(xt.values.data());
        for (int l = 0; l <= L; ++l) {
            const auto& block = wigner.tables[b].blocks[l];
            const int n = 2 * l + 1;
            for (int m1 = -l; m1 <= l; ++m1) {
                const double* d = block.data() + static_cast<std::size_t>(m1 + l) * n;
                double* row = acc + 2 * (static_cast<std::size_t>(m1 + L) * M + (L - l));
                const double* x = src + 2 * xt.index(l, m1, -l);
                for (int k = 0; k < n; ++k) {
                    row[2 * k] += d[k] * x[2 * k];
                    row[2 * k + 1] += d[k] * x[2 * k + 1];
                }
            }
        }
        detail::orders_to_values(xhat.data(), L, land.values.data() + b * land.slab(), scratch.data());
    }
    finalize_landscape_3d(land);
    return land;
}

Landscape3D landscape_3d(const SphVolume& a, const SphVolume& b, std::span<const double> betas) {
    check_pair(a, b, "landscape_3d");
    return landscape_3d(a, b, make_wigner_set(a.grid->L, betas));
}

Landscape3D landscape_3d(const SphVolume& a, const SphVolume& b, const WignerSet& wigner) {
    return landscape_3d_from_xtilde(landscape_3d_step1(a, b), wigner);
}

Landscape3D brute_force_landscape_3d(const SphVolume& a, const SphVolume& b, std::span<const double> betas) {
    check_pair(a, b, "brute_force_landscape_3d");
    require(!betas.empty(), "brute_force_landscape_3d: empty beta list");
    const int M = a.grid->M;
    Landscape3D land;
    land.betas.assign(betas.begin(), betas.end());
    land.M = M;
    land.values.assign(betas.size() * land.slab(), 0.0);
    for (std::size_t bi = 0; bi < betas.size(); ++bi) {
        const auto table = wigner_d(betas[bi], a.grid->L);
        for (int ia = 0; ia < M; ++ia) {
            for (int ig = 0; ig < M; ++ig) {
                const EulerAngles tau{kTwoPi * ig / M, betas[bi], kTwoPi * ia / M};
                const SphVolume rotated = rotate_sph(b, tau, table);
                land.values[bi * land.slab() + static_cast<std::size_t>(ia) * M + ig] =
                    sph_inner_product(a, rotated).real();
            }
        }
    }
    finalize_landscape_3d(land);
    return land;
}

}  // namespace rra
