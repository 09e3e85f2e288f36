#include "rra/polarfft.hpp"

#include <cmath>
#include <iostream>

#include "fft.hpp"

namespace rra {

CartImage::CartImage(int n) : N(n), values(static_cast<std::size_t>(n) * n, 0.0) {
    require(n >= 2, "CartImage: N must be at least 2");
}

PolarImage::PolarImage(PolarGridPtr g) : grid(std::move(g)) {
    require(grid != nullptr, "PolarImage: null grid");
    values.assign(static_cast<std::size_t>(grid->R) * grid->Q, cdouble{});
}

BesselImage::BesselImage(PolarGridPtr g) : grid(std::move(g)) {
    require(grid != nullptr, "BesselImage: null grid");
    coeffs.assign(static_cast<std::size_t>(grid->R) * grid->Q, cdouble{});
}

void require_same_grid(const PolarGrid& a, const PolarGrid& b, const char* where) {
    require(a.same_as(b), std::string(where) + ": polar grid mismatch");
}

namespace {

void axis_phases(const CartImage& img, double k, std::vector<cdouble>& out) {
    out.resize(img.N);
    for (int n = 0; n < img.N; ++n) {
        const double phase = -k * img.pixel_center(n);
        out[n] = {std::cos(phase), std::sin(phase)};
    }
}

cdouble separable_sum(const CartImage& img, const std::vector<cdouble>& e1,
                      const std::vector<cdouble>& e2) {
    const int N = img.N;
    double re = 0.0;
    double im = 0.0;
    for (int n2 = 0; n2 < N; ++n2) {
        const double* row = img.values.data() + static_cast<std::size_t>(n2) * N;
        double row_re = 0.0;
        double row_im = 0.0;
        for (int n1 = 0; n1 < N; ++n1) {
            row_re += row[n1] * e1[n1].real();
            row_im += row[n1] * e1[n1].imag();
        }
        re += row_re * e2[n2].real() - row_im * e2[n2].imag();
        im += row_re * e2[n2].imag() + row_im * e2[n2].real();
    }
    const double dx2 = img.dx() * img.dx();
    return {dx2 * re, dx2 * im};
}

}  // namespace

cdouble fourier_at(const CartImage& img, double kx, double ky) {
    std::vector<cdouble> e1, e2;
    axis_phases(img, kx, e1);
    axis_phases(img, ky, e2);
    return separable_sum(img, e1, e2);
}

PolarImage sample_polar(const CartImage& img, const PolarGridPtr& grid) {
    require(grid != nullptr, "sample_polar: null grid");
    require(img.N >= 2 && img.values.size() == static_cast<std::size_t>(img.N) * img.N,
            "sample_polar: image dimension mismatch");
    const double nyquist = 0.5 * kPi * img.N;
    if (grid->K > nyquist) {
        std::cerr << "sample_polar: warning: K=" << grid->K << " exceeds Nyquist " << nyquist << "\n";
    }
    PolarImage out(grid);
    const int R = grid->R;
    const int Q = grid->Q;
#pragma omp parallel
    {
        std::vector<cdouble> e1, e2;
#pragma omp for schedule(static)
        for (int r = 0; r < R; ++r) {
            for (int q = 0; q < Q; ++q) {
                const double k = grid->k_nodes[r];
                axis_phases(img, k * std::cos(grid->psi_nodes[q]), e1);
                axis_phases(img, k * std::sin(grid->psi_nodes[q]), e2);
                out.at(r, q) = separable_sum(img, e1, e2);
            }
        }
    }
    return out;
}

BesselImage bessel_forward(const PolarImage& p) {
    require(p.grid != nullptr, "bessel_forward: null grid");
    const int R = p.grid->R;
    const int Q = p.grid->Q;
    require(p.values.size() == static_cast<std::size_t>(R) * Q, "bessel_forward: dimension mismatch");
    BesselImage out(p.grid);
    const auto& plan = detail::FftPlan::one_d(Q, detail::FftSign::Forward);
    for (int r = 0; r < R; ++r) {
        plan.execute(&p.values[static_cast<std::size_t>(r) * Q], &out.coeffs[static_cast<std::size_t>(r) * Q]);
    }
    for (auto& c : out.coeffs) c *= p.grid->dpsi;
    return out;
}

PolarImage bessel_inverse(const BesselImage& b) {
    require(b.grid != nullptr, "bessel_inverse: null grid");
    const int R = b.grid->R;
    const int Q = b.grid->Q;
    require(b.coeffs.size() == static_cast<std::size_t>(R) * Q, "bessel_inverse: dimension mismatch");
    PolarImage out(b.grid);
    const auto& plan = detail::FftPlan::one_d(Q, detail::FftSign::Backward);
    for (int r = 0; r < R; ++r) {
        plan.execute(&b.coeffs[static_cast<std::size_t>(r) * Q], &out.values[static_cast<std::size_t>(r) * Q]);
    }
    for (auto& v : out.values) v /= kTwoPi;
    return out;
}

BesselImage rotate_bessel(const BesselImage& b, double gamma) {
    BesselImage out = b;
    const int R = b.grid->R;
    const int Q = b.grid->Q;
    std::vector<cdouble> phase(Q);
    for (int j = 0; j < Q; ++j) phase[j] = std::polar(1.0, -signed_frequency(j, Q) * gamma);
    for (int r = 0; r < R; ++r) {
        for (int j = 0; j < Q; ++j) out.at(r, j) *= phase[j];
    }
    return out;
}

}  // namespace rra
