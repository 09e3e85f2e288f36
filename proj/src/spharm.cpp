#include "rra/spharm.hpp"

#include <cmath>

#include "fft.hpp"

namespace rra {

SphVolume::SphVolume(SphereGridPtr g) : grid(std::move(g)) {
    require(grid != nullptr, "SphVolume: null grid");
    coeffs.assign(static_cast<std::size_t>(grid->R) * grid->coeffs_per_shell(), cdouble{});
}

std::vector<double> normalized_legendre(int L, double x) {
    require(L >= 0, "normalized_legendre: L must be non-negative");
    std::vector<double> p(static_cast<std::size_t>(legendre_index(L, L)) + 1, 0.0);
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    p[0] = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 1; m <= L; ++m) {
        p[legendre_index(m, m)] =
            -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * p[legendre_index(m - 1, m - 1)];
    }
    for (int m = 0; m < L; ++m) {
        p[legendre_index(m + 1, m)] = x * std::sqrt(2.0 * m + 3.0) * p[legendre_index(m, m)];
    }
    for (int m = 0; m <= L; ++m) {
        for (int l = m + 2; l <= L; ++l) {
            const double ll = static_cast<double>(l) * l;
            const double mm = static_cast<double>(m) * m;
            const double a = std::sqrt((4.0 * ll - 1.0) / (ll - mm));
            const double lp = l - 1.0;
            const double b = std::sqrt((lp * lp - mm) / (4.0 * lp * lp - 1.0));
            p[legendre_index(l, m)] = a * (x * p[legendre_index(l - 1, m)] - b * p[legendre_index(l - 2, m)]);
        }
    }
    return p;
}

cdouble spherical_harmonic(int l, int m, double cos_theta, double phi) {
    require(l >= 0 && std::abs(m) <= l, "spherical_harmonic: need |m| <= l");
    const auto p = normalized_legendre(l, cos_theta);
    const int am = std::abs(m);
    const cdouble y = p[legendre_index(l, am)] * std::polar(1.0, am * phi);
    if (m >= 0) return y;
    return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

namespace {

void check_samples(std::span<const cdouble> samples, const SphereGrid& grid, const char* where) {
    require(samples.size() == static_cast<std::size_t>(grid.n_polar()) * grid.n_azimuth(),
            std::string(where) + ": sample count does not match sphere grid");
}

}  // namespace

std::vector<cdouble> sph_forward(std::span<const cdouble> samples, const SphereGrid& grid) {
    check_samples(samples, grid, "sph_forward");
    const int L = grid.L;
    const int n_az = grid.n_azimuth();
    std::vector<cdouble> coeffs(grid.coeffs_per_shell(), cdouble{});
    std::vector<cdouble> ring(n_az);
    const auto& plan = detail::FftPlan::one_d(n_az, detail::FftSign::Forward);
    const double dphi = grid.azimuth_weight();
    for (int j = 0; j < grid.n_polar(); ++j) {
        // ring[m mod n_az] = sum_p f(j, p) e^{-i m phi_p} dphi
        plan.execute(&samples[static_cast<std::size_t>(j) * n_az], ring.data());
        const auto p = normalized_legendre(L, grid.polar_nodes[j]);
        const double w = grid.polar_weights[j] * dphi;
        for (int l = 0; l <= L; ++l) {
            for (int m = -l; m <= l; ++m) {
                const int am = std::abs(m);
                double pl = p[legendre_index(l, am)];
                if (m < 0 && (am % 2) != 0) pl = -pl;  // conj(Y_l^{-|m|}) = (-1)^m Pbar e^{-i m phi}
                coeffs[sph_index(l, m)] += w * pl * ring[frequency_slot(m, n_az)];
            }
        }
    }
    return coeffs;
}

std::vector<cdouble> sph_synthesis(std::span<const cdouble> coeffs, const SphereGrid& grid) {
    require(coeffs.size() == static_cast<std::size_t>(grid.coeffs_per_shell()),
            "sph_synthesis: coefficient count does not match L");
    const int L = grid.L;
    const int n_az = grid.n_azimuth();
    std::vector<cdouble> samples(static_cast<std::size_t>(grid.n_polar()) * n_az);
    std::vector<cdouble> spectrum(n_az);
    const auto& plan = detail::FftPlan::one_d(n_az, detail::FftSign::Backward);
    for (int j = 0; j < grid.n_polar(); ++j) {
        std::fill(spectrum.begin(), spectrum.end(), cdouble{});
        const auto p = normalized_legendre(L, grid.polar_nodes[j]);
        for (int l = 0; l <= L; ++l) {
            for (int m = -l; m <= l; ++m) {
                const int am = std::abs(m);
                double pl = p[legendre_index(l, am)];
                if (m < 0 && (am % 2) != 0) pl = -pl;
                spectrum[frequency_slot(m, n_az)] += pl * coeffs[sph_index(l, m)];
            }
        }
        plan.execute(spectrum.data(), &samples[static_cast<std::size_t>(j) * n_az]);
    }
    return samples;
}

cdouble sph_evaluate(std::span<const cdouble> coeffs, int L, double cos_theta, double phi) {
    require(coeffs.size() >= static_cast<std::size_t>((L + 1) * (L + 1)), "sph_evaluate: too few coefficients");
    const auto p = normalized_legendre(L, cos_theta);
    cdouble total{};
    for (int l = 0; l <= L; ++l) {
        for (int m = -l; m <= l; ++m) {
            const int am = std::abs(m);
            double pl = p[legendre_index(l, am)];
            if (m < 0 && (am % 2) != 0) pl = -pl;
            total += coeffs[sph_index(l, m)] * pl * std::polar(1.0, m * phi);
        }
    }
    return total;
}

WignerDTable wigner_d(double beta, int L) {
    require(L >= 0, "wigner_d: L must be non-negative");
    WignerDTable table;
    table.beta = beta;
    table.L = L;
    table.blocks.resize(L + 1);
    table.blocks[0] = {1.0};

    const double p = std::cos(0.5 * beta);
    const double q = std::sin(0.5 * beta);
    // d holds the (n+1) x (n+1) matrix for j = n / 2, index i = m + j.
    std::vector<double> d{1.0};
    std::vector<double> next;
    for (int n = 1; n <= 2 * L; ++n) {
        const int old_dim = n;
        const int dim = n + 1;
        next.assign(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int i = 0; i < old_dim; ++i) {
            for (int k = 0; k < old_dim; ++k) {
                const double v = d[static_cast<std::size_t>(i) * old_dim + k] / n;
                if (v == 0.0) continue;
                const double a = std::sqrt(static_cast<double>(n - i));
                const double b = std::sqrt(static_cast<double>(i + 1));
                const double c = std::sqrt(static_cast<double>(n - k));
                const double e = std::sqrt(static_cast<double>(k + 1));
                next[static_cast<std::size_t>(i) * dim + k] += a * c * p * v;
                next[static_cast<std::size_t>(i + 1) * dim + k] -= b * c * q * v;
                next[static_cast<std::size_t>(i) * dim + k + 1] += a * e * q * v;
                next[static_cast<std::size_t>(i + 1) * dim + k + 1] += b * e * p * v;
            }
        }
        d.swap(next);
        if (n % 2 == 0) table.blocks[n / 2] = d;
    }
    return table;
}

Rotation3 rotation_matrix(const EulerAngles& tau) {
    const auto rz = [](double a) {
        const double c = std::cos(a), s = std::sin(a);
        return Rotation3{c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0};
    };
    const double c = std::cos(tau.beta), s = std::sin(tau.beta);
    const Rotation3 ry{c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c};
    return multiply(rz(tau.alpha), multiply(ry, rz(tau.gamma)));
}

EulerAngles euler_from_matrix(const Rotation3& rot) {
    EulerAngles tau;
    const double cb = std::clamp(rot[8], -1.0, 1.0);
    tau.beta = std::acos(cb);
    const double sb = std::hypot(rot[2], rot[5]);
    if (sb > 1e-12) {
        tau.alpha = std::atan2(rot[5], rot[2]);
        tau.gamma = std::atan2(rot[7], -rot[6]);
    } else {
        tau.gamma = 0.0;
        tau.alpha = std::atan2(-rot[1], rot[4]);
    }
    return tau;
}

Rotation3 multiply(const Rotation3& a, const Rotation3& b) {
    Rotation3 out{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[3 * i + k] * b[3 * k + j];
            out[3 * i + j] = s;
        }
    }
    return out;
}

std::array<double, 3> rotate_vector(const Rotation3& rot, const std::array<double, 3>& v) {
    return {rot[0] * v[0] + rot[1] * v[1] + rot[2] * v[2],
            rot[3] * v[0] + rot[4] * v[1] + rot[5] * v[2],
            rot[6] * v[0] + rot[7] * v[1] + rot[8] * v[2]};
}

Rotation3 transpose(const Rotation3& rot) {
    return {rot[0], rot[3], rot[6], rot[1], rot[4], rot[7], rot[2], rot[5], rot[8]};
}

EulerAngles compose(const EulerAngles& first, const EulerAngles& second) {
    return euler_from_matrix(multiply(rotation_matrix(second), rotation_matrix(first)));
}

SphVolume rotate_sph(const SphVolume& vol, const EulerAngles& tau) {
    require(vol.grid != nullptr, "rotate_sph: null grid");
    return rotate_sph(vol, tau, wigner_d(tau.beta, vol.grid->L));
}

SphVolume rotate_sph(const SphVolume& vol, const EulerAngles& tau, const WignerDTable& table) {
    require(vol.grid != nullptr, "rotate_sph: null grid");
    const int L = vol.grid->L;
    require(table.L >= L, "rotate_sph: Wigner table degree too small");
    require(std::abs(table.beta - tau.beta) < 1e-15, "rotate_sph: Wigner table computed for a different beta");
    SphVolume out(vol.grid);
    std::vector<cdouble> phase_a(2 * L + 1), phase_g(2 * L + 1), tmp(2 * L + 1);
    for (int m = -L; m <= L; ++m) {
        phase_a[m + L] = std::polar(1.0, -m * tau.alpha);
        phase_g[m + L] = std::polar(1.0, -m * tau.gamma);
    }
    for (int r = 0; r < vol.grid->R; ++r) {
        const cdouble* src = vol.shell(r);
        cdouble* dst = out.shell(r);
        for (int l = 0; l <= L; ++l) {
            for (int m2 = -l; m2 <= l; ++m2) tmp[m2 + l] = phase_g[m2 + L] * src[sph_index(l, m2)];
            for (int m1 = -l; m1 <= l; ++m1) {
                cdouble s{};
                for (int m2 = -l; m2 <= l; ++m2) s += table(l, m1, m2) * tmp[m2 + l];
                dst[sph_index(l, m1)] = phase_a[m1 + L] * s;
            }
        }
    }
    return out;
}

}  // namespace rra
