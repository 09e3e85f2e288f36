#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rra/polarfft.hpp"
#include "rra/spharm.hpp"

namespace rra {

/// Gaussian blob a exp(-|x - c|^2 / (2 s^2)).
struct Blob {
    std::array<double, 3> center{};
    double width = 0.1;
    double amplitude = 1.0;
};

struct BlobPhantom {
    std::vector<Blob> blobs;

    /// Centers inside the unit ball, widths positive.
    void validate() const;
    /// Every center mapped through `rot` (the density becomes rho(R^{-1} x)).
    BlobPhantom rotated(const Rotation3& rot) const;
};

BlobPhantom load_phantom(const std::filesystem::path& path);
BlobPhantom phantom_from_json_text(const std::string& text);
std::string phantom_to_json_text(const BlobPhantom& phantom);

/// rho_hat(k) = sum a (2 pi s^2)^{3/2} exp(-s^2 |k|^2 / 2) exp(-i k . c).
cdouble phantom_fourier(const BlobPhantom& phantom, const std::array<double, 3>& k);

/// Central slice rho_hat(R_tau (k cos psi, k sin psi, 0)) on every polar node.
PolarImage phantom_polar_template(const BlobPhantom& phantom, const EulerAngles& tau, const PolarGridPtr& grid);

/// Real-space projection along z of rho(R_tau x), sampled at pixel centres;
/// its Fourier transform is the template above.
CartImage phantom_projection(const BlobPhantom& phantom, const EulerAngles& tau, int N);

/// Analytic FT sampled on every shell node, then sph_forward per shell.
/// Warns on stderr when K * max|c| exceeds L.
SphVolume phantom_sph_volume(const BlobPhantom& phantom, const SphereGridPtr& grid);

/// Radial CTF samples c(k_r) per ring of a polar grid.
struct CtfProfile {
    std::vector<double> values;
};

/// c(k) = -sin(pi lambda k^2 / 2).
CtfProfile toy_ctf(const PolarGrid& grid, double lambda);

PolarImage apply_ctf(const PolarImage& t, const CtfProfile& ctf);
BesselImage apply_ctf(const BesselImage& t, const CtfProfile& ctf);

/// Stateless counter-based generator: every draw is a pure function of
/// (seed, counter), so parallel draws do not depend on scheduling.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t counter) const;
    /// Uniform on (0, 1).
    double uniform(std::uint64_t counter) const;
    /// Standard normal (Box-Muller on counters 2c and 2c+1).
    double normal(std::uint64_t counter) const;

private:
    std::uint64_t seed_;
};

/// Per-image seed derived from a run seed.
constexpr std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index) { return seed ^ index; }

struct NoiseSpec {
    double sigma = 0.0;  // real-space unit-scale standard deviation
    std::uint64_t seed = 0;
};

/// sigma_hat^2 = pi^2 sigma^2 / dx^2.
double sigma_hat(const NoiseSpec& spec, double dx);

/// Adds iid N(0, sigma^2 / dx^2) to every pixel.
CartImage add_noise_cart(const CartImage& img, const NoiseSpec& spec);

/// Adds iid complex Gaussian noise of variance sigma_hat^2 / (w_r dpsi) to
/// every polar sample (real and imaginary parts each carry half).
PolarImage add_noise_polar(const PolarImage& img, double sigma_hat, std::uint64_t seed);

/// Real-space sigma for which var(clean pixels) / (sigma^2 / dx^2) = snr.
double sigma_for_pixel_snr(const CartImage& clean, double snr);

/// -(1 / (2 sigma_hat^2)) sum_{r,q} |A - B|^2 w_r dpsi.
double log_likelihood(const PolarImage& a, const PolarImage& b, double sigma_hat);

}  // namespace rra
