#include "rra/synth.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace rra {

using nlohmann::json;

void BlobPhantom::validate() const {
    for (const auto& b : blobs) {
        const double r2 = b.center[0] * b.center[0] + b.center[1] * b.center[1] + b.center[2] * b.center[2];
        require(r2 < 1.0, "phantom: blob center outside the unit ball");
        require(b.width > 0.0 && std::isfinite(b.width), "phantom: blob width must be positive");
        require(std::isfinite(b.amplitude), "phantom: blob amplitude must be finite");
    }
}

BlobPhantom BlobPhantom::rotated(const Rotation3& rot) const {
    BlobPhantom out = *this;
    for (auto& b : out.blobs) b.center = rotate_vector(rot, b.center);
    return out;
}

BlobPhantom phantom_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("phantom: invalid JSON: ") + e.what());
    }
    require(doc.is_object() && doc.contains("blobs") && doc["blobs"].is_array(),
            "phantom: expected an object with a 'blobs' array");
    BlobPhantom p;
    for (const auto& item : doc["blobs"]) {
        require(item.contains("center") && item["center"].is_array() && item["center"].size() == 3,
                "phantom: each blob needs a 3-element 'center'");
        require(item.contains("width") && item.contains("amplitude"),
                "phantom: each blob needs 'width' and 'amplitude'");
        Blob b;
        for (int i = 0; i < 3; ++i) b.center[i] = item["center"][i].get<double>();
        b.width = item["width"].get<double>();
        b.amplitude = item["amplitude"].get<double>();
        p.blobs.push_back(b);
    }
    p.validate();
    return p;
}

BlobPhantom load_phantom(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "phantom: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return phantom_from_json_text(buf.str());
}

std::string phantom_to_json_text(const BlobPhantom& phantom) {
    json doc;
    doc["blobs"] = json::array();
    for (const auto& b : phantom.blobs) {
        doc["blobs"].push_back({{"center", b.center}, {"width", b.width}, {"amplitude", b.amplitude}});
    }
    return doc.dump(2);
}

cdouble phantom_fourier(const BlobPhantom& phantom, const std::array<double, 3>& k) {
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    cdouble total{};
    for (const auto& b : phantom.blobs) {
        const double s2 = b.width * b.width;
        const double envelope = b.amplitude * std::pow(kTwoPi * s2, 1.5) * std::exp(-0.5 * s2 * k2);
        const double phase = -(k[0] * b.center[0] + k[1] * b.center[1] + k[2] * b.center[2]);
        total += envelope * std::polar(1.0, phase);
    }
    return total;
}

PolarImage phantom_polar_template(const BlobPhantom& phantom, const EulerAngles& tau, const PolarGridPtr& grid) {
    require(grid != nullptr, "phantom_polar_template: null grid");
    const Rotation3 rot = rotation_matrix(tau);
    PolarImage out(grid);
    for (int r = 0; r < grid->R; ++r) {
        for (int q = 0; q < grid->Q; ++q) {
            const double k = grid->k_nodes[r];
            const std::array<double, 3> plane{k * std::cos(grid->psi_nodes[q]), k * std::sin(grid->psi_nodes[q]), 0.0};
            out.at(r, q) = phantom_fourier(phantom, rotate_vector(rot, plane));
        }
    }
    return out;
}

CartImage phantom_projection(const BlobPhantom& phantom, const EulerAngles& tau, int N) {
    CartImage img(N);
    // rho(R x) has centers R^T c; integrating over z leaves a 2-D Gaussian of
    // amplitude a sqrt(2 pi) s.
    const Rotation3 rt = transpose(rotation_matrix(tau));
    for (const auto& b : phantom.blobs) {
        const auto c = rotate_vector(rt, b.center);
        const double amp = b.amplitude * std::sqrt(kTwoPi) * b.width;
        const double inv = 1.0 / (2.0 * b.width * b.width);
        for (int n2 = 0; n2 < N; ++n2) {
            const double dy = img.pixel_center(n2) - c[1];
            for (int n1 = 0; n1 < N; ++n1) {
                const double dx = img.pixel_center(n1) - c[0];
                img.at(n1, n2) += amp * std::exp(-(dx * dx + dy * dy) * inv);
            }
        }
    }
    return img;
}

SphVolume phantom_sph_volume(const BlobPhantom& phantom, const SphereGridPtr& grid) {
    require(grid != nullptr, "phantom_sph_volume: null grid");
    double reach = 0.0;
    for (const auto& b : phantom.blobs) {
        reach = std::max(reach, std::sqrt(b.center[0] * b.center[0] + b.center[1] * b.center[1] +
                                          b.center[2] * b.center[2]));
    }
    if (grid->K * reach > grid->L) {
        std::cerr << "phantom_sph_volume: warning: K * max|c| = " << grid->K * reach
                  << " exceeds L = " << grid->L << "; expect aliasing\n";
    }
    SphVolume vol(grid);
    const int n_az = grid->n_azimuth();
    std::vector<cdouble> samples(static_cast<std::size_t>(grid->n_polar()) * n_az);
    for (int r = 0; r < grid->R; ++r) {
        const double k = grid->k_nodes[r];
        for (int j = 0; j < grid->n_polar(); ++j) {
            const double ct = grid->polar_nodes[j];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (int p = 0; p < n_az; ++p) {
                const double phi = grid->azimuth_nodes[p];
                samples[static_cast<std::size_t>(j) * n_az + p] =
                    phantom_fourier(phantom, {k * st * std::cos(phi), k * st * std::sin(phi), k * ct});
            }
        }
        const auto coeffs = sph_forward(samples, *grid);
        std::copy(coeffs.begin(), coeffs.end(), vol.shell(r));
    }
    return vol;
}

CtfProfile toy_ctf(const PolarGrid& grid, double lambda) {
    CtfProfile ctf;
    ctf.values.resize(grid.R);
    for (int r = 0; r < grid.R; ++r) {
        const double k = grid.k_nodes[r];
        ctf.values[r] = -std::sin(0.5 * kPi * lambda * k * k);
    }
    return ctf;
}

PolarImage apply_ctf(const PolarImage& t, const CtfProfile& ctf) {
    require(t.grid != nullptr, "apply_ctf: null grid");
    require(static_cast<int>(ctf.values.size()) == t.grid->R, "apply_ctf: CTF length does not match R");
    PolarImage out = t;
    for (int r = 0; r < t.grid->R; ++r) {
        for (int q = 0; q < t.grid->Q; ++q) out.at(r, q) *= ctf.values[r];
    }
    return out;
}

BesselImage apply_ctf(const BesselImage& t, const CtfProfile& ctf) {
    require(t.grid != nullptr, "apply_ctf: null grid");
    require(static_cast<int>(ctf.values.size()) == t.grid->R, "apply_ctf: CTF length does not match R");
    BesselImage out = t;
    for (int r = 0; r < t.grid->R; ++r) {
        for (int q = 0; q < t.grid->Q; ++q) out.at(r, q) *= ctf.values[r];
    }
    return out;
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
    // SplitMix64 finalizer over a Weyl sequence keyed by the seed.
    std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double sigma_hat(const NoiseSpec& spec, double dx) {
    require(dx > 0.0, "sigma_hat: dx must be positive");
    return kPi * spec.sigma / dx;
}

CartImage add_noise_cart(const CartImage& img, const NoiseSpec& spec) {
    require(spec.sigma >= 0.0, "add_noise_cart: sigma must be non-negative");
    CartImage out = img;
    if (spec.sigma == 0.0) return out;
    const CounterRng rng(spec.seed);
    const double sd = spec.sigma / img.dx();
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += sd * rng.normal(i);
    return out;
}

PolarImage add_noise_polar(const PolarImage& img, double sigma_hat, std::uint64_t seed) {
    require(img.grid != nullptr, "add_noise_polar: null grid");
    require(sigma_hat >= 0.0, "add_noise_polar: sigma_hat must be non-negative");
    PolarImage out = img;
    if (sigma_hat == 0.0) return out;
    const CounterRng rng(seed);
    const auto& g = *img.grid;
    for (int r = 0; r < g.R; ++r) {
        const double sd = sigma_hat / std::sqrt(2.0 * g.w_radial[r] * g.dpsi);
        for (int q = 0; q < g.Q; ++q) {
            const std::uint64_t c = 2 * (static_cast<std::uint64_t>(r) * g.Q + q);
            out.at(r, q) += cdouble(sd * rng.normal(c), sd * rng.normal(c + 1));
        }
    }
    return out;
}

double sigma_for_pixel_snr(const CartImage& clean, double snr) {
    require(snr > 0.0, "sigma_for_pixel_snr: snr must be positive");
    double mean = 0.0;
    for (double v : clean.values) mean += v;
    mean /= static_cast<double>(clean.values.size());
    double var = 0.0;
    for (double v : clean.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(clean.values.size());
    return std::sqrt(var / snr) * clean.dx();
}

double log_likelihood(const PolarImage& a, const PolarImage& b, double sigma_hat) {
    require(sigma_hat > 0.0, "log_likelihood: sigma_hat must be positive");
    require(a.grid && b.grid, "log_likelihood: null grid");
    require_same_grid(*a.grid, *b.grid, "log_likelihood");
    const auto& g = *a.grid;
    double total = 0.0;
    for (int r = 0; r < g.R; ++r) {
        double ring = 0.0;
        for (int q = 0; q < g.Q; ++q) ring += std::norm(a.at(r, q) - b.at(r, q));
        total += ring * g.w_radial[r] * g.dpsi;
    }
    return -total / (2.0 * sigma_hat * sigma_hat);
}

}  // namespace rra
