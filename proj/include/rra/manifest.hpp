#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rra/grids.hpp"
#include "rra/synth.hpp"

namespace rra {

enum class RunKind { Images2D, Volumes3D };

/// A run description loaded from JSON. Relative paths resolve against the
/// manifest's directory.
///
///   {"kind": "images2d" | "volumes3d",
///    "grid": {"K": 48, "R": 49, "Q": 98}  or  {"K": 24, "R": 25, "L": 24},
///    "image_size": 64, "phantom": "phantom.json" | {"blobs": [...]},
///    "noise": {"sigma": s} | {"pixel_snr": snr}, "seed": 7,
///    "n_images": 8, "n_targets": 4, "ctf_lambdas": [0.002, 0.003],
///    "ranks": [1, 2, 4, 8], "betas": 49 | [b0, b1, ...], "q_out": 98,
///    "jitter": 0.02, "output_dir": "out", "workers": 1, "bench_repeats": 3}
struct RunManifest {
    RunKind kind = RunKind::Images2D;
    std::filesystem::path base_dir;

    double K = 0.0;
    int R = 0;
    int Q = 0;  // 2-D only
    int L = 0;  // 3-D only

    int image_size = 64;
    BlobPhantom phantom;
    double noise_sigma = 0.0;
    std::optional<double> pixel_snr;
    std::uint64_t seed = 0;

    int n_images = 1;
    int n_targets = 1;
    std::vector<double> ctf_lambdas;  // one CTF group per entry; empty means no CTF
    std::vector<int> ranks;
    std::vector<double> betas;  // 3-D; empty means default_beta_grid(2L+1)
    int q_out = 0;              // 0 means Q
    double jitter = 0.0;        // 3-D blob-centre jitter (standard deviation)
    std::filesystem::path output_dir;
    int workers = 1;
    int bench_repeats = 3;

    int n_groups() const { return ctf_lambdas.empty() ? 1 : static_cast<int>(ctf_lambdas.size()); }
    int resolved_q_out() const { return q_out > 0 ? q_out : Q; }
    PolarGridPtr polar_grid() const;
    SphereGridPtr sphere_grid() const;
    std::vector<double> resolved_betas() const;
};

RunManifest manifest_from_json_text(const std::string& text, const std::filesystem::path& base_dir);
RunManifest load_manifest(const std::filesystem::path& path);

/// Parses "--betas": a count M (equispaced grid) or a comma-separated list.
std::vector<double> parse_betas(const std::string& text);

}  // namespace rra
