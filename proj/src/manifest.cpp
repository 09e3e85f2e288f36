#include "rra/manifest.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include "rra/align3d.hpp"

namespace rra {

using nlohmann::json;

namespace {

const std::set<std::string> kKeys{"kind",    "grid",       "image_size", "phantom", "noise",  "seed",
                                  "n_images", "n_targets", "ctf_lambdas", "ranks",  "betas",  "q_out",
                                  "jitter",  "output_dir", "workers",    "bench_repeats"};

template <class T>
T field(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("manifest: field '") + key + "' has the wrong type");
    }
}

}  // namespace

PolarGridPtr RunManifest::polar_grid() const { return build_polar_grid(K, R, Q); }

SphereGridPtr RunManifest::sphere_grid() const { return build_sphere_grid(K, R, L); }

std::vector<double> RunManifest::resolved_betas() const {
    return betas.empty() ? default_beta_grid(2 * L + 1) : betas;
}

RunManifest manifest_from_json_text(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("manifest: invalid JSON: ") + e.what());
    }
    require(doc.is_object(), "manifest: top level must be an object");
    for (const auto& [key, value] : doc.items()) {
        require(kKeys.count(key) == 1, "manifest: unknown field '" + key + "'");
    }

    RunManifest m;
    m.base_dir = base_dir;
    const auto kind = field<std::string>(doc, "kind", "");
    if (kind == "images2d") {
        m.kind = RunKind::Images2D;
    } else if (kind == "volumes3d") {
        m.kind = RunKind::Volumes3D;
    } else {
        throw ValidationError("manifest: 'kind' must be \"images2d\" or \"volumes3d\"");
    }

    require(doc.contains("grid") && doc["grid"].is_object(), "manifest: missing 'grid' object");
    const auto& grid = doc["grid"];
    m.K = field<double>(grid, "K", 0.0);
    require(m.K > 0.0, "manifest: grid.K must be positive");
    m.R = field<int>(grid, "R", default_radial_count(m.K));
    if (m.kind == RunKind::Images2D) {
        m.Q = field<int>(grid, "Q", 0);
        require(m.Q >= 2 && m.Q % 2 == 0, "manifest: grid.Q must be even and >= 2");
    } else {
        m.L = field<int>(grid, "L", -1);
        require(m.L >= 0, "manifest: grid.L must be given for volumes3d");
    }
    require(m.R >= 1, "manifest: grid.R must be positive");

    m.image_size = field<int>(doc, "image_size", 64);
    require(m.image_size >= 2, "manifest: image_size must be at least 2");

    require(doc.contains("phantom"), "manifest: missing 'phantom'");
    if (doc["phantom"].is_string()) {
        std::filesystem::path p = doc["phantom"].get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        m.phantom = load_phantom(p);
    } else {
        m.phantom = phantom_from_json_text(doc["phantom"].dump());
    }

    if (doc.contains("noise")) {
        const auto& noise = doc["noise"];
        require(noise.is_object(), "manifest: 'noise' must be an object");
        require(!(noise.contains("sigma") && noise.contains("pixel_snr")),
                "manifest: give noise.sigma or noise.pixel_snr, not both");
        m.noise_sigma = field<double>(noise, "sigma", 0.0);
        require(m.noise_sigma >= 0.0, "manifest: noise.sigma must be non-negative");
        if (noise.contains("pixel_snr")) {
            m.pixel_snr = field<double>(noise, "pixel_snr", 0.0);
            require(*m.pixel_snr > 0.0, "manifest: noise.pixel_snr must be positive");
        }
    }
    m.seed = field<std::uint64_t>(doc, "seed", 0);
    m.n_images = field<int>(doc, "n_images", 1);
    m.n_targets = field<int>(doc, "n_targets", 1);
    require(m.n_images >= 1 && m.n_targets >= 1, "manifest: n_images and n_targets must be positive");
    m.ctf_lambdas = field<std::vector<double>>(doc, "ctf_lambdas", {});
    m.ranks = field<std::vector<int>>(doc, "ranks", {});
    const int max_rank = m.kind == RunKind::Images2D ? m.R : std::max(m.R, m.L + 1);
    for (int h : m.ranks) require(h >= 1 && h <= max_rank, "manifest: rank " + std::to_string(h) + " out of range");
    if (doc.contains("betas")) {
        const auto& b = doc["betas"];
        if (b.is_number_integer()) {
            m.betas = default_beta_grid(b.get<int>());
        } else {
            m.betas = field<std::vector<double>>(doc, "betas", {});
            require(!m.betas.empty(), "manifest: 'betas' list is empty");
        }
    }
    m.q_out = field<int>(doc, "q_out", 0);
    require(m.q_out == 0 || (m.kind == RunKind::Images2D && m.q_out >= m.Q),
            "manifest: q_out must be at least Q");
    m.jitter = field<double>(doc, "jitter", 0.0);
    require(m.jitter >= 0.0, "manifest: jitter must be non-negative");
    std::filesystem::path out = field<std::string>(doc, "output_dir", "out");
    m.output_dir = out.is_relative() ? base_dir / out : out;
    m.workers = field<int>(doc, "workers", 1);
    require(m.workers >= 1, "manifest: workers must be positive");
    m.bench_repeats = field<int>(doc, "bench_repeats", 3);
    require(m.bench_repeats >= 1, "manifest: bench_repeats must be positive");
    return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "manifest: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return manifest_from_json_text(buf.str(), path.parent_path());
}

std::vector<double> parse_betas(const std::string& text) {
    require(!text.empty(), "betas: empty value");
    if (text.find(',') == std::string::npos) {
        std::size_t used = 0;
        int m = 0;
        try {
            m = std::stoi(text, &used);
        } catch (const std::exception&) {
            throw ValidationError("betas: expected a count or a comma-separated list, got '" + text + "'");
        }
        if (used == text.size()) return default_beta_grid(m);
    }
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            require(used == item.size(), "");
        } catch (const std::exception&) {
            throw ValidationError("betas: cannot parse '" + item + "'");
        }
    }
    return out;
}

}  // namespace rra
