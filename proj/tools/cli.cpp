#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "rra/bench.hpp"
#include "rra/container.hpp"
#include "rra/pipeline.hpp"

namespace rra::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct NumericalCheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr double kFullRankTolerance = 1e-10;

struct Options {
    std::string manifest;
    std::optional<int> rank;
    std::optional<int> rank_c;
    std::optional<int> rank_d;
    std::string betas;
    std::optional<int> workers;
    std::string out;
    bool full = false;
    bool no_report = false;
    int warmup = 1;
    std::optional<int> repeats;
};

struct Context {
    RunManifest manifest;
    fs::path out;
    ExecPolicy policy;
};

Context load_context(const Options& opts) {
    Context ctx;
    ctx.manifest = load_manifest(opts.manifest);
    ctx.out = opts.out.empty() ? ctx.manifest.output_dir : fs::path(opts.out);
    if (opts.workers) require(*opts.workers >= 1, "--workers must be positive");
    ctx.policy = {Execution::Parallel, opts.workers.value_or(ctx.manifest.workers)};
    return ctx;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec && fs::is_directory(dir), "cannot create output directory " + dir.string());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), "cannot open " + path.string() + " for writing");
    out << text;
    require(out.good(), "write failed for " + path.string());
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

std::string numbered(const char* stem, int i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04d.rra", stem, i);
    return buf;
}

std::string rank_dir(int h_radial, std::optional<int> h_degree = std::nullopt) {
    char buf[64];
    if (h_degree) {
        std::snprintf(buf, sizeof buf, "rank_c%02d_d%02d", h_radial, *h_degree);
    } else {
        std::snprintf(buf, sizeof buf, "rank_%02d", h_radial);
    }
    return buf;
}

json euler_json(const EulerAngles& tau) { return {{"gamma", tau.gamma}, {"beta", tau.beta}, {"alpha", tau.alpha}}; }

json report_json(const ComparisonReport& rep, double full_per_pair, double full_total) {
    json j{{"H", rep.H},
           {"rel_frobenius", rep.rel_frobenius},
           {"correlation", rep.correlation},
           {"correlation_pair_mean", rep.correlation_pair_mean},
           {"backward_fraction_mean", rep.backward_fraction_mean},
           {"backward_fractions", rep.backward_fractions},
           {"seconds_precompute", rep.seconds_precompute},
           {"seconds_per_pair", rep.seconds_per_pair},
           {"speedup_per_pair", full_per_pair / rep.seconds_per_pair},
           {"speedup_total", full_total / (rep.seconds_precompute + rep.seconds_per_pair)}};
    if (rep.H_degree > 0) j["H_degree"] = rep.H_degree;
    return j;
}

std::string curve_row(const json& rep) {
    std::ostringstream row;
    row.precision(17);
    row << rep["H"].get<int>();
    if (rep.contains("H_degree")) row << ',' << rep["H_degree"].get<int>();
    row << ',' << rep["rel_frobenius"].get<double>() << ',' << rep["correlation"].get<double>() << ','
        << rep["backward_fraction_mean"].get<double>() << ',' << rep["speedup_per_pair"].get<double>() << '\n';
    return row.str();
}

std::string spectrum_rows(const std::string& label, const KernelMatrix& kern) {
    const auto basis = principal_basis(kern, kern.dim());
    std::ostringstream rows;
    rows.precision(17);
    for (std::size_t i = 0; i < basis->eigenvalues.size(); ++i) {
        rows << label << ',' << i << ',' << basis->eigenvalues[i] << '\n';
    }
    return rows.str();
}

// ---------------------------------------------------------------- synth

int synth2d(const Options& opts) {
    const auto ctx = load_context(opts);
    const auto& m = ctx.manifest;
    require(m.kind == RunKind::Images2D, "synth2d needs an images2d manifest");
    ensure_dir(ctx.out);
    const auto set = synthesize_images_2d(m, ctx.policy);

    json index{{"kind", "images2d"},
               {"grid", {{"K", m.K}, {"R", m.R}, {"Q", m.Q}}},
               {"image_size", m.image_size},
               {"seed", m.seed},
               {"ctf_lambdas", m.ctf_lambdas},
               {"images", json::array()},
               {"targets", json::array()}};
    for (std::size_t i = 0; i < set.images.size(); ++i) {
        const auto file = numbered("image", static_cast<int>(i));
        write_container(ctx.out / file, to_container(set.images[i]));
        index["images"].push_back({{"file", file},
                                   {"group", set.image_groups[i]},
                                   {"view", euler_json(set.image_views[i])},
                                   {"planted_shift", set.planted_shifts[i]},
                                   {"noise_sigma", set.noise_sigmas[i]}});
    }
    for (std::size_t t = 0; t < set.targets.size(); ++t) {
        const auto file = numbered("target", static_cast<int>(t));
        write_container(ctx.out / file, to_container(set.targets[t]));
        index["targets"].push_back(
            {{"file", file}, {"group", set.target_groups[t]}, {"view", euler_json(set.target_views[t])}});
    }
    write_text(ctx.out / "index.json", index.dump(2) + "\n");
    std::cout << "synth2d: " << set.images.size() << " images, " << set.targets.size() << " targets -> "
              << ctx.out.string() << "\n";
    return kOk;
}

int synth3d(const Options& opts) {
    const auto ctx = load_context(opts);
    const auto& m = ctx.manifest;
    require(m.kind == RunKind::Volumes3D, "synth3d needs a volumes3d manifest");
    ensure_dir(ctx.out);
    const auto set = synthesize_volumes_3d(m, ctx.policy);

    json index{{"kind", "volumes3d"},
               {"grid", {{"K", m.K}, {"R", m.R}, {"L", m.L}}},
               {"seed", m.seed},
               {"jitter", m.jitter},
               {"target", "target.rra"},
               {"volumes", json::array()}};
    write_container(ctx.out / "target.rra", to_container(set.target));
    for (std::size_t i = 0; i < set.volumes.size(); ++i) {
        const auto file = numbered("volume", static_cast<int>(i));
        write_container(ctx.out / file, to_container(set.volumes[i]));
        index["volumes"].push_back({{"file", file}, {"planted", euler_json(set.planted[i])}});
    }
    write_text(ctx.out / "index.json", index.dump(2) + "\n");
    std::cout << "synth3d: " << set.volumes.size() << " volumes + target -> " << ctx.out.string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------- align2d

struct Data2D {
    std::vector<BesselImage> images;
    std::vector<BesselImage> targets;
    std::vector<int> image_groups;
    std::vector<int> target_groups;
};

json load_index(const Context& ctx, const char* kind) {
    const auto path = ctx.out / "index.json";
    require(fs::exists(path), "no synthetic set at " + ctx.out.string() + "; run synth first");
    auto index = read_json(path);
    require(index.value("kind", "") == kind, "index.json is not a " + std::string(kind) + " set");
    return index;
}

Data2D load_2d(const Context& ctx) {
    const auto& m = ctx.manifest;
    const auto index = load_index(ctx, "images2d");
    const auto& g = index["grid"];
    require(g["K"].get<double>() == m.K && g["R"].get<int>() == m.R && g["Q"].get<int>() == m.Q,
            "index.json grid does not match the manifest; rerun synth2d");
    const auto grid = m.polar_grid();
    Data2D d;
    std::vector<PolarImage> polar;
    for (const auto& item : index["images"]) {
        polar.push_back(polar_image_from(read_container(ctx.out / item["file"].get<std::string>()), grid));
        d.image_groups.push_back(item["group"].get<int>());
    }
    d.images = bessel_forward_all(polar, ctx.policy);
    polar.clear();
    for (const auto& item : index["targets"]) {
        polar.push_back(polar_image_from(read_container(ctx.out / item["file"].get<std::string>()), grid));
        d.target_groups.push_back(item["group"].get<int>());
    }
    d.targets = bessel_forward_all(polar, ctx.policy);
    require(!d.images.empty() && !d.targets.empty(), "index.json lists no images or targets");
    return d;
}

json pairs_json(std::span<const PairIndex> pairs) {
    json out = json::array();
    for (const auto& p : pairs) out.push_back({p.image, p.target});
    return out;
}

int align2d(const Options& opts) {
    const auto ctx = load_context(opts);
    const auto& m = ctx.manifest;
    require(m.kind == RunKind::Images2D, "align2d needs an images2d manifest");
    const auto data = load_2d(ctx);
    const auto pairs = group_pairs(data.image_groups, data.target_groups);
    require(!pairs.empty(), "no image shares a group with any target");
    const int Q_out = m.resolved_q_out();
    const auto full_dir = ctx.out / "full";

    std::vector<int> ranks;
    if (opts.rank) {
        ranks.push_back(*opts.rank);
    } else if (!opts.full) {
        ranks = m.ranks;
    }
    require(opts.full || !ranks.empty(), "nothing to do: pass --full, --rank or list ranks in the manifest");
    for (int h : ranks) require(h >= 1 && h <= m.R, "rank " + std::to_string(h) + " outside [1, R]");

    if (opts.full) {
        ensure_dir(full_dir);
        const auto run = run_full_2d(data.images, data.targets, pairs, Q_out, ctx.policy);
        write_container(full_dir / "landscapes.rra", landscape_stack(run.values, pairs.size(), Q_out));
        const json meta{{"pairs", pairs_json(pairs)},
                        {"Q_out", Q_out},
                        {"seconds_precompute", run.times.precompute},
                        {"seconds_per_pair", run.times.per_pair}};
        write_text(full_dir / "run.json", meta.dump(2) + "\n");
        std::cout << "align2d full: " << pairs.size() << " landscapes of length " << Q_out << " in "
                  << run.times.per_pair << " s\n";
    }
    if (ranks.empty()) return kOk;

    std::optional<Container> full_values;
    double full_per_pair = 0.0;
    double full_total = 0.0;
    if (!opts.no_report) {
        require(fs::exists(full_dir / "landscapes.rra") && fs::exists(full_dir / "run.json"),
                "missing full-run cache in " + full_dir.string() + "; run align2d --full first or pass --no-report");
        const auto meta = read_json(full_dir / "run.json");
        require(meta["Q_out"].get<int>() == Q_out && meta["pairs"] == pairs_json(pairs),
                "full-run cache does not match this manifest; rerun align2d --full");
        full_values = read_container(full_dir / "landscapes.rra");
        require(full_values->data.size() == pairs.size() * static_cast<std::size_t>(Q_out),
                "full-run cache has the wrong size");
        full_per_pair = meta["seconds_per_pair"].get<double>();
        full_total = full_per_pair + meta["seconds_precompute"].get<double>();
    }

    json reports = json::array();
    std::string curve = "H,rel_frobenius,correlation,mean_f,speedup\n";
    std::string spectra = "group,index,eigenvalue\n";
    std::vector<std::string> failures;
    for (std::size_t k = 0; k < ranks.size(); ++k) {
        const int H = ranks[k];
        const auto run = run_compressed_2d(data.images, data.targets, data.image_groups, data.target_groups, pairs, H,
                                           Q_out, ctx.policy);
        const auto dir = ctx.out / rank_dir(H);
        ensure_dir(dir);
        write_container(dir / "landscapes.rra", landscape_stack(run.values, pairs.size(), Q_out));
        for (std::size_t g = 0; g < run.bases.size(); ++g) {
            if (!run.bases[g]) continue;
            write_container(dir / numbered("kernel_g", static_cast<int>(g)), to_container(run.kernels[g]));
            write_container(dir / numbered("basis_g", static_cast<int>(g)), to_container(*run.bases[g]));
            if (k == 0) spectra += spectrum_rows(std::to_string(g), run.kernels[g]);
        }
        if (!full_values) {
            std::cout << "align2d H=" << H << ": " << pairs.size() << " landscapes\n";
            continue;
        }
        auto rep = compare_2d(run.values, full_values->data, Q_out, H);
        rep.seconds_precompute = run.times.precompute;
        rep.seconds_per_pair = run.times.per_pair;
        const auto j = report_json(rep, full_per_pair, full_total);
        reports.push_back(j);
        curve += curve_row(j);
        std::cout << "align2d H=" << H << ": rel_frobenius " << rep.rel_frobenius << ", correlation "
                  << rep.correlation << ", mean f " << rep.backward_fraction_mean << "\n";
        if (H == m.R && rep.rel_frobenius > kFullRankTolerance) {
            failures.push_back("H=R rel_frobenius " + std::to_string(rep.rel_frobenius) + " exceeds 1e-10");
        }
    }
    write_text(ctx.out / "spectra.csv", spectra);
    if (full_values) {
        write_text(ctx.out / "report.json", reports.dump(2) + "\n");
        write_text(ctx.out / "curve.csv", curve);
    }
    if (!failures.empty()) throw NumericalCheckFailure(failures.front());
    return kOk;
}

// ---------------------------------------------------------------- align3d

struct Data3D {
    std::vector<SphVolume> volumes;
    SphVolume target;
};

Data3D load_3d(const Context& ctx) {
    const auto& m = ctx.manifest;
    const auto index = load_index(ctx, "volumes3d");
    const auto& g = index["grid"];
    require(g["K"].get<double>() == m.K && g["R"].get<int>() == m.R && g["L"].get<int>() == m.L,
            "index.json grid does not match the manifest; rerun synth3d");
    const auto grid = m.sphere_grid();
    Data3D d;
    d.target = sph_volume_from(read_container(ctx.out / index["target"].get<std::string>()), grid);
    for (const auto& item : index["volumes"]) {
        d.volumes.push_back(sph_volume_from(read_container(ctx.out / item["file"].get<std::string>()), grid));
    }
    require(!d.volumes.empty(), "index.json lists no volumes");
    return d;
}

Container landscape_stack_3d(std::span<const Landscape3D> ls) {
    Container c;
    c.kind = ContainerKind::Landscape;
    c.dtype = DType::F64;
    const auto& first = ls.front();
    c.dims = {ls.size(), first.betas.size(), static_cast<std::uint64_t>(first.M), static_cast<std::uint64_t>(first.M)};
    for (const auto& l : ls) c.data.insert(c.data.end(), l.values.begin(), l.values.end());
    return c;
}

std::vector<Landscape3D> unstack_3d(const Container& c, std::span<const double> betas, int M) {
    const std::size_t slab = betas.size() * static_cast<std::size_t>(M) * M;
    require(c.dims.size() == 4 && c.dims[1] == betas.size() && c.dims[2] == static_cast<std::uint64_t>(M),
            "full-run cache has the wrong shape");
    std::vector<Landscape3D> out(c.dims[0]);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].betas.assign(betas.begin(), betas.end());
        out[i].M = M;
        out[i].values.assign(c.data.begin() + static_cast<std::ptrdiff_t>(i * slab),
                             c.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * slab));
        finalize_landscape_3d(out[i]);
    }
    return out;
}

std::vector<std::pair<int, int>> ranks_3d(const Options& opts, const RunManifest& m) {
    std::vector<std::pair<int, int>> out;
    if (opts.rank || opts.rank_c || opts.rank_d) {
        const auto base = opts.rank ? opts.rank : (opts.rank_c ? opts.rank_c : opts.rank_d);
        out.emplace_back(opts.rank_c.value_or(*base), opts.rank_d.value_or(*base));
    } else if (!opts.full) {
        for (int h : m.ranks) out.emplace_back(std::min(h, m.R), std::min(h, m.L + 1));
    }
    for (const auto& [hc, hd] : out) {
        require(hc >= 1 && hc <= m.R, "radial rank " + std::to_string(hc) + " outside [1, R]");
        require(hd >= 1 && hd <= m.L + 1, "degree rank " + std::to_string(hd) + " outside [1, L+1]");
    }
    return out;
}

int align3d(const Options& opts) {
    const auto ctx = load_context(opts);
    const auto& m = ctx.manifest;
    require(m.kind == RunKind::Volumes3D, "align3d needs a volumes3d manifest");
    const auto data = load_3d(ctx);
    const auto betas = opts.betas.empty() ? m.resolved_betas() : parse_betas(opts.betas);
    const int M = 2 * m.L + 1;
    const auto ranks = ranks_3d(opts, m);
    require(opts.full || !ranks.empty(), "nothing to do: pass --full, --rank or list ranks in the manifest");
    const auto full_dir = ctx.out / "full";

    if (opts.full) {
        ensure_dir(full_dir);
        const auto run = run_full_3d(data.volumes, data.target, betas, ctx.policy);
        write_container(full_dir / "landscapes.rra", landscape_stack_3d(run.landscapes));
        const json meta{{"betas", betas},
                        {"n_volumes", data.volumes.size()},
                        {"seconds_precompute", run.times.precompute},
                        {"seconds_per_pair", run.times.per_pair}};
        write_text(full_dir / "run.json", meta.dump(2) + "\n");
        std::cout << "align3d full: " << run.landscapes.size() << " landscapes of " << betas.size() << " x " << M
                  << " x " << M << " in " << run.times.total() << " s\n";
    }
    if (ranks.empty()) return kOk;

    std::optional<std::vector<Landscape3D>> full;
    double full_per_pair = 0.0;
    double full_total = 0.0;
    if (!opts.no_report) {
        require(fs::exists(full_dir / "landscapes.rra") && fs::exists(full_dir / "run.json"),
                "missing full-run cache in " + full_dir.string() + "; run align3d --full first or pass --no-report");
        const auto meta = read_json(full_dir / "run.json");
        require(meta["betas"].get<std::vector<double>>() == betas &&
                    meta["n_volumes"].get<std::size_t>() == data.volumes.size(),
                "full-run cache does not match this run; rerun align3d --full with the same betas");
        full = unstack_3d(read_container(full_dir / "landscapes.rra"), betas, M);
        full_per_pair = meta["seconds_per_pair"].get<double>();
        full_total = full_per_pair + meta["seconds_precompute"].get<double>();
    }

    json reports = json::array();
    std::string curve = "H_C,H_D,rel_frobenius,correlation,mean_f,speedup\n";
    std::string spectra = "kernel,index,eigenvalue\n";
    std::vector<std::string> failures;
    for (std::size_t k = 0; k < ranks.size(); ++k) {
        const auto [hc, hd] = ranks[k];
        const auto run = run_compressed_3d(data.volumes, data.target, betas, hc, hd, ctx.policy);
        const auto dir = ctx.out / rank_dir(hc, hd);
        ensure_dir(dir);
        write_container(dir / "landscapes.rra", landscape_stack_3d(run.landscapes));
        write_container(dir / "kernel_radial.rra", to_container(run.radial_kernel));
        write_container(dir / "kernel_degree.rra", to_container(run.degree_kernel));
        write_container(dir / "basis_radial.rra", to_container(*run.radial_basis));
        write_container(dir / "basis_degree.rra", to_container(*run.degree_basis));
        if (k == 0) spectra += spectrum_rows("radial", run.radial_kernel) + spectrum_rows("degree", run.degree_kernel);
        if (!full) {
            std::cout << "align3d H_C=" << hc << " H_D=" << hd << ": " << run.landscapes.size() << " landscapes\n";
            continue;
        }
        auto rep = compare_3d(run.landscapes, *full, hc, hd);
        rep.seconds_precompute = run.times.precompute;
        rep.seconds_per_pair = run.times.per_pair;
        const auto j = report_json(rep, full_per_pair, full_total);
        reports.push_back(j);
        curve += curve_row(j);
        std::cout << "align3d H_C=" << hc << " H_D=" << hd << ": rel_frobenius " << rep.rel_frobenius
                  << ", correlation " << rep.correlation << ", mean f " << rep.backward_fraction_mean << "\n";
        if (hc == m.R && hd == m.L + 1 && rep.rel_frobenius > kFullRankTolerance) {
            failures.push_back("full-rank rel_frobenius " + std::to_string(rep.rel_frobenius) + " exceeds 1e-10");
        }
    }
    write_text(ctx.out / "spectra.csv", spectra);
    if (full) {
        write_text(ctx.out / "report.json", reports.dump(2) + "\n");
        write_text(ctx.out / "curve.csv", curve);
    }
    if (!failures.empty()) throw NumericalCheckFailure(failures.front());
    return kOk;
}

// ---------------------------------------------------------------- bench

json phases_json(const PhaseTimes& t) {
    return {{"precompute", t.precompute}, {"per_pair", t.per_pair}, {"total", t.total()}};
}

int bench(const Options& opts) {
    const auto ctx = load_context(opts);
    const auto& m = ctx.manifest;
    require(opts.warmup >= 0, "--warmup must be non-negative");
    BenchOptions bo{opts.warmup, opts.repeats.value_or(m.bench_repeats), ctx.policy};
    require(bo.repeats >= 1, "--repeats must be positive");
    ensure_dir(ctx.out);
    json out{{"workers", resolved_workers(ctx.policy)}, {"warmup", bo.warmup}, {"repeats", bo.repeats}};

    if (m.kind == RunKind::Images2D) {
        const int H = opts.rank.value_or(m.ranks.empty() ? 0 : m.ranks.front());
        require(H >= 1 && H <= m.R, "bench needs a rank in [1, R] (--rank or manifest ranks)");
        const auto set = synthesize_images_2d(m, ctx.policy);
        const auto images = bessel_forward_all(set.images, ctx.policy);
        const auto targets = bessel_forward_all(set.targets, ctx.policy);
        const auto r = bench_2d(images, targets, set.image_groups, set.target_groups, H, m.resolved_q_out(), m.ranks, bo);
        out.update({{"kind", "images2d"},
                    {"n_images", r.n_images},
                    {"n_targets", r.n_targets},
                    {"n_pairs", r.n_pairs},
                    {"R", r.R},
                    {"Q", r.Q},
                    {"Q_out", r.Q_out},
                    {"H", r.H},
                    {"full", phases_json(r.full)},
                    {"compressed", phases_json(r.compressed)},
                    {"speedup_per_pair", r.speedup_per_pair},
                    {"speedup_total", r.speedup_total},
                    {"rel_frobenius", r.rel_frobenius},
                    {"step1_sweep", {{"H", r.sweep_H}, {"seconds_per_pair", r.step1_seconds},
                                     {"slope", r.step1_slope}, {"r2", r.step1_r2}}}});
        std::cout << "bench 2d: " << r.n_pairs << " pairs, H=" << H << ", per-pair speedup " << r.speedup_per_pair
                  << ", total speedup " << r.speedup_total << "\n";
    } else {
        const auto ranks = ranks_3d(opts, m);
        require(!ranks.empty(), "bench needs a rank (--rank, --rank-c/--rank-d or manifest ranks)");
        const auto [hc, hd] = ranks.front();
        const auto set = synthesize_volumes_3d(m, ctx.policy);
        const auto betas = opts.betas.empty() ? m.resolved_betas() : parse_betas(opts.betas);
        const auto r = bench_3d(set.volumes, set.target, betas, hc, hd, bo);
        out.update({{"kind", "volumes3d"},
                    {"n_volumes", r.n_volumes},
                    {"R", r.R},
                    {"L", r.L},
                    {"n_betas", r.n_betas},
                    {"H_C", r.H_radial},
                    {"H_D", r.H_degree},
                    {"full", phases_json(r.full)},
                    {"compressed", phases_json(r.compressed)},
                    {"speedup_per_pair", r.speedup_per_pair},
                    {"speedup_total", r.speedup_total},
                    {"rel_frobenius", r.rel_frobenius}});
        std::cout << "bench 3d: " << r.n_volumes << " volumes, H_C=" << hc << " H_D=" << hd
                  << ", per-pair speedup " << r.speedup_per_pair << ", total speedup " << r.speedup_total << "\n";
    }
    write_text(ctx.out / "bench.json", out.dump(2) + "\n");
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Rotational alignment of images and volumes with low-rank radial and degree compression", "rra"};
    app.require_subcommand(1);
    Options opts;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--manifest", opts.manifest, "Run manifest (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--workers", opts.workers, "OpenMP worker count (overrides the manifest)");
        sub->add_option("--out", opts.out, "Output directory (overrides the manifest)");
    };
    const auto add_ranks = [&](CLI::App* sub, bool three_d) {
        sub->add_option("--rank", opts.rank, three_d ? "Rank used for both H_C and H_D" : "Compression rank H");
        if (three_d) {
            sub->add_option("--rank-c", opts.rank_c, "Radial rank H_C");
            sub->add_option("--rank-d", opts.rank_d, "Degree rank H_D");
            sub->add_option("--betas", opts.betas, "Beta grid: a count M or a comma-separated list");
        }
    };

    auto* synth2 = app.add_subcommand("synth2d", "Synthesize a 2-D image/target set");
    add_common(synth2);
    auto* synth3 = app.add_subcommand("synth3d", "Synthesize a 3-D volume set");
    add_common(synth3);

    auto* align2 = app.add_subcommand("align2d", "Align images to targets (full and/or compressed)");
    add_common(align2);
    add_ranks(align2, false);
    align2->add_flag("--full", opts.full, "Run and cache the uncompressed landscapes");
    align2->add_flag("--no-report", opts.no_report, "Skip the comparison against the cached full run");

    auto* align3 = app.add_subcommand("align3d", "Align volumes to the target (full and/or compressed)");
    add_common(align3);
    add_ranks(align3, true);
    align3->add_flag("--full", opts.full, "Run and cache the uncompressed landscapes");
    align3->add_flag("--no-report", opts.no_report, "Skip the comparison against the cached full run");

    auto* bench_cmd = app.add_subcommand("bench", "Time full vs compressed alignment");
    add_common(bench_cmd);
    add_ranks(bench_cmd, true);
    bench_cmd->add_option("--warmup", opts.warmup, "Untimed warm-up iterations");
    bench_cmd->add_option("--repeats", opts.repeats, "Timed repeats (fastest is reported)");

    try {
        std::vector<std::string> rest(args.rbegin(), args.rend());
        if (!rest.empty()) rest.pop_back();  // program name
        app.parse(rest);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    try {
        if (synth2->parsed()) return synth2d(opts);
        if (synth3->parsed()) return synth3d(opts);
        if (align2->parsed()) return align2d(opts);
        if (align3->parsed()) return align3d(opts);
        return bench(opts);
    } catch (const ValidationError& e) {
        std::cerr << "rra: error: " << e.what() << "\n";
        return kValidation;
    } catch (const NumericalCheckFailure& e) {
        std::cerr << "rra: numerical check failed: " << e.what() << "\n";
        return kNumericalCheck;
    } catch (const std::exception& e) {
        std::cerr << "rra: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace rra::cli
