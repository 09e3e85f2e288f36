#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rra/align2d.hpp"
#include "rra/align3d.hpp"
#include "rra/compress2d.hpp"
#include "rra/polarfft.hpp"
#include "rra/spharm.hpp"

namespace rra {

enum class ContainerKind : std::uint32_t {
    CartImage = 1,
    PolarImage = 2,
    BesselImage = 3,
    SphVolume = 4,
    Kernel = 5,
    Basis = 6,
    Landscape = 7,
};

enum class DType : std::uint32_t { F64 = 1, C64 = 2 };

/// One typed array. Complex payloads are stored interleaved (re, im) in `data`.
struct Container {
    static constexpr std::uint32_t kVersion = 1;

    ContainerKind kind = ContainerKind::Landscape;
    DType dtype = DType::F64;
    std::vector<std::uint64_t> dims;
    std::vector<double> data;

    /// Product of dims.
    std::uint64_t element_count() const;
};

/// "RRA1", version, kind, dtype, ndim, dims, payload, CRC32 of payload; all little-endian.
std::vector<std::byte> encode_container(const Container& c);
Container decode_container(std::span<const std::byte> bytes);

void write_container(const std::filesystem::path& path, const Container& c);
Container read_container(const std::filesystem::path& path);

Container to_container(const CartImage& img);
Container to_container(const PolarImage& img);
Container to_container(const BesselImage& img);
Container to_container(const SphVolume& vol);
Container to_container(const KernelMatrix& kern);
/// Basis vectors, dims [dim, H].
Container to_container(const PrincipalBasis& basis);
Container to_container(const Landscape1D& l);
/// dims [n_beta, M, M] in the Landscape3D layout.
Container to_container(const Landscape3D& l);
/// A stack of equal-length landscapes, dims [count, length].
Container landscape_stack(std::span<const double> values, std::size_t count, std::size_t length);

CartImage cart_image_from(const Container& c);
PolarImage polar_image_from(const Container& c, const PolarGridPtr& grid);
BesselImage bessel_image_from(const Container& c, const PolarGridPtr& grid);
SphVolume sph_volume_from(const Container& c, const SphereGridPtr& grid);

}  // namespace rra
