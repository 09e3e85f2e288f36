#include "rra/container.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace rra {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

namespace {

constexpr char kMagic[4] = {'R', 'R', 'A', '1'};

template <class T>
void put(std::vector<std::byte>& out, T value) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    for (std::uint8_t b : raw) out.push_back(static_cast<std::byte>(b));
}

class Reader {
public:
    explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

    template <class T>
    T get() {
        require(pos_ + sizeof(T) <= bytes_.size(), "container: truncated file");
        std::uint8_t raw[sizeof(T)];
        std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
        pos_ += sizeof(T);
        T value;
        std::memcpy(&value, raw, sizeof(T));
        return value;
    }

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::span<const std::byte> bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t payload_crc(const std::byte* data, std::size_t size) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed large payloads in chunks.
    constexpr std::size_t kChunk = 1u << 30;
    for (std::size_t off = 0; off < size; off += kChunk) {
        const auto n = static_cast<uInt>(std::min(kChunk, size - off));
        crc = crc32(crc, reinterpret_cast<const Bytef*>(data + off), n);
    }
    return static_cast<std::uint32_t>(crc);
}

std::size_t values_per_element(DType t) { return t == DType::C64 ? 2 : 1; }

Container make(ContainerKind kind, DType dtype, std::vector<std::uint64_t> dims, const double* data,
               std::size_t n_doubles) {
    Container c;
    c.kind = kind;
    c.dtype = dtype;
    c.dims = std::move(dims);
    c.data.assign(data, data + n_doubles);
    return c;
}

void expect_shape(const Container& c, ContainerKind kind, DType dtype, std::size_t ndim, const char* where) {
    require(c.kind == kind, std::string(where) + ": wrong container kind");
    require(c.dtype == dtype, std::string(where) + ": wrong container dtype");
    require(c.dims.size() == ndim, std::string(where) + ": wrong number of dimensions");
}

}  // namespace

std::uint64_t Container::element_count() const {
    std::uint64_t n = 1;
    for (auto d : dims) n *= d;
    return n;
}

std::vector<std::byte> encode_container(const Container& c) {
    require(c.data.size() == c.element_count() * values_per_element(c.dtype),
            "container: payload length does not match dims");
    std::vector<std::byte> out;
    out.reserve(24 + 8 * c.dims.size() + 8 * c.data.size() + 4);
    for (char ch : kMagic) out.push_back(static_cast<std::byte>(ch));
    put<std::uint32_t>(out, Container::kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(c.kind));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(c.dtype));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(c.dims.size()));
    for (auto d : c.dims) put<std::uint64_t>(out, d);
    const std::size_t payload_start = out.size();
    for (double v : c.data) put<double>(out, v);
    put<std::uint32_t>(out, payload_crc(out.data() + payload_start, out.size() - payload_start));
    return out;
}

Container decode_container(std::span<const std::byte> bytes) {
    require(bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0, "container: bad magic");
    Reader in(bytes.subspan(4));
    const auto version = in.get<std::uint32_t>();
    require(version == Container::kVersion, "container: unsupported version " + std::to_string(version));
    Container c;
    const auto kind = in.get<std::uint32_t>();
    require(kind >= 1 && kind <= 7, "container: unknown kind tag " + std::to_string(kind));
    c.kind = static_cast<ContainerKind>(kind);
    const auto dtype = in.get<std::uint32_t>();
    require(dtype == 1 || dtype == 2, "container: unknown dtype " + std::to_string(dtype));
    c.dtype = static_cast<DType>(dtype);
    const auto ndim = in.get<std::uint32_t>();
    require(ndim <= 16, "container: implausible dimension count");
    for (std::uint32_t i = 0; i < ndim; ++i) c.dims.push_back(in.get<std::uint64_t>());
    const std::uint64_t n = c.element_count() * values_per_element(c.dtype);
    require(in.remaining() == n * 8 + 4, "container: payload length does not match dims");
    const std::size_t payload_start = 4 + in.position();
    c.data.resize(n);
    for (auto& v : c.data) v = in.get<double>();
    const auto stored = in.get<std::uint32_t>();
    require(stored == payload_crc(bytes.data() + payload_start, n * 8), "container: CRC mismatch");
    return c;
}

void write_container(const std::filesystem::path& path, const Container& c) {
    const auto bytes = encode_container(c);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), "container: cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(out.good(), "container: write failed for " + path.string());
}

Container read_container(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "container: cannot open " + path.string());
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_container(std::as_bytes(std::span<const char>(raw)));
}

Container to_container(const CartImage& img) {
    return make(ContainerKind::CartImage, DType::F64, {static_cast<std::uint64_t>(img.N), static_cast<std::uint64_t>(img.N)},
                img.values.data(), img.values.size());
}

Container to_container(const PolarImage& img) {
    require(img.grid != nullptr, "to_container: null grid");
    return make(ContainerKind::PolarImage, DType::C64,
                {static_cast<std::uint64_t>(img.grid->R), static_cast<std::uint64_t>(img.grid->Q)},
                reinterpret_cast<const double*>(img.values.data()), 2 * img.values.size());
}

Container to_container(const BesselImage& img) {
    require(img.grid != nullptr, "to_container: null grid");
    return make(ContainerKind::BesselImage, DType::C64,
                {static_cast<std::uint64_t>(img.grid->R), static_cast<std::uint64_t>(img.grid->Q)},
                reinterpret_cast<const double*>(img.coeffs.data()), 2 * img.coeffs.size());
}

Container to_container(const SphVolume& vol) {
    require(vol.grid != nullptr, "to_container: null grid");
    return make(ContainerKind::SphVolume, DType::C64,
                {static_cast<std::uint64_t>(vol.grid->R), static_cast<std::uint64_t>(vol.shell_size())},
                reinterpret_cast<const double*>(vol.coeffs.data()), 2 * vol.coeffs.size());
}

Container to_container(const KernelMatrix& kern) {
    const auto n = static_cast<std::uint64_t>(kern.dim());
    // Symmetric, so column-major storage is also row-major.
    return make(ContainerKind::Kernel, DType::F64, {n, n}, kern.entries.data(), kern.entries.size());
}

Container to_container(const PrincipalBasis& basis) {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const RowMajor rows = basis.vectors;
    return make(ContainerKind::Basis, DType::F64,
                {static_cast<std::uint64_t>(basis.dim()), static_cast<std::uint64_t>(basis.H)}, rows.data(),
                rows.size());
}

Container to_container(const Landscape1D& l) {
    return make(ContainerKind::Landscape, DType::F64, {l.values.size()}, l.values.data(), l.values.size());
}

Container to_container(const Landscape3D& l) {
    const auto m = static_cast<std::uint64_t>(l.M);
    return make(ContainerKind::Landscape, DType::F64, {l.betas.size(), m, m}, l.values.data(), l.values.size());
}

Container landscape_stack(std::span<const double> values, std::size_t count, std::size_t length) {
    require(values.size() == count * length, "landscape_stack: size mismatch");
    return make(ContainerKind::Landscape, DType::F64, {count, length}, values.data(), values.size());
}

namespace {

void unpack_complex(const std::vector<double>& interleaved, std::vector<cdouble>& out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {interleaved[2 * i], interleaved[2 * i + 1]};
}

}  // namespace

CartImage cart_image_from(const Container& c) {
    expect_shape(c, ContainerKind::CartImage, DType::F64, 2, "cart_image_from");
    require(c.dims[0] == c.dims[1], "cart_image_from: image must be square");
    CartImage img(static_cast<int>(c.dims[0]));
    img.values = c.data;
    return img;
}

PolarImage polar_image_from(const Container& c, const PolarGridPtr& grid) {
    expect_shape(c, ContainerKind::PolarImage, DType::C64, 2, "polar_image_from");
    require(grid && c.dims[0] == static_cast<std::uint64_t>(grid->R) && c.dims[1] == static_cast<std::uint64_t>(grid->Q),
            "polar_image_from: dims do not match the grid");
    PolarImage img(grid);
    unpack_complex(c.data, img.values);
    return img;
}

BesselImage bessel_image_from(const Container& c, const PolarGridPtr& grid) {
    expect_shape(c, ContainerKind::BesselImage, DType::C64, 2, "bessel_image_from");
    require(grid && c.dims[0] == static_cast<std::uint64_t>(grid->R) && c.dims[1] == static_cast<std::uint64_t>(grid->Q),
            "bessel_image_from: dims do not match the grid");
    BesselImage img(grid);
    unpack_complex(c.data, img.coeffs);
    return img;
}

SphVolume sph_volume_from(const Container& c, const SphereGridPtr& grid) {
    expect_shape(c, ContainerKind::SphVolume, DType::C64, 2, "sph_volume_from");
    require(grid && c.dims[0] == static_cast<std::uint64_t>(grid->R) &&
                c.dims[1] == static_cast<std::uint64_t>(grid->coeffs_per_shell()),
            "sph_volume_from: dims do not match the grid");
    SphVolume vol(grid);
    unpack_complex(c.data, vol.coeffs);
    return vol;
}

}  // namespace rra
