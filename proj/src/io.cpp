#include "tuckreg/io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <limits>

namespace tuckreg {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'N', 'S', 'R'};
constexpr std::uint8_t kVersion = 1;

template <typename U>
U to_little(U v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        U out = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            out = static_cast<U>((out << 8) | ((v >> (8 * i)) & 0xFF));
        }
        return out;
    }
}

template <typename U>
void put(std::ostream& out, U v) {
    const U le = to_little(v);
    out.write(reinterpret_cast<const char*>(&le), sizeof(U));
}

template <typename U>
U get(std::istream& in) {
    U v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(U));
    if (!in) throw FormatError("truncated input");
    return to_little(v);
}

void put_f64(std::ostream& out, double v) { put(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get<std::uint64_t>(in)); }

}  // namespace

void write_tnsr(std::ostream& out, const DenseTensor& t) {
    if (t.order() > 255) throw std::invalid_argument("write_tnsr: order exceeds 255");
    out.write(kMagic.data(), kMagic.size());
    put<std::uint8_t>(out, kVersion);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(t.order()));
    for (std::size_t n : t.dims()) {
        if (n > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("write_tnsr: extent exceeds u32");
        put<std::uint32_t>(out, static_cast<std::uint32_t>(n));
    }
    for (double v : t.data()) put_f64(out, v);
    if (!out) throw FormatError("write_tnsr: stream error");
}

DenseTensor read_tnsr(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw FormatError("read_tnsr: bad magic");
    if (get<std::uint8_t>(in) != kVersion) throw FormatError("read_tnsr: unsupported version");
    const std::size_t order = get<std::uint8_t>(in);
    if (order == 0) throw FormatError("read_tnsr: order 0");
    Dims dims(order);
    for (auto& n : dims) {
        n = get<std::uint32_t>(in);
        if (n == 0) throw FormatError("read_tnsr: zero extent");
    }
    std::vector<double> data(dims_product(dims));
    for (double& v : data) v = get_f64(in);
    try {
        return DenseTensor(std::move(dims), std::move(data));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("read_tnsr: ") + e.what());
    }
}

void write_tnsr(const std::filesystem::path& path, const DenseTensor& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    write_tnsr(out, t);
}

DenseTensor read_tnsr(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return read_tnsr(in);
}

void write_f64(const std::filesystem::path& path, std::span<const double> values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    for (double v : values) put_f64(out, v);
    if (!out) throw FormatError("write_f64: stream error");
}

std::vector<double> read_f64(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw FormatError("cannot open " + path.string());
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes % 8 != 0) throw FormatError(path.string() + ": length is not a multiple of 8");
    in.seekg(0);
    std::vector<double> values(bytes / 8);
    for (double& v : values) v = get_f64(in);
    return values;
}

}  // namespace tuckreg
