#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "tuckreg/tensor.hpp"

namespace tuckreg {

/// Malformed or unreadable file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// TNSR layout: "TNSR", version 0x01, order byte d, d little-endian u32
// extents, then the entries as little-endian f64 in C order.
void write_tnsr(std::ostream& out, const DenseTensor& t);
DenseTensor read_tnsr(std::istream& in);

void write_tnsr(const std::filesystem::path& path, const DenseTensor& t);
DenseTensor read_tnsr(const std::filesystem::path& path);

/// Headerless little-endian f64 vector.
void write_f64(const std::filesystem::path& path, std::span<const double> values);
std::vector<double> read_f64(const std::filesystem::path& path);

}  // namespace tuckreg
