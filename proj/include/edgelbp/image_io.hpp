#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "edgelbp/imaging.hpp"

namespace edgelbp {

/// Decodes binary PGM/PPM (P5/P6, maxval <= 255), uncompressed BMP
/// (8-bit paletted, 24- and 32-bit) and PNG. The format is sniffed from the
/// leading bytes. Throws Errc::DecodeError on malformed or truncated input.
DecodedImage decode_image(std::span<const std::uint8_t> bytes);

/// Reads and decodes a file. Throws Errc::IoError if it cannot be read.
DecodedImage read_image(const std::filesystem::path& path);

/// `read_image` followed by `to_gray`.
GrayImage load_gray(const std::filesystem::path& path);

/// Binary PGM (P5) encoding of a gray image.
std::string encode_pgm(const GrayImage& image);

}  // namespace edgelbp
