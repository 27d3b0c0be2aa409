#include "edgelbp/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "edgelbp/errors.hpp"

namespace edgelbp {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(Errc::DecodeError, what); }

class PnmReader {
 public:
  explicit PnmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) fail("PNM header: expected integer");
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > (1L << 30)) fail("PNM header: value out of range");
    }
    return static_cast<int>(value);
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

DecodedImage decode_pnm(std::span<const std::uint8_t> bytes) {
  const int channels = bytes[1] == '5' ? 1 : 3;
  PnmReader reader(bytes);
  DecodedImage img;
  img.width = reader.next_int();
  img.height = reader.next_int();
  const int maxval = reader.next_int();
  if (maxval < 1 || maxval > 255) fail("PNM maxval must be in [1, 255]");
  // Exactly one whitespace byte separates the header from the raster.
  reader.advance(1);
  if (img.width <= 0 || img.height <= 0) fail("PNM has zero dimension");
  const std::size_t size = static_cast<std::size_t>(img.width) * img.height * channels;
  if (reader.pos() > bytes.size() || bytes.size() - reader.pos() < size) fail("PNM raster truncated");
  img.channels = channels;
  img.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos()),
                  bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos() + size));
  if (maxval != 255) {
    for (auto& v : img.data) v = static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
  }
  return img;
}

std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) | static_cast<std::uint32_t>(b[off + 1]) << 8 |
         static_cast<std::uint32_t>(b[off + 2]) << 16 | static_cast<std::uint32_t>(b[off + 3]) << 24;
}

std::uint16_t le16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | b[off + 1] << 8);
}

DecodedImage decode_bmp(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 54) fail("BMP header truncated");
  const std::uint32_t data_offset = le32(bytes, 10);
  const std::uint32_t header_size = le32(bytes, 14);
  if (header_size < 40) fail("unsupported BMP header (OS/2 core headers are not handled)");
  const auto width = static_cast<std::int32_t>(le32(bytes, 18));
  const auto raw_height = static_cast<std::int32_t>(le32(bytes, 22));
  const std::uint16_t bpp = le16(bytes, 28);
  const std::uint32_t compression = le32(bytes, 30);
  if (compression != 0 && !(compression == 3 && bpp == 32)) fail("compressed BMP is not supported");
  if (bpp != 8 && bpp != 24 && bpp != 32) fail("unsupported BMP bit depth " + std::to_string(bpp));
  if (width <= 0 || raw_height == 0) fail("BMP has zero dimension");

  const bool bottom_up = raw_height > 0;
  const std::int32_t height = bottom_up ? raw_height : -raw_height;
  const std::size_t row_bytes = ((static_cast<std::size_t>(width) * bpp + 31) / 32) * 4;
  if (data_offset > bytes.size() || bytes.size() - data_offset < row_bytes * static_cast<std::size_t>(height)) {
    fail("BMP raster truncated");
  }

  std::vector<std::uint8_t> palette;
  if (bpp == 8) {
    std::uint32_t colors = le32(bytes, 46);
    if (colors == 0) colors = 256;
    const std::size_t pal_off = 14 + header_size;
    if (pal_off + colors * 4 > bytes.size()) fail("BMP palette truncated");
    palette.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pal_off),
                   bytes.begin() + static_cast<std::ptrdiff_t>(pal_off + colors * 4));
  }

  DecodedImage img;
  img.width = width;
  img.height = height;
  img.channels = 3;
  img.data.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::int32_t y = 0; y < height; ++y) {
    const std::size_t src_row = bottom_up ? static_cast<std::size_t>(height - 1 - y) : static_cast<std::size_t>(y);
    const std::uint8_t* row = bytes.data() + data_offset + src_row * row_bytes;
    std::uint8_t* dst = img.data.data() + static_cast<std::size_t>(y) * width * 3;
    for (std::int32_t x = 0; x < width; ++x, dst += 3) {
      if (bpp == 8) {
        const std::size_t idx = static_cast<std::size_t>(row[x]) * 4;
        if (idx + 2 >= palette.size()) fail("BMP palette index out of range");
        dst[0] = palette[idx + 2];
        dst[1] = palette[idx + 1];
        dst[2] = palette[idx];
      } else {
        const std::uint8_t* px = row + static_cast<std::size_t>(x) * (bpp / 8);
        dst[0] = px[2];
        dst[1] = px[1];
        dst[2] = px[0];
      }
    }
  }
  // Paletted gray BMPs collapse to one channel so `to_gray` is the identity.
  if (bpp == 8) {
    bool gray = true;
    for (std::size_t i = 0; i < img.data.size() && gray; i += 3) {
      gray = img.data[i] == img.data[i + 1] && img.data[i] == img.data[i + 2];
    }
    if (gray) {
      std::vector<std::uint8_t> single(img.data.size() / 3);
      for (std::size_t i = 0; i < single.size(); ++i) single[i] = img.data[i * 3];
      img.data = std::move(single);
      img.channels = 1;
    }
  }
  return img;
}

DecodedImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    fail(std::string("PNG: ") + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  DecodedImage img;
  img.width = static_cast<int>(image.width);
  img.height = static_cast<int>(image.height);
  img.channels = color ? 3 : 1;
  img.data.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, img.data.data(), 0, nullptr)) {
    std::string message = image.message;
    png_image_free(&image);
    fail("PNG: " + message);
  }
  return img;
}

}  // namespace

DecodedImage decode_image(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngMagic, 8) == 0) return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) return decode_pnm(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') return decode_bmp(bytes);
  fail("unrecognized image format");
}

DecodedImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_image(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

GrayImage load_gray(const std::filesystem::path& path) { return to_gray(read_image(path)); }

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.data()), static_cast<std::size_t>(image.size()));
  return out;
}

}  // namespace edgelbp
