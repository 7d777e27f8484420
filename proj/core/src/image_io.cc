#include "gnnlg/image_io.h"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <memory>
#include <vector>

namespace gnnlg {
namespace {

using Kind = ImageIoError::Kind;

[[noreturn]] void fail(Kind kind, const std::filesystem::path& path,
                       const std::string& detail) {
  throw ImageIoError(kind, path.string() + ": " + detail);
}

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Kind::kUnreadableFile, path, "unreadable file (cannot open)");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Cursor over a PGM byte buffer. Header tokens are separated by whitespace,
// and '#' starts a comment that runs to the end of the line.
class PgmReader {
 public:
  PgmReader(const std::vector<unsigned char>& bytes,
            const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  long next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      fail(Kind::kUnreadableFile, path_, "unreadable file (malformed PGM header)");
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) {
        fail(Kind::kUnreadableFile, path_, "unreadable file (header value overflow)");
      }
      ++pos_;
    }
    return value;
  }

  // A binary raster starts after exactly one whitespace byte.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      fail(Kind::kUnreadableFile, path_, "unreadable file (missing raster separator)");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 2;
};

Image decode_pgm(const std::vector<unsigned char>& bytes,
                 const std::filesystem::path& path) {
  const bool ascii = bytes[1] == '2';
  PgmReader reader(bytes, path);
  const long width = reader.next_int();
  const long height = reader.next_int();
  const long maxval = reader.next_int();
  if (width < 1 || height < 1) {
    fail(Kind::kUnreadableFile, path, "unreadable file (zero image dimension)");
  }
  if (maxval < 1) fail(Kind::kUnreadableFile, path, "unreadable file (bad maxval)");
  if (maxval > 255) {
    fail(Kind::kUnsupportedBitDepth, path,
         "unsupported bit depth (maxval " + std::to_string(maxval) +
             ", only 8-bit is supported)");
  }

  const std::size_t count =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> data(count);
  if (ascii) {
    for (auto& v : data) {
      const long value = reader.next_int();
      if (value > maxval) {
        fail(Kind::kUnreadableFile, path, "unreadable file (sample exceeds maxval)");
      }
      v = static_cast<double>(value);
    }
  } else {
    const std::size_t offset = reader.raster_offset();
    if (bytes.size() < offset + count) {
      fail(Kind::kUnreadableFile, path, "unreadable file (truncated raster)");
    }
    for (std::size_t i = 0; i < count; ++i) {
      if (bytes[offset + i] > maxval) {
        fail(Kind::kUnreadableFile, path, "unreadable file (sample exceeds maxval)");
      }
      data[i] = static_cast<double>(bytes[offset + i]);
    }
  }
  return Image(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

constexpr std::array<unsigned char, 8> kPngSignature = {0x89, 'P', 'N', 'G',
                                                       '\r', '\n', 0x1a, '\n'};

bool is_png(const std::vector<unsigned char>& bytes) {
  return bytes.size() >= kPngSignature.size() &&
         std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin());
}

struct PngImageDeleter {
  void operator()(png_image* img) const {
    png_image_free(img);
    delete img;
  }
};

Image decode_png(const std::vector<unsigned char>& bytes,
                 const std::filesystem::path& path) {
  // IHDR is always the first chunk: 8-byte signature, 4-byte length,
  // "IHDR", width, height, bit depth, color type.
  if (bytes.size() < 33 || std::string(bytes.begin() + 12, bytes.begin() + 16) != "IHDR") {
    fail(Kind::kUnreadableFile, path, "unreadable file (malformed PNG header)");
  }
  const int bit_depth = bytes[24];
  const int color_type = bytes[25];
  if (color_type != 0) {
    fail(Kind::kUnsupportedColorFormat, path,
         "unsupported color format (PNG color type " + std::to_string(color_type) +
             ", only grayscale is supported)");
  }
  if (bit_depth != 8) {
    fail(Kind::kUnsupportedBitDepth, path,
         "unsupported bit depth (" + std::to_string(bit_depth) +
             "-bit PNG, only 8-bit is supported)");
  }

  std::unique_ptr<png_image, PngImageDeleter> image(new png_image{});
  image->version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(image.get(), bytes.data(), bytes.size())) {
    fail(Kind::kUnreadableFile, path,
         std::string("unreadable file (") + image->message + ")");
  }
  image->format = PNG_FORMAT_GRAY;
  std::vector<png_byte> raster(PNG_IMAGE_SIZE(*image));
  if (!png_image_finish_read(image.get(), nullptr, raster.data(), 0, nullptr)) {
    fail(Kind::kUnreadableFile, path,
         std::string("unreadable file (") + image->message + ")");
  }
  const int width = static_cast<int>(image->width);
  const int height = static_cast<int>(image->height);
  std::vector<double> data(raster.begin(), raster.end());
  return Image(width, height, std::move(data));
}

std::vector<unsigned char> to_bytes(const Image& img) {
  const Image q = quantize(img);
  std::vector<unsigned char> out(q.size());
  std::transform(q.data().begin(), q.data().end(), out.begin(),
                 [](double v) { return static_cast<unsigned char>(v); });
  return out;
}

bool has_png_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png";
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_all(path);
  if (is_png(bytes)) return decode_png(bytes, path);
  if (bytes.size() < 2 || bytes[0] != 'P') {
    fail(Kind::kUnreadableFile, path, "unreadable file (not a PGM or PNG)");
  }
  switch (bytes[1]) {
    case '2':
    case '5':
      return decode_pgm(bytes, path);
    case '3':
    case '6':
      fail(Kind::kUnsupportedColorFormat, path,
           "unsupported color format (PPM color image)");
    case '1':
    case '4':
      fail(Kind::kUnsupportedBitDepth, path, "unsupported bit depth (1-bit PBM)");
    default:
      fail(Kind::kUnreadableFile, path, "unreadable file (unknown PNM magic)");
  }
}

void save_image(const Image& img, const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = to_bytes(img);
  if (has_png_extension(path)) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_GRAY;
    const bool ok = png_image_write_to_file(&image, path.string().c_str(), 0,
                                            bytes.data(), 0, nullptr) != 0;
    png_image_free(&image);
    if (!ok) fail(Kind::kWriteFailed, path, "write failed (PNG encoder)");
    return;
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Kind::kWriteFailed, path, "write failed (cannot open)");
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) fail(Kind::kWriteFailed, path, "write failed (I/O error)");
}

Image quantize(const Image& img) {
  Image out = img;
  for (double& v : out.data()) {
    // std::round is half-away-from-zero.
    v = std::clamp(std::round(v), 0.0, 255.0);
  }
  return out;
}

}  // namespace gnnlg
