#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "gnnlg/image.h"

namespace gnnlg {

class ImageIoError : public std::runtime_error {
 public:
  enum class Kind {
    kUnreadableFile,
    kUnsupportedBitDepth,
    kUnsupportedColorFormat,
    kWriteFailed,
  };

  ImageIoError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Reads an 8-bit grayscale PGM (P2 or P5) or PNG. The format is detected
// from the file signature, not the extension. Pixel values are widened to
// double without rescaling.
Image load_image(const std::filesystem::path& path);

// Writes an 8-bit grayscale image. ".png" (case-insensitive) selects PNG,
// anything else writes binary PGM (P5, maxval 255).
void save_image(const Image& img, const std::filesystem::path& path);

// Rounds half away from zero and clamps to [0, 255]; the exact values
// save_image() would write.
Image quantize(const Image& img);

}  // namespace gnnlg
