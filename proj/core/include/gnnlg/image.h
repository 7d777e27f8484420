#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gnnlg {

// Grayscale intensity grid, row-major. Values are kept at full double
// precision while processing; quantization to 8 bits happens only on save
// (see quantize() in image_io.h).
class Image {
 public:
  Image(int width, int height, double fill = 0.0);
  Image(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  double& at(int row, int col) { return data_[index(row, col)]; }
  double at(int row, int col) const { return data_[index(row, col)]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int width_;
  int height_;
  std::vector<double> data_;
};

}  // namespace gnnlg
