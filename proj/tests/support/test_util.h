#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "gnnlg/image.h"
#include "gnnlg/matrix.h"

namespace gnnlg::testing {

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

inline Matrix random_symmetric(std::mt19937_64& rng, int n, double scale = 1.0) {
  const Matrix a = random_matrix(rng, n, n, scale);
  return 0.5 * (a + a.transpose());
}

inline Image random_image(std::mt19937_64& rng, int width, int height, double lo = 0.0,
                          double hi = 255.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Image img(width, height);
  for (double& v : img.data()) v = dist(rng);
  return img;
}

inline Image random_integer_image(std::mt19937_64& rng, int width, int height) {
  std::uniform_int_distribution<int> dist(0, 255);
  Image img(width, height);
  for (double& v : img.data()) v = dist(rng);
  return img;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("gnnlg_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace gnnlg::testing
