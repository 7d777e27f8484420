#pragma once

#include <cstdint>
#include <random>

#include "gnnlg/image.h"

namespace gnnlg {

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

// Standard normal deviates from std::mt19937_64 through the Marsaglia polar
// transform. Both pieces are fully specified, so a given seed produces the
// same sequence on every conforming platform (std::normal_distribution is
// implementation-defined and is avoided on purpose).
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  // Uniform in [0, 1) from the top 53 bits of one engine draw.
  double uniform();

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Returns img + N(0, sigma^2) per pixel, drawn in row-major order. The result
// is not clamped.
Image add_awgn(const Image& img, const NoiseSpec& spec);

}  // namespace gnnlg
