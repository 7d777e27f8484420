#include "gnnlg/noise.h"

#include <cmath>
#include <stdexcept>

namespace gnnlg {

double GaussianSource::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianSource::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

Image add_awgn(const Image& img, const NoiseSpec& spec) {
  if (!(spec.sigma > 0.0)) {
    throw std::invalid_argument("noise sigma must be positive");
  }
  GaussianSource source(spec.seed);
  Image out = img;
  for (double& v : out.data()) v += spec.sigma * source.next();
  return out;
}

}  // namespace gnnlg
