#include "gnnlg/metrics.h"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gnnlg {
namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string(what) + ": image sizes differ");
}

std::array<double, kWindow * kWindow> gaussian_window() {
  std::array<double, kWindow * kWindow> w{};
  const int half = kWindow / 2;
  double total = 0.0;
  for (int r = 0; r < kWindow; ++r) {
    for (int c = 0; c < kWindow; ++c) {
      const double dr = r - half;
      const double dc = c - half;
      const double g = std::exp(-(dr * dr + dc * dc) / (2.0 * kWindowSigma * kWindowSigma));
      w[static_cast<std::size_t>(r * kWindow + c)] = g;
      total += g;
    }
  }
  for (double& g : w) g /= total;
  return w;
}

}  // namespace

double psnr(const Image& a, const Image& b, double peak) {
  require_same_shape(a, b, "psnr");
  double sse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(a.size());
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Image& a, const Image& b) {
  require_same_shape(a, b, "ssim");
  if (a.width() < kWindow || a.height() < kWindow) {
    throw std::invalid_argument("ssim: images must be at least 11x11");
  }
  static const auto window = gaussian_window();
  double total = 0.0;
  long positions = 0;
  for (int r0 = 0; r0 + kWindow <= a.height(); ++r0) {
    for (int c0 = 0; c0 + kWindow <= a.width(); ++c0) {
      double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
      for (int r = 0; r < kWindow; ++r) {
        for (int c = 0; c < kWindow; ++c) {
          const double w = window[static_cast<std::size_t>(r * kWindow + c)];
          const double x = a.at(r0 + r, c0 + c);
          const double y = b.at(r0 + r, c0 + c);
          mu_a += w * x;
          mu_b += w * y;
          aa += w * x * x;
          bb += w * y * y;
          ab += w * (x * y);
        }
      }
      const double var_a = aa - mu_a * mu_a;
      const double var_b = bb - mu_b * mu_b;
      const double cov = ab - mu_a * mu_b;
      total += ((2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2)) /
               ((mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2));
      ++positions;
    }
  }
  return total / static_cast<double>(positions);
}

QualityScore quality(const Image& reference, const Image& test) {
  return {psnr(reference, test), ssim(reference, test)};
}

}  // namespace gnnlg
