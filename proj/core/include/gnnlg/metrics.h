#pragma once

#include "gnnlg/image.h"

namespace gnnlg {

struct QualityScore {
  double psnr = 0.0;
  double ssim = 0.0;
};

// 10 log10(peak^2 / MSE). Returns +infinity for identical images.
double psnr(const Image& a, const Image& b, double peak = 255.0);

// Single-scale SSIM with an 11x11 Gaussian window (sigma 1.5),
// C1 = (0.01 * 255)^2, C2 = (0.03 * 255)^2, averaged over every window
// position that fits inside the image (no padding). Both images must be at
// least 11x11.
double ssim(const Image& a, const Image& b);

QualityScore quality(const Image& reference, const Image& test);

}  // namespace gnnlg
