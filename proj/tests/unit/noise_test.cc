#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "gnnlg/image_io.h"
#include "gnnlg/metrics.h"
#include "gnnlg/noise.h"

namespace gnnlg {
namespace {

TEST(Noise, SameSeedGivesBitwiseIdenticalOutput) {
  const Image clean(64, 64, 100.0);
  const Image a = add_awgn(clean, {20.0, 42});
  const Image b = add_awgn(clean, {20.0, 42});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, add_awgn(clean, {20.0, 43}));
}

// Marsaglia polar method written out directly on top of std::mt19937_64,
// returning both deviates of each accepted pair in order.
std::vector<double> polar_reference(std::uint64_t seed, int count) {
  std::mt19937_64 engine(seed);
  auto uniform = [&] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  std::vector<double> out;
  while (static_cast<int>(out.size()) < count) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    out.push_back(u * f);
    out.push_back(v * f);
  }
  out.resize(static_cast<std::size_t>(count));
  return out;
}

TEST(Noise, GeneratorMatchesPolarReference) {
  GaussianSource source(2024);
  for (double expected : polar_reference(2024, 1000)) EXPECT_EQ(source.next(), expected);
}

TEST(Noise, FirstDeviatesArePinned) {
  GaussianSource source(42);
  EXPECT_DOUBLE_EQ(source.next(), 1.2938204232729367);
  EXPECT_DOUBLE_EQ(source.next(), 0.70498826642085988);
  EXPECT_DOUBLE_EQ(source.next(), 0.39797739618378869);
  EXPECT_DOUBLE_EQ(source.next(), -0.57409480672026136);
}

TEST(Noise, AddsDeviatesInRowMajorOrder) {
  const Image clean(3, 2, 10.0);
  const Image noisy = add_awgn(clean, {5.0, 42});
  const std::vector<double> z = polar_reference(42, 6);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(noisy.data()[i], 10.0 + 5.0 * z[i]);
}

TEST(Noise, SampleMomentsMatchSigma) {
  for (double sigma : {15.0, 30.0}) {
    const Image clean(256, 256, 128.0);
    const Image noisy = add_awgn(clean, {sigma, 7});
    double mean = 0.0;
    for (std::size_t i = 0; i < noisy.size(); ++i) mean += noisy.data()[i] - clean.data()[i];
    mean /= static_cast<double>(noisy.size());
    double var = 0.0;
    for (std::size_t i = 0; i < noisy.size(); ++i) {
      const double d = noisy.data()[i] - clean.data()[i] - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(noisy.size() - 1));
    // four standard errors
    EXPECT_NEAR(mean, 0.0, 4.0 * sigma / 256.0) << "sigma " << sigma;
    EXPECT_NEAR(sd / sigma, 1.0, 0.02) << "sigma " << sigma;
  }
}

TEST(Noise, OutputIsNotClamped) {
  const Image clean(128, 128, 2.0);
  const Image noisy = add_awgn(clean, {20.0, 3});
  double lowest = 0.0;
  for (double v : noisy.data()) lowest = std::min(lowest, v);
  EXPECT_LT(lowest, 0.0);
}

TEST(Noise, PsnrMatchesSigma) {
  const Image clean(256, 256, 128.0);
  EXPECT_NEAR(psnr(clean, add_awgn(clean, {15.0, 1})), 20.0 * std::log10(255.0 / 15.0), 0.15);
  EXPECT_NEAR(psnr(clean, add_awgn(clean, {30.0, 1})), 20.0 * std::log10(255.0 / 30.0), 0.15);
}

TEST(Noise, RejectsNonPositiveSigma) {
  EXPECT_THROW(add_awgn(Image(2, 2), {0.0, 1}), std::invalid_argument);
}

}  // namespace
}  // namespace gnnlg
