#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "gnnlg/laplacian_dump.h"
#include "support/test_util.h"

namespace gnnlg {
namespace {

using testing::TempDir;

TEST(LaplacianCsv, RoundTripIsExact) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  Matrix w = Matrix::Zero(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j) w(i, j) = w(j, i) = weight(rng);
  const GraphLaplacian l = laplacian_from_weights(w);
  TempDir dir("lap");
  write_laplacian_csv(l, dir / "l.csv");
  EXPECT_EQ(read_laplacian_csv(dir / "l.csv").matrix(), l.matrix());
}

TEST(LaplacianCsv, TextLayout) {
  Matrix w(2, 2);
  w << 0, 0.5, 0.5, 0;
  TempDir dir("lap");
  write_laplacian_csv(laplacian_from_weights(w), dir / "l.csv");
  std::ifstream in(dir / "l.csv");
  std::string a, b;
  std::getline(in, a);
  std::getline(in, b);
  EXPECT_EQ(a, "0.5,-0.5");
  EXPECT_EQ(b, "-0.5,0.5");
}

TEST(LaplacianCsv, RejectsMalformedFiles) {
  TempDir dir("lap");
  std::ofstream(dir / "ragged.csv") << "1,2\n3\n";
  std::ofstream(dir / "text.csv") << "1,x\n2,3\n";
  std::ofstream(dir / "empty.csv") << "";
  EXPECT_THROW(read_laplacian_csv(dir / "ragged.csv"), std::runtime_error);
  EXPECT_THROW(read_laplacian_csv(dir / "text.csv"), std::runtime_error);
  EXPECT_THROW(read_laplacian_csv(dir / "empty.csv"), std::runtime_error);
  EXPECT_THROW(read_laplacian_csv(dir / "missing.csv"), std::runtime_error);
}

TEST(MagnitudeImage, ShadesByMagnitude) {
  Matrix w(2, 2);
  w << 0, 1, 1, 0;
  const Image img = laplacian_magnitude_image(laplacian_from_weights(w));
  EXPECT_EQ(img.width(), 2);
  EXPECT_EQ(img.at(0, 0), 0.0);
  EXPECT_EQ(img.at(0, 1), 0.0);

  Matrix w3 = Matrix::Zero(3, 3);
  w3(0, 1) = w3(1, 0) = 1.0;
  const Image big = laplacian_magnitude_image(laplacian_from_weights(w3), 4);
  EXPECT_EQ(big.width(), 12);
  EXPECT_EQ(big.at(0, 0), 0.0);   // L00 = 1, the largest
  EXPECT_EQ(big.at(11, 11), 255.0);  // L22 = 0
  EXPECT_EQ(big.at(3, 7), 0.0);   // inside the L01 cell
}

TEST(MagnitudeImage, ZeroMatrixIsWhite) {
  const Image img = laplacian_magnitude_image(GraphLaplacian(Matrix::Zero(3, 3)), 2);
  for (double v : img.data()) EXPECT_EQ(v, 255.0);
  EXPECT_THROW(laplacian_magnitude_image(GraphLaplacian(Matrix::Zero(3, 3)), 0),
               std::invalid_argument);
}

}  // namespace
}  // namespace gnnlg
