#include "gnnlg/synthetic.h"

namespace gnnlg {

Image rectangles_depth(int width, int height) {
  Image img(width, height);
  const int split_row = height * 45 / 100;
  const int split_col = width * 55 / 100;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const bool top = r < split_row;
      const bool left = c < split_col;
      img.at(r, c) = top ? (left ? 50.0 : 100.0) : (left ? 150.0 : 200.0);
    }
  }
  return img;
}

Image scene_depth(int width, int height) {
  Image img(width, height);
  const double w = width;
  const double h = height;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double x = c / w;
      const double y = r / h;
      double depth = 60.0 + 50.0 * x + 30.0 * y;
      if (x > 0.15 && x < 0.45 && y > 0.2 && y < 0.7) depth = 190.0;
      const double dx = x - 0.7;
      const double dy = y - 0.35;
      if (dx * dx + dy * dy < 0.02) depth = 140.0 + 40.0 * dy;
      if (y > 0.78 && y < 0.9 && x > 0.5) depth = 220.0 - 60.0 * (x - 0.5);
      img.at(r, c) = depth;
    }
  }
  return img;
}

}  // namespace gnnlg
