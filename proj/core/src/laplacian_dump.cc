#include "gnnlg/laplacian_dump.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gnnlg {

void write_laplacian_csv(const GraphLaplacian& l, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out.precision(17);
  for (int i = 0; i < l.size(); ++i) {
    for (int j = 0; j < l.size(); ++j) {
      if (j > 0) out << ',';
      out << l(i, j);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

GraphLaplacian read_laplacian_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ": bad number '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::vector<double>& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw std::runtime_error(path.string() + ": matrix is not square");
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  if (n == 0) throw std::runtime_error(path.string() + ": empty matrix");
  return GraphLaplacian(m);
}

Image laplacian_magnitude_image(const GraphLaplacian& l, int cell) {
  if (cell < 1) throw std::invalid_argument("cell size must be positive");
  const int n = l.size();
  const double largest = l.matrix().cwiseAbs().maxCoeff();
  Image img(n * cell, n * cell, 255.0);
  if (largest == 0.0) return img;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double shade = 255.0 * (1.0 - std::abs(l(i, j)) / largest);
      for (int r = 0; r < cell; ++r) {
        for (int c = 0; c < cell; ++c) img.at(i * cell + r, j * cell + c) = shade;
      }
    }
  }
  return img;
}

}  // namespace gnnlg
