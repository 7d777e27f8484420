#pragma once

#include <filesystem>

#include "gnnlg/graph.h"
#include "gnnlg/image.h"

namespace gnnlg {

// One matrix row per line, comma separated, 17 significant digits.
void write_laplacian_csv(const GraphLaplacian& l, const std::filesystem::path& path);
GraphLaplacian read_laplacian_csv(const std::filesystem::path& path);

// N x N grayscale picture of |L_ij| scaled by the largest magnitude, with
// black for the largest magnitude and white for zero. Each entry becomes a
// cell x cell block.
Image laplacian_magnitude_image(const GraphLaplacian& l, int cell = 1);

}  // namespace gnnlg
