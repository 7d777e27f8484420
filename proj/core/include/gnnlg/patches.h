#pragma once

#include <compare>
#include <span>
#include <stdexcept>
#include <vector>

#include "gnnlg/image.h"
#include "gnnlg/matrix.h"

namespace gnnlg {

class PatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Top-left corner of a square patch.
struct PatchRef {
  int row = 0;
  int col = 0;

  auto operator<=>(const PatchRef&) const = default;
};

// m similar patches stacked as the rows of t (m x patch_size^2, each row a
// row-major vectorized patch). members[0] is the reference patch and member
// distances to it are non-decreasing.
struct PatchGroup {
  PatchRef reference;
  std::vector<PatchRef> members;
  std::vector<double> distances;  // squared Euclidean, distances[0] == 0
  Matrix t;
};

// Reference positions on a stride grid. The last valid position in each
// direction is always included, so every pixel is covered.
std::vector<PatchRef> extract_patch_refs(const Image& img, int patch_size, int stride);

// Row-major vectorized patch at ref.
Vector patch_vector(const Image& img, PatchRef ref, int patch_size);

// k-nearest patches to ref among every (stride 1) position whose top-left
// lies in the window x window box centered on ref, clipped to the image.
// The reference is always first; the other k - 1 members are ranked by
// squared distance, ties broken by (row, col).
PatchGroup build_group(const Image& img, PatchRef ref, int patch_size, int window, int k);

// Scatters every row of every denoised matrix back to its member's footprint
// and averages the contributions per pixel with uniform weights. Throws
// std::logic_error if some pixel receives no contribution.
Image aggregate(std::span<const PatchGroup> groups, std::span<const Matrix> denoised, int width,
                int height, int patch_size);

}  // namespace gnnlg
