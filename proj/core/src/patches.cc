#include "gnnlg/patches.h"

#include <algorithm>
#include <string>
#include <tuple>

namespace gnnlg {
namespace {

std::vector<int> grid_positions(int extent, int patch_size, int stride) {
  const int last = extent - patch_size;
  std::vector<int> positions;
  for (int p = 0; p <= last; p += stride) positions.push_back(p);
  if (positions.back() != last) positions.push_back(last);
  return positions;
}

double patch_distance(const Image& img, PatchRef a, PatchRef b, int patch_size) {
  double sum = 0.0;
  for (int dr = 0; dr < patch_size; ++dr) {
    for (int dc = 0; dc < patch_size; ++dc) {
      const double diff = img.at(a.row + dr, a.col + dc) - img.at(b.row + dr, b.col + dc);
      sum += diff * diff;
    }
  }
  return sum;
}

}  // namespace

std::vector<PatchRef> extract_patch_refs(const Image& img, int patch_size, int stride) {
  if (patch_size < 1) throw PatchError("patch size must be positive");
  if (stride < 1) throw PatchError("stride must be positive");
  if (patch_size > std::min(img.width(), img.height())) {
    throw PatchError("image " + std::to_string(img.width()) + "x" +
                     std::to_string(img.height()) + " is smaller than a " +
                     std::to_string(patch_size) + "x" + std::to_string(patch_size) + " patch");
  }
  const std::vector<int> rows = grid_positions(img.height(), patch_size, stride);
  const std::vector<int> cols = grid_positions(img.width(), patch_size, stride);
  std::vector<PatchRef> refs;
  refs.reserve(rows.size() * cols.size());
  for (int r : rows) {
    for (int c : cols) refs.push_back({r, c});
  }
  return refs;
}

Vector patch_vector(const Image& img, PatchRef ref, int patch_size) {
  Vector v(patch_size * patch_size);
  for (int dr = 0; dr < patch_size; ++dr) {
    for (int dc = 0; dc < patch_size; ++dc) {
      v(dr * patch_size + dc) = img.at(ref.row + dr, ref.col + dc);
    }
  }
  return v;
}

PatchGroup build_group(const Image& img, PatchRef ref, int patch_size, int window, int k) {
  if (window < patch_size) throw PatchError("search window is smaller than the patch");
  if (k < 1) throw PatchError("group size k must be at least 1");
  const int max_row = img.height() - patch_size;
  const int max_col = img.width() - patch_size;
  if (ref.row < 0 || ref.col < 0 || ref.row > max_row || ref.col > max_col) {
    throw PatchError("reference patch (" + std::to_string(ref.row) + ", " +
                     std::to_string(ref.col) + ") lies outside the image");
  }

  const int half = window / 2;
  const int row_lo = std::max(0, ref.row - half);
  const int row_hi = std::min(max_row, ref.row - half + window - 1);
  const int col_lo = std::max(0, ref.col - half);
  const int col_hi = std::min(max_col, ref.col - half + window - 1);

  std::vector<std::tuple<double, int, int>> candidates;
  candidates.reserve(static_cast<std::size_t>(row_hi - row_lo + 1) *
                     static_cast<std::size_t>(col_hi - col_lo + 1));
  for (int r = row_lo; r <= row_hi; ++r) {
    for (int c = col_lo; c <= col_hi; ++c) {
      if (r == ref.row && c == ref.col) continue;
      candidates.emplace_back(patch_distance(img, ref, {r, c}, patch_size), r, c);
    }
  }
  if (candidates.size() + 1 < static_cast<std::size_t>(k)) {
    throw PatchError("search window holds " + std::to_string(candidates.size() + 1) +
                     " candidate patches, fewer than k = " + std::to_string(k));
  }
  const auto keep = static_cast<std::ptrdiff_t>(k - 1);
  std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end());

  PatchGroup group;
  group.reference = ref;
  group.members.reserve(static_cast<std::size_t>(k));
  group.distances.reserve(static_cast<std::size_t>(k));
  group.members.push_back(ref);
  group.distances.push_back(0.0);
  for (std::ptrdiff_t i = 0; i < keep; ++i) {
    const auto& [dist, r, c] = candidates[static_cast<std::size_t>(i)];
    group.members.push_back({r, c});
    group.distances.push_back(dist);
  }
  group.t.resize(k, patch_size * patch_size);
  for (int i = 0; i < k; ++i) {
    group.t.row(i) = patch_vector(img, group.members[static_cast<std::size_t>(i)], patch_size)
                         .transpose();
  }
  return group;
}

Image aggregate(std::span<const PatchGroup> groups, std::span<const Matrix> denoised, int width,
                int height, int patch_size) {
  if (groups.size() != denoised.size()) {
    throw std::invalid_argument("aggregate: group and estimate counts differ");
  }
  Image sum(width, height, 0.0);
  std::vector<int> count(sum.size(), 0);
  const int n = patch_size * patch_size;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const PatchGroup& group = groups[g];
    const Matrix& estimate = denoised[g];
    if (estimate.rows() != static_cast<Eigen::Index>(group.members.size()) ||
        estimate.cols() != n) {
      throw std::invalid_argument("aggregate: estimate shape does not match its group");
    }
    for (std::size_t i = 0; i < group.members.size(); ++i) {
      const PatchRef m = group.members[i];
      for (int dr = 0; dr < patch_size; ++dr) {
        for (int dc = 0; dc < patch_size; ++dc) {
          sum.at(m.row + dr, m.col + dc) +=
              estimate(static_cast<Eigen::Index>(i), dr * patch_size + dc);
          ++count[static_cast<std::size_t>(m.row + dr) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(m.col + dc)];
        }
      }
    }
  }
  auto values = sum.data();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (count[i] == 0) {
      throw std::logic_error("aggregate: pixel " + std::to_string(i) +
                             " is not covered by any patch");
    }
    values[i] /= count[i];
  }
  return sum;
}

}  // namespace gnnlg
