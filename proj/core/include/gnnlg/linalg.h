#pragma once

#include <stdexcept>

#include "gnnlg/matrix.h"

namespace gnnlg {

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A = U * diag(S) * V^T with S non-increasing and non-negative.
//
// kFull: U is m x m and V is n x n.
// kThin: U is m x k and V is n x k, k = min(m, n).
struct SvdResult {
  Matrix u;
  Vector s;
  Matrix v;
};

enum class SvdMode { kFull, kThin };

// One-sided (Hestenes) Jacobi SVD. Intended for the small dense blocks the
// denoiser works on (a few dozen rows and columns); cost grows as k^2 * max(m, n)
// per sweep. Throws LinalgError on non-finite input.
SvdResult svd(const Matrix& a, SvdMode mode = SvdMode::kFull);

// A = Q * diag(lambda) * Q^T with lambda non-decreasing.
struct EigResult {
  Matrix q;
  Vector lambda;
};

// Cyclic Jacobi eigensolver for symmetric matrices. The input is symmetrized
// as (A + A^T) / 2 before iterating. Throws LinalgError on non-finite input.
EigResult sym_eig(const Matrix& a);

}  // namespace gnnlg
