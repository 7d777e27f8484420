#include "gnnlg/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace gnnlg {
namespace {

constexpr int kMaxSweeps = 80;
constexpr double kRotationTol = 1e-15;

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw LinalgError(std::string(what) + ": input contains non-finite entries");
  }
}

// Orders indices so that keys[order[0]] is the largest (descending = true) or
// smallest. Stable, so equal keys keep their column order.
std::vector<Eigen::Index> sort_order(const Vector& keys, bool descending) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(keys.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return descending ? keys(a) > keys(b) : keys(a) < keys(b);
  });
  return order;
}

// Fills the columns of q flagged in `missing` with unit vectors orthogonal to
// every column already present.
void complete_basis(Matrix& q, std::vector<bool> missing) {
  const Eigen::Index rows = q.rows();
  const Eigen::Index cols = q.cols();
  Eigen::Index candidate = 0;
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (!missing[static_cast<std::size_t>(c)]) continue;
    while (true) {
      if (candidate >= rows) throw LinalgError("svd: basis completion failed");
      Vector e = Vector::Unit(rows, candidate++);
      // Two passes of Gram-Schmidt against the columns already in place.
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < cols; ++j) {
          if (missing[static_cast<std::size_t>(j)]) continue;
          e -= q.col(j).dot(e) * q.col(j);
        }
      }
      const double norm = e.norm();
      if (norm > 1e-3) {
        q.col(c) = e / norm;
        missing[static_cast<std::size_t>(c)] = false;
        break;
      }
    }
  }
}

}  // namespace

SvdResult svd(const Matrix& a, SvdMode mode) {
  require_finite(a, "svd");
  const bool transposed = a.rows() < a.cols();
  Matrix b = transposed ? Matrix(a.transpose()) : a;
  const Eigen::Index rows = b.rows();
  const Eigen::Index k = b.cols();
  Matrix v = Matrix::Identity(k, k);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i + 1 < k; ++i) {
      for (Eigen::Index j = i + 1; j < k; ++j) {
        const double alpha = b.col(i).squaredNorm();
        const double beta = b.col(j).squaredNorm();
        const double gamma = b.col(i).dot(b.col(j));
        if (gamma == 0.0 || std::abs(gamma) <= kRotationTol * std::sqrt(alpha * beta)) {
          continue;
        }
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t =
            std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index r = 0; r < rows; ++r) {
          const double bi = b(r, i);
          const double bj = b(r, j);
          b(r, i) = c * bi - s * bj;
          b(r, j) = s * bi + c * bj;
        }
        for (Eigen::Index r = 0; r < k; ++r) {
          const double vi = v(r, i);
          const double vj = v(r, j);
          v(r, i) = c * vi - s * vj;
          v(r, j) = s * vi + c * vj;
        }
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  Vector norms = b.colwise().norm().transpose();
  const auto order = sort_order(norms, /*descending=*/true);
  const double largest = k > 0 ? norms(order.front()) : 0.0;
  const double negligible = largest * 1e-13;

  const Eigen::Index ucols = mode == SvdMode::kFull ? rows : k;
  Matrix u = Matrix::Zero(rows, ucols);
  Matrix vs(k, k);
  Vector s(k);
  std::vector<bool> missing(static_cast<std::size_t>(ucols), true);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::Index src = order[static_cast<std::size_t>(c)];
    s(c) = norms(src);
    vs.col(c) = v.col(src);
    if (s(c) > negligible && s(c) > 0.0) {
      u.col(c) = b.col(src) / s(c);
      missing[static_cast<std::size_t>(c)] = false;
    }
  }
  complete_basis(u, missing);

  SvdResult result;
  result.s = std::move(s);
  if (!transposed) {
    result.u = std::move(u);
    result.v = std::move(vs);
  } else {
    // a^T = b = u * S * vs^T, so a = vs * S * u^T.
    result.u = std::move(vs);
    result.v = std::move(u);
  }
  return result;
}

EigResult sym_eig(const Matrix& a) {
  require_finite(a, "sym_eig");
  if (a.rows() != a.cols()) throw LinalgError("sym_eig: matrix is not square");
  const Eigen::Index n = a.rows();
  Matrix m = 0.5 * (a + a.transpose());
  Matrix q = Matrix::Identity(n, n);
  const double scale = m.norm();

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) off += m(p, r) * m(p, r);
    }
    if (off == 0.0 || std::sqrt(off) <= kRotationTol * scale) break;

    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) {
        const double apr = m(p, r);
        if (apr == 0.0) continue;
        const double theta = (m(r, r) - m(p, p)) / (2.0 * apr);
        const double t =
            std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double mp = m(i, p);
          const double mr = m(i, r);
          m(i, p) = c * mp - s * mr;
          m(i, r) = s * mp + c * mr;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const double mp = m(p, i);
          const double mr = m(r, i);
          m(p, i) = c * mp - s * mr;
          m(r, i) = s * mp + c * mr;
        }
        m(p, r) = 0.0;
        m(r, p) = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double qp = q(i, p);
          const double qr = q(i, r);
          q(i, p) = c * qp - s * qr;
          q(i, r) = s * qp + c * qr;
        }
      }
    }
  }

  const Vector diag = m.diagonal();
  const auto order = sort_order(diag, /*descending=*/false);
  EigResult result{Matrix(n, n), Vector(n)};
  for (Eigen::Index c = 0; c < n; ++c) {
    const Eigen::Index src = order[static_cast<std::size_t>(c)];
    result.lambda(c) = diag(src);
    result.q.col(c) = q.col(src);
  }
  return result;
}

}  // namespace gnnlg
