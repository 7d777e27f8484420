#include "gnnlg/admm.h"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "gnnlg/linalg.h"

namespace gnnlg {
namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix shapes differ");
  }
}

double nuclear_norm(const Matrix& x) { return svd(x, SvdMode::kThin).s.sum(); }

}  // namespace

void validate(const AdmmConfig& cfg) {
  if (!(cfg.theta_n >= 0.0) || !(cfg.theta_r >= 0.0) || !(cfg.theta_c >= 0.0)) {
    throw std::invalid_argument("ADMM weights must be non-negative");
  }
  if (!(cfg.p > 0.0)) throw std::invalid_argument("ADMM penalty p must be positive");
  if (!(cfg.v > 0.0 && cfg.v <= 1.0)) {
    throw std::invalid_argument("threshold exponent v must lie in (0, 1]");
  }
  if (cfg.max_inner < 1) throw std::invalid_argument("max_inner must be at least 1");
}

double fast_threshold(double x, double lambda, double v) {
  if (x == 0.0) return 0.0;
  const double magnitude = std::abs(x);
  const double shrunk = magnitude - lambda * std::pow(magnitude, v - 1.0);
  if (shrunk <= 0.0) return 0.0;
  return std::copysign(shrunk, x);
}

Matrix x_step(const Matrix& z, const Matrix& y, const AdmmConfig& cfg) {
  require_same_shape(z, y, "x_step");
  const double lambda = cfg.theta_n / cfg.p;
  if (lambda == 0.0) return z - y;
  SvdResult d = svd(z - y, SvdMode::kThin);
  for (Eigen::Index i = 0; i < d.s.size(); ++i) {
    d.s(i) = fast_threshold(d.s(i), lambda, cfg.v);
  }
  return d.u * d.s.asDiagonal() * d.v.transpose();
}

SylvesterSolver::SylvesterSolver(const GraphLaplacian& lr, const GraphLaplacian& lc,
                                 const AdmmConfig& cfg)
    : lr_(lr.matrix()),
      lc_(lc.matrix()),
      theta_r_(cfg.theta_r),
      theta_c_(cfg.theta_c),
      p_(cfg.p),
      diagonal_only_(cfg.theta_r == 0.0 && cfg.theta_c == 0.0) {
  if (diagonal_only_) return;
  const EigResult er = sym_eig(lr_);
  const EigResult ec = sym_eig(lc_);
  if (er.lambda(0) < -1e-6 || ec.lambda(0) < -1e-6) {
    throw std::invalid_argument("z_step: Laplacian is not positive semidefinite");
  }
  qr_ = er.q;
  qc_ = ec.q;
  inv_denominator_.resize(lr_.rows(), lc_.rows());
  for (Eigen::Index i = 0; i < lr_.rows(); ++i) {
    for (Eigen::Index j = 0; j < lc_.rows(); ++j) {
      inv_denominator_(i, j) =
          1.0 / (2.0 * theta_r_ * er.lambda(i) + 2.0 * theta_c_ * ec.lambda(j) + 1.0 + p_);
    }
  }
}

Matrix SylvesterSolver::solve(const Matrix& rhs) const {
  if (rhs.rows() != lr_.rows() || rhs.cols() != lc_.rows()) {
    throw std::invalid_argument("z_step: group shape does not match the Laplacians");
  }
  if (diagonal_only_) return rhs / (1.0 + p_);
  const Matrix rotated = qr_.transpose() * rhs * qc_;
  return qr_ * rotated.cwiseProduct(inv_denominator_) * qc_.transpose();
}

Matrix SylvesterSolver::apply(const Matrix& z) const {
  return 2.0 * theta_r_ * lr_ * z + 2.0 * theta_c_ * z * lc_ + (1.0 + p_) * z;
}

namespace {

// 2 theta_r Lr T + 2 theta_c T Lc
Matrix graph_term(const Matrix& t, const Matrix& lr, const Matrix& lc, const AdmmConfig& cfg) {
  Matrix out = Matrix::Zero(t.rows(), t.cols());
  if (cfg.theta_r != 0.0) out += 2.0 * cfg.theta_r * lr * t;
  if (cfg.theta_c != 0.0) out += 2.0 * cfg.theta_c * t * lc;
  return out;
}

}  // namespace

Matrix z_step(const Matrix& t, const Matrix& x, const Matrix& y, const GraphLaplacian& lr,
              const GraphLaplacian& lc, const AdmmConfig& cfg) {
  require_same_shape(t, x, "z_step");
  require_same_shape(t, y, "z_step");
  const SylvesterSolver solver(lr, lc, cfg);
  // With Z = T + D the system becomes A(D) = p (X + Y - T) - graph_term(T).
  return t + solver.solve(cfg.p * (x + y - t) - graph_term(t, lr.matrix(), lc.matrix(), cfg));
}

double group_objective(const Matrix& x, const Matrix& t, const GraphLaplacian& lr,
                       const GraphLaplacian& lc, const AdmmConfig& cfg) {
  require_same_shape(x, t, "group_objective");
  double value = 0.5 * (x - t).squaredNorm();
  if (cfg.theta_n != 0.0) value += cfg.theta_n * nuclear_norm(x);
  if (cfg.theta_r != 0.0) value += cfg.theta_r * smoothness(x, lr, GraphMode::kRow);
  if (cfg.theta_c != 0.0) value += cfg.theta_c * smoothness(x, lc, GraphMode::kColumn);
  return value;
}

GroupSolution solve_group(const Matrix& t, const GraphLaplacian& lr, const GraphLaplacian& lc,
                          const AdmmConfig& cfg, std::vector<AdmmTraceRow>* trace) {
  validate(cfg);
  if (lr.size() != t.rows() || lc.size() != t.cols()) {
    throw std::invalid_argument("solve_group: Laplacian sizes do not match the group");
  }
  const SylvesterSolver solver(lr, lc, cfg);
  const Matrix t_graph = graph_term(t, lr.matrix(), lc.matrix(), cfg);
  const double scale = 1.0 / std::sqrt(static_cast<double>(t.size()));

  AdmmState state;
  state.x = t;
  state.z = t;
  state.y = Matrix::Zero(t.rows(), t.cols());
  if (trace) trace->clear();

  for (int k = 1; k <= cfg.max_inner; ++k) {
    state.x = x_step(state.z, state.y, cfg);
    Matrix z_next = t + solver.solve(cfg.p * (state.x + state.y - t) - t_graph);
    const Matrix primal = state.x - z_next;
    state.y += primal;
    state.r_norm = primal.norm() * scale;
    state.s_norm = cfg.p * (z_next - state.z).norm() * scale;
    state.z = std::move(z_next);
    state.iter = k;
    if (trace) {
      trace->push_back({k, state.r_norm, state.s_norm,
                        group_objective(state.z, t, lr, lc, cfg)});
    }
    if (state.r_norm <= cfg.eps_pri && state.s_norm <= cfg.eps_dual) {
      state.converged = true;
      break;
    }
  }
  return GroupSolution{state.z, std::move(state)};
}

void write_admm_trace_csv(const std::vector<AdmmTraceRow>& trace,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out.precision(17);
  out << "iteration,r_norm,s_norm,objective\n";
  for (const auto& row : trace) {
    out << row.iteration << ',' << row.r_norm << ',' << row.s_norm << ',' << row.objective
        << '\n';
  }
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace gnnlg
