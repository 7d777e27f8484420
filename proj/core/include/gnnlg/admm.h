#pragma once

#include <filesystem>
#include <vector>

#include "gnnlg/graph.h"
#include "gnnlg/matrix.h"

namespace gnnlg {

struct AdmmConfig {
  double theta_n = 0.0;  // nuclear norm weight
  double theta_r = 0.0;  // row graph weight
  double theta_c = 0.0;  // column graph weight
  double p = 0.015;      // augmented Lagrangian penalty
  double v = 0.1;        // threshold exponent, in (0, 1]
  int max_inner = 100;
  // Residual tolerances, compared against Frobenius norms divided by sqrt(m n).
  double eps_pri = 0.03;
  double eps_dual = 0.015;
};

void validate(const AdmmConfig& cfg);

struct AdmmState {
  Matrix x;
  Matrix z;
  Matrix y;  // scaled dual, same units as x
  int iter = 0;
  double r_norm = 0.0;  // ||X - Z||_F / sqrt(m n)
  double s_norm = 0.0;  // p ||Z_k+1 - Z_k||_F / sqrt(m n)
  bool converged = false;
};

struct AdmmTraceRow {
  int iteration = 0;
  double r_norm = 0.0;
  double s_norm = 0.0;
  double objective = 0.0;
};

// max(0, |x| - lambda |x|^(v-1)) * sign(x), with the removable singularity at
// x = 0 mapped to 0. Soft thresholding at v = 1, approaching hard
// thresholding as v -> 0.
double fast_threshold(double x, double lambda, double v);

// U * Gamma(S) * V^T where Z - Y = U S V^T and lambda = theta_n / p.
Matrix x_step(const Matrix& z, const Matrix& y, const AdmmConfig& cfg);

// Solves 2 theta_r Lr Z + 2 theta_c Z Lc + (1 + p) Z = R in the eigenbases of
// Lr and Lc. The decompositions are done once at construction.
class SylvesterSolver {
 public:
  SylvesterSolver(const GraphLaplacian& lr, const GraphLaplacian& lc, const AdmmConfig& cfg);

  Matrix solve(const Matrix& rhs) const;

  // Left-hand side operator, for residual checks.
  Matrix apply(const Matrix& z) const;

 private:
  Matrix lr_;
  Matrix lc_;
  Matrix qr_;
  Matrix qc_;
  Matrix inv_denominator_;
  double theta_r_;
  double theta_c_;
  double p_;
  bool diagonal_only_;
};

// Z update: the solution of
//   2 theta_r Lr Z + 2 theta_c Z Lc + (1 + p) Z = T + p (X + Y).
// Computed as T plus a correction so that Z == T exactly when the right-hand
// side is (1 + p) T and both graph weights are zero.
Matrix z_step(const Matrix& t, const Matrix& x, const Matrix& y, const GraphLaplacian& lr,
              const GraphLaplacian& lc, const AdmmConfig& cfg);

// theta_n ||X||_* + 1/2 ||X - T||_F^2 + theta_r tr(X^T Lr X) + theta_c tr(X Lc X^T)
double group_objective(const Matrix& x, const Matrix& t, const GraphLaplacian& lr,
                       const GraphLaplacian& lc, const AdmmConfig& cfg);

struct GroupSolution {
  Matrix denoised;  // the final Z iterate
  AdmmState state;
};

// ADMM on the group objective from X = Z = T, Y = 0. Each iteration runs the
// X, Z and dual updates, then stops once r_norm <= eps_pri and
// s_norm <= eps_dual. Hitting max_inner leaves state.converged false.
GroupSolution solve_group(const Matrix& t, const GraphLaplacian& lr, const GraphLaplacian& lc,
                          const AdmmConfig& cfg, std::vector<AdmmTraceRow>* trace = nullptr);

void write_admm_trace_csv(const std::vector<AdmmTraceRow>& trace,
                          const std::filesystem::path& path);

}  // namespace gnnlg
