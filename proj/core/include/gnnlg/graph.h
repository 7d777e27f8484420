#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnnlg/matrix.h"

namespace gnnlg {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Which dimension of a data matrix X (m x n) forms the graph nodes.
// kRow: the m rows are nodes (L is m x m, smoothness tr(X^T L X)).
// kColumn: the n columns are nodes (L is n x n, smoothness tr(X L X^T)).
enum class GraphMode { kRow, kColumn };

// Symmetric Laplacian L = Delta - W. The constructor symmetrizes its input;
// feasibility (sign pattern, zero row sums, PSD) is checked separately by
// laplacian_violation().
class GraphLaplacian {
 public:
  explicit GraphLaplacian(const Matrix& l);

  int size() const { return static_cast<int>(l_.rows()); }
  const Matrix& matrix() const { return l_; }
  double operator()(int i, int j) const { return l_(i, j); }

 private:
  Matrix l_;
};

struct GraphLearnConfig {
  double alpha = 1.2;
  double beta = 0.8;
  int max_iters = 500;
  double tol = 1e-6;
};

struct LaplacianFit {
  GraphLaplacian laplacian;
  double objective = 0.0;
  int iterations = 0;
  // False when max_iters was reached; the laplacian is still feasible.
  bool converged = false;
};

// Threshold Gaussian kernel: W_ij = exp(-|d_i - d_j|^2 / sigma^2) when
// |d_i - d_j|^2 <= epsilon, else 0. Zero diagonal.
Matrix kernel_adjacency(const std::vector<Vector>& nodes, double sigma, double epsilon);

GraphLaplacian laplacian_from_weights(const Matrix& w);

// Complete graph with equal edge weights 1/(N-1): unit diagonal, trace N.
GraphLaplacian uniform_laplacian(int nodes);

// Squared Euclidean distances between the node vectors of x.
Matrix node_distances(const Matrix& x, GraphMode mode);

// tr(X^T L X) in row mode, tr(X L X^T) in column mode.
double smoothness(const Matrix& x, const GraphLaplacian& l, GraphMode mode);

// alpha * smoothness(x, l, mode) + beta * ||L||_F^2
double learning_objective(const Matrix& x, const GraphLaplacian& l, GraphMode mode,
                          const GraphLearnConfig& cfg);

// Minimizes learning_objective over valid Laplacians with trace N:
//   L symmetric, L_ij <= 0 off the diagonal, L 1 = 0, tr(L) = N.
//
// Every such L is determined by its edge weights w_ij = -L_ij (i < j), and
// the constraints reduce to w >= 0, sum(w) = N / 2. The solver runs projected
// gradient on that simplex, starting from the uniform complete graph, with a
// step of 1 / (4 beta N) (the Lipschitz constant of the gradient). A step that
// would raise the objective is rejected and the step halved, so the recorded
// objective sequence is non-increasing.
//
// If objective_trace is given, it receives the objective at the start point
// and after every accepted step.
LaplacianFit learn_laplacian(const Matrix& x, GraphMode mode, const GraphLearnConfig& cfg,
                             std::vector<double>* objective_trace = nullptr);

// Returns a description of the first violated Laplacian invariant, or nullopt
// if all hold: symmetry, off-diagonal <= 1e-9, |row sum| <= 1e-9 * N,
// lambda_min >= -1e-8, and (when check_trace) |tr(L) - N| <= 1e-6.
std::optional<std::string> laplacian_violation(const GraphLaplacian& l, bool check_trace);

}  // namespace gnnlg
