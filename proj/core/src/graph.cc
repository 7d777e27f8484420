#include "gnnlg/graph.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "gnnlg/linalg.h"

namespace gnnlg {
namespace {

struct Edge {
  int i;
  int j;
};

std::vector<Edge> complete_edges(int n) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return edges;
}

// Euclidean projection onto {w >= 0, sum(w) = radius}.
void project_to_simplex(std::vector<double>& w, double radius) {
  std::vector<double> sorted = w;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double shift = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    prefix += sorted[k];
    const double candidate = (prefix - radius) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) shift = candidate;
  }
  for (double& x : w) x = std::max(x - shift, 0.0);
}

Matrix laplacian_from_edges(int n, const std::vector<Edge>& edges,
                            const std::vector<double>& w) {
  Matrix l = Matrix::Zero(n, n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    l(i, j) = -w[e];
    l(j, i) = -w[e];
    l(i, i) += w[e];
    l(j, j) += w[e];
  }
  return l;
}

int node_count(const Matrix& x, GraphMode mode) {
  return static_cast<int>(mode == GraphMode::kRow ? x.rows() : x.cols());
}

}  // namespace

GraphLaplacian::GraphLaplacian(const Matrix& l) : l_(0.5 * (l + l.transpose())) {
  if (l.rows() != l.cols()) throw GraphError("Laplacian must be square");
}

Matrix kernel_adjacency(const std::vector<Vector>& nodes, double sigma, double epsilon) {
  if (!(sigma > 0.0)) throw GraphError("kernel width sigma must be positive");
  if (epsilon < 0.0) throw GraphError("distance threshold epsilon must be non-negative");
  const auto n = static_cast<Eigen::Index>(nodes.size());
  for (const Vector& node : nodes) {
    if (node.size() != nodes.front().size()) {
      throw GraphError("kernel_adjacency: node vectors differ in dimension");
    }
  }
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (nodes[i] - nodes[j]).squaredNorm();
      if (dist <= epsilon) {
        w(i, j) = w(j, i) = std::exp(-dist / (sigma * sigma));
      }
    }
  }
  return w;
}

GraphLaplacian laplacian_from_weights(const Matrix& w) {
  if (w.rows() != w.cols()) throw GraphError("weight matrix must be square");
  const double tol = 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff());
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw GraphError("weight matrix is not symmetric");
  }
  if (w.minCoeff() < 0.0) throw GraphError("weight matrix has negative entries");
  Matrix l = -w;
  l.diagonal() = w.rowwise().sum() - w.diagonal();
  return GraphLaplacian(l);
}

GraphLaplacian uniform_laplacian(int nodes) {
  if (nodes < 2) throw GraphError("a graph needs at least two nodes");
  const double weight = 1.0 / (nodes - 1);
  Matrix l = Matrix::Constant(nodes, nodes, -weight);
  l.diagonal().setOnes();
  return GraphLaplacian(l);
}

Matrix node_distances(const Matrix& x, GraphMode mode) {
  const Matrix nodes = mode == GraphMode::kRow ? x : Matrix(x.transpose());
  const Vector sq = nodes.rowwise().squaredNorm();
  Matrix d = (-2.0 * nodes * nodes.transpose()).colwise() + sq;
  d.rowwise() += sq.transpose();
  // The Gram form can go slightly negative through cancellation.
  d = d.cwiseMax(0.0);
  d.diagonal().setZero();
  return d;
}

double smoothness(const Matrix& x, const GraphLaplacian& l, GraphMode mode) {
  if (l.size() != node_count(x, mode)) {
    std::ostringstream msg;
    msg << "smoothness: Laplacian size " << l.size() << " does not match "
        << (mode == GraphMode::kRow ? "row" : "column") << " count "
        << node_count(x, mode);
    throw GraphError(msg.str());
  }
  if (mode == GraphMode::kRow) return (x.transpose() * l.matrix() * x).trace();
  return (x * l.matrix() * x.transpose()).trace();
}

double learning_objective(const Matrix& x, const GraphLaplacian& l, GraphMode mode,
                          const GraphLearnConfig& cfg) {
  return cfg.alpha * smoothness(x, l, mode) + cfg.beta * l.matrix().squaredNorm();
}

LaplacianFit learn_laplacian(const Matrix& x, GraphMode mode, const GraphLearnConfig& cfg,
                             std::vector<double>* objective_trace) {
  if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0)) {
    throw GraphError("graph learning weights alpha and beta must be positive");
  }
  const int n = node_count(x, mode);
  if (n < 2) throw GraphError("graph learning needs at least two nodes");

  const Matrix dist = node_distances(x, mode);
  const std::vector<Edge> edges = complete_edges(n);
  const double radius = 0.5 * n;

  std::vector<double> cost(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    cost[e] = cfg.alpha * dist(edges[e].i, edges[e].j);
  }

  std::vector<double> degree(static_cast<std::size_t>(n));
  auto compute_degree = [&](const std::vector<double>& w) {
    std::fill(degree.begin(), degree.end(), 0.0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      degree[static_cast<std::size_t>(edges[e].i)] += w[e];
      degree[static_cast<std::size_t>(edges[e].j)] += w[e];
    }
  };
  // alpha * sum_e w_e d_e + beta * (sum_i deg_i^2 + 2 sum_e w_e^2), assuming
  // `degree` matches w.
  auto objective = [&](const std::vector<double>& w) {
    double linear = 0.0;
    double edge_sq = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      linear += cost[e] * w[e];
      edge_sq += w[e] * w[e];
    }
    double degree_sq = 0.0;
    for (double d : degree) degree_sq += d * d;
    return linear + cfg.beta * (degree_sq + 2.0 * edge_sq);
  };

  std::vector<double> w(edges.size(), 1.0 / (n - 1));
  compute_degree(w);
  double current = objective(w);
  if (objective_trace) {
    objective_trace->clear();
    objective_trace->push_back(current);
  }

  double step = 1.0 / (4.0 * cfg.beta * n);
  std::vector<double> gradient(edges.size());
  std::vector<double> next(edges.size());
  std::vector<double> current_degree = degree;
  bool converged = n == 2;
  int iter = 0;
  while (!converged && iter < cfg.max_iters) {
    ++iter;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto [i, j] = edges[e];
      gradient[e] = cost[e] + 2.0 * cfg.beta *
                                  (current_degree[static_cast<std::size_t>(i)] +
                                   current_degree[static_cast<std::size_t>(j)] + 2.0 * w[e]);
      next[e] = w[e] - step * gradient[e];
    }
    project_to_simplex(next, radius);
    compute_degree(next);
    const double candidate = objective(next);
    if (candidate > current) {
      step *= 0.5;
      if (step < 1e-300) break;
      continue;
    }

    // ||L_next - L||_F^2 = sum_i (delta deg_i)^2 + 2 sum_e (delta w_e)^2
    double change_sq = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      change_sq += 2.0 * (next[e] - w[e]) * (next[e] - w[e]);
    }
    for (std::size_t i = 0; i < degree.size(); ++i) {
      change_sq += (degree[i] - current_degree[i]) * (degree[i] - current_degree[i]);
    }
    w.swap(next);
    current_degree = degree;
    current = candidate;
    if (objective_trace) objective_trace->push_back(current);
    if (std::sqrt(change_sq) < cfg.tol) converged = true;
  }

  GraphLaplacian laplacian(laplacian_from_edges(n, edges, w));
  return LaplacianFit{laplacian, learning_objective(x, laplacian, mode, cfg), iter, converged};
}

std::optional<std::string> laplacian_violation(const GraphLaplacian& l, bool check_trace) {
  const Matrix& m = l.matrix();
  const int n = l.size();
  std::ostringstream msg;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m(i, j) != m(j, i)) {
        msg << "not symmetric at (" << i << ", " << j << ")";
        return msg.str();
      }
      if (i != j && m(i, j) > 1e-9) {
        msg << "positive off-diagonal entry " << m(i, j) << " at (" << i << ", " << j << ")";
        return msg.str();
      }
    }
    const double row_sum = m.row(i).sum();
    if (std::abs(row_sum) > 1e-9 * n) {
      msg << "row " << i << " sums to " << row_sum;
      return msg.str();
    }
  }
  if (check_trace && std::abs(m.trace() - n) > 1e-6) {
    msg << "trace " << m.trace() << " differs from node count " << n;
    return msg.str();
  }
  const double lambda_min = sym_eig(m).lambda(0);
  if (lambda_min < -1e-8) {
    msg << "not positive semidefinite, smallest eigenvalue " << lambda_min;
    return msg.str();
  }
  return std::nullopt;
}

}  // namespace gnnlg
