#include "tcoord/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace tcoord {

Digraph::Digraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 2) {
    throw std::invalid_argument("digraph needs at least 2 nodes, got " + std::to_string(n_));
  }
  for (const auto& [i, j] : edges_) {
    if (i < 1 || i > n_ || j < 1 || j > n_) {
      throw std::invalid_argument("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ") references a node outside 1.." + std::to_string(n_));
    }
    if (i == j) {
      throw std::invalid_argument("self-loop on node " + std::to_string(i));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

std::vector<int> Digraph::neighborhood(int i) const {
  if (i < 1 || i > n_) {
    throw std::out_of_range("node " + std::to_string(i) + " outside 1.." + std::to_string(n_));
  }
  std::vector<int> out;
  for (const auto& [dst, src] : edges_) {
    if (dst == i) out.push_back(src);
  }
  return out;
}

Matrix adjacency(const Digraph& g) {
  Matrix a = Matrix::Zero(g.size(), g.size());
  for (const auto& [i, j] : g.edges()) a(i - 1, j - 1) = 1.0;
  return a;
}

Matrix laplacian(const Digraph& g) {
  Matrix a = adjacency(g);
  Matrix l = -a;
  for (int i = 0; i < g.size(); ++i) l(i, i) = a.row(i).sum();
  return l;
}

std::optional<int> spanning_tree_root(const Digraph& g) {
  const int n = g.size();
  // successors[j] = nodes that receive directly from j
  std::vector<std::vector<int>> successors(n);
  for (const auto& [i, j] : g.edges()) successors[j - 1].push_back(i - 1);

  for (int root = 0; root < n; ++root) {
    std::vector<char> seen(n, 0);
    std::queue<int> frontier;
    frontier.push(root);
    seen[root] = 1;
    int reached = 1;
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int v : successors[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++reached;
          frontier.push(v);
        }
      }
    }
    if (reached == n) return root + 1;
  }
  return std::nullopt;
}

bool has_spanning_tree(const Digraph& g) { return spanning_tree_root(g).has_value(); }

bool has_spanning_tree_spectral(const Digraph& g, double zero_tol) {
  int zeros = 0;
  for (const auto& lambda : spectrum(laplacian(g))) {
    if (std::abs(lambda) <= zero_tol) {
      ++zeros;
    } else if (lambda.real() <= 0.0) {
      return false;
    }
  }
  return zeros == 1;
}

namespace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

// Groups eigenvalues by single linkage at distance `radius`.
std::vector<std::vector<int>> cluster(const std::vector<Complex>& values, double radius) {
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= radius) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

// True when (M - mu I)^k has a k-dimensional numerical null space, i.e. the
// cluster is one eigenvalue of algebraic multiplicity k.
bool is_multiple_eigenvalue(const Matrix& m, Complex mu, int k, double scale) {
  const int n = static_cast<int>(m.rows());
  ComplexMatrix shifted = m.cast<Complex>();
  shifted.diagonal().array() -= mu;
  ComplexMatrix power = shifted;
  for (int p = 1; p < k; ++p) power = power * shifted;
  Eigen::JacobiSVD<ComplexMatrix> svd(power);
  const auto& sigma = svd.singularValues();  // descending
  const double kth_smallest = sigma(n - k);
  return kth_smallest <= 1e-9 * std::pow(scale, k);
}

}  // namespace

std::vector<std::complex<double>> spectrum(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectrum: matrix must be square");
  if (m.rows() > kMaxDenseSize) {
    throw std::invalid_argument("spectrum: dimension " + std::to_string(m.rows()) +
                                " exceeds the dense limit " + std::to_string(kMaxDenseSize));
  }
  if (!m.allFinite()) throw std::invalid_argument("spectrum: non-finite entry");
  if (m.rows() == 0) return {};

  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectrum: eigenvalue iteration did not converge");
  }
  std::vector<Complex> values(solver.eigenvalues().begin(), solver.eigenvalues().end());

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (const auto& group : cluster(values, 1e-2 * scale)) {
    const int k = static_cast<int>(group.size());
    if (k < 2) continue;
    Complex mean{0.0, 0.0};
    for (int idx : group) mean += values[idx];
    mean /= static_cast<double>(k);
    if (std::abs(mean.imag()) <= 1e-14 * scale) mean.imag(0.0);
    if (!is_multiple_eigenvalue(m, mean, k, scale)) continue;
    for (int idx : group) values[idx] = mean;
  }

  std::sort(values.begin(), values.end(), [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return values;
}

}  // namespace tcoord
