#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace tcoord {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest matrix accepted by the dense eigenvalue routines.
inline constexpr int kMaxDenseSize = 64;

/// Directed communication network over agents 1..n.
///
/// An edge (i, j) means information flows from agent j to agent i, so j is
/// an in-neighbor of i. Edges are stored sorted and de-duplicated; node ids
/// are 1-based everywhere in the public interface.
class Digraph {
 public:
  using Edge = std::pair<int, int>;

  /// Throws std::invalid_argument on n < 2, self-loops or out-of-range ids.
  Digraph(int n, std::vector<Edge> edges);

  int size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// In-neighbors N_i = { j : (i, j) in E }, ascending.
  /// Throws std::out_of_range for an invalid node id.
  std::vector<int> neighborhood(int i) const;

  bool operator==(const Digraph&) const = default;

 private:
  int n_;
  std::vector<Edge> edges_;
};

/// 0/1 adjacency matrix, A(i-1, j-1) = 1 iff (i, j) is an edge.
Matrix adjacency(const Digraph& g);

/// L = Delta - A with Delta the diagonal of in-degrees.
Matrix laplacian(const Digraph& g);

/// Node (1-based) from which every other node is reachable along the
/// information-flow direction, or nullopt. Smallest such root is returned.
std::optional<int> spanning_tree_root(const Digraph& g);

/// Reachability-based directed spanning tree test.
bool has_spanning_tree(const Digraph& g);

/// Spectral cross-check: exactly one eigenvalue of L within `zero_tol` of 0,
/// all remaining eigenvalues with strictly positive real part.
bool has_spanning_tree_spectral(const Digraph& g, double zero_tol = 1e-8);

/// Eigenvalues of a small dense real matrix, with algebraic multiplicity,
/// sorted by (real, imag).
///
/// Clusters of eigenvalues that stem from one defective eigenvalue are
/// replaced by their mean, which is far better conditioned than the
/// individual perturbed values. Throws std::invalid_argument for
/// non-square, oversized or non-finite input and std::runtime_error when
/// the QR iteration fails to converge.
std::vector<std::complex<double>> spectrum(const Matrix& m);

}  // namespace tcoord
