#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "support.hpp"
#include "tcoord/graph.hpp"

using tcoord::Digraph;
using tcoord::Matrix;

namespace {

// Newton power sums: the multiset is pinned down by trace(M^k), k = 1..n.
void check_power_sums(const Matrix& m, const std::vector<std::complex<double>>& eig) {
  Matrix p = Matrix::Identity(m.rows(), m.cols());
  for (int k = 1; k <= m.rows(); ++k) {
    p = p * m;
    std::complex<double> s = 0.0;
    for (const auto& l : eig) s += std::pow(l, k);
    const double scale = std::max(1.0, std::pow(m.norm(), k));
    CHECK(std::abs(s - p.trace()) <= 1e-9 * scale);
  }
}

}  // namespace

TEST_CASE("neighborhood lists in-neighbors") {
  CHECK(Digraph(2, {{1, 2}}).neighborhood(1) == std::vector<int>{2});
  CHECK(Digraph(2, {{1, 2}}).neighborhood(2).empty());
  CHECK(Digraph(3, {{1, 2}, {1, 3}}).neighborhood(1) == std::vector<int>{2, 3});
  CHECK_THROWS_AS(Digraph(2, {{1, 2}}).neighborhood(3), std::out_of_range);
  CHECK_THROWS_AS(Digraph(2, {{1, 2}}).neighborhood(0), std::out_of_range);
}

TEST_CASE("digraph construction rejects bad input") {
  CHECK_THROWS_AS(Digraph(1, {}), std::invalid_argument);
  CHECK_THROWS_AS(Digraph(2, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Digraph(2, {{1, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Digraph(2, {{0, 1}}), std::invalid_argument);
  CHECK(Digraph(3, {{2, 1}, {1, 2}, {2, 1}}).edges() == std::vector<Digraph::Edge>{{1, 2}, {2, 1}});
}

TEST_CASE("laplacian rows sum to zero") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    auto g = testing::random_digraph(rng, 2 + k % 7, 0.4);
    const Matrix l = tcoord::laplacian(g);
    for (int i = 0; i < l.rows(); ++i) CHECK(l.row(i).sum() == 0.0);
  }
  const Matrix l = tcoord::laplacian(Digraph(3, {{1, 2}, {1, 3}, {3, 2}}));
  Matrix expected(3, 3);
  expected << 2, -1, -1, 0, 0, 0, 0, -1, 1;
  CHECK(l == expected);
}

TEST_CASE("spanning tree examples") {
  CHECK(tcoord::has_spanning_tree(Digraph(2, {{1, 2}})));
  CHECK(tcoord::spanning_tree_root(Digraph(2, {{1, 2}})) == 2);
  CHECK(tcoord::has_spanning_tree(Digraph(3, {{1, 2}, {3, 2}})));
  CHECK(tcoord::spanning_tree_root(Digraph(3, {{1, 2}, {3, 2}})) == 2);
  CHECK_FALSE(tcoord::has_spanning_tree(Digraph(3, {{1, 2}})));
  CHECK_FALSE(tcoord::has_spanning_tree(Digraph(4, {})));
  CHECK_FALSE(tcoord::has_spanning_tree_spectral(Digraph(3, {{1, 2}})));
}

TEST_CASE("reachability and spectral spanning-tree tests agree on random digraphs") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> size(2, 5);
  std::uniform_real_distribution<double> density(0.0, 0.8);
  int with_tree = 0;
  for (int k = 0; k < 1500; ++k) {
    auto g = testing::random_digraph(rng, size(rng), density(rng));
    const bool oracle = testing::closure_has_root(g);
    CHECK(tcoord::has_spanning_tree(g) == oracle);
    CHECK(tcoord::has_spanning_tree_spectral(g) == oracle);
    with_tree += oracle;
  }
  CHECK(with_tree > 300);
  CHECK(with_tree < 1200);
}

TEST_CASE("spectrum examples") {
  auto s = tcoord::spectrum(Matrix::Identity(2, 2));
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0] - 1.0) < 1e-12);
  CHECK(std::abs(s[1] - 1.0) < 1e-12);

  Matrix m(2, 2);
  m << 1, -1, 0, 0;
  s = tcoord::spectrum(m);
  CHECK(std::abs(s[0]) < 1e-12);
  CHECK(std::abs(s[1] - 1.0) < 1e-12);

  s = tcoord::spectrum(tcoord::laplacian(Digraph(3, {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2}})));
  CHECK(testing::greedy_match(s, {0.0, 3.0, 3.0}) < 1e-8);
}

TEST_CASE("spectrum of a directed chain recovers the defective eigenvalue") {
  // 1 <- 2 <- ... <- n: L has eigenvalue 1 with multiplicity n-1 in a single Jordan block.
  for (int n = 3; n <= 8; ++n) {
    std::vector<Digraph::Edge> edges;
    for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
    const auto s = tcoord::spectrum(tcoord::laplacian(Digraph(n, edges)));
    std::vector<std::complex<double>> expected(n, 1.0);
    expected[0] = 0.0;
    CHECK(testing::greedy_match(s, expected) < 1e-8);
  }
}

TEST_CASE("spectrum matches power sums on random matrices") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 60; ++k) {
    const int n = 2 + k % 15;
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
    const auto eig = tcoord::spectrum(m);
    REQUIRE(eig.size() == static_cast<std::size_t>(n));
    check_power_sums(m, eig);
    for (const auto& l : eig) {
      // each value is a root of det(M - l I)
      const Eigen::MatrixXcd shifted = m.cast<std::complex<double>>() - l * Eigen::MatrixXcd::Identity(n, n);
      const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
      CHECK(svd.singularValues()(n - 1) <= 1e-9 * std::max(1.0, m.norm()));
    }
  }
}

TEST_CASE("every laplacian has an eigenvalue at zero") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    auto g = testing::random_digraph(rng, 2 + k % 10, 0.3);
    const auto s = tcoord::spectrum(tcoord::laplacian(g));
    const auto z = std::min_element(s.begin(), s.end(), [](auto u, auto v) { return std::abs(u) < std::abs(v); });
    CHECK(std::abs(*z) <= 1e-8);
  }
}

TEST_CASE("spectrum rejects bad input") {
  CHECK_THROWS_AS(tcoord::spectrum(Matrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(tcoord::spectrum(Matrix::Identity(65, 65)), std::invalid_argument);
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = std::nan("");
  CHECK_THROWS_AS(tcoord::spectrum(m), std::invalid_argument);
}
