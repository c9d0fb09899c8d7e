#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "tcoord/etc.hpp"
#include "tcoord/graph.hpp"

namespace testing {

inline std::filesystem::path bundled_path() { return std::filesystem::path(TCOORD_SCENARIO_DIR) / "bundled_5uav.json"; }

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline tcoord::Digraph random_digraph(std::mt19937_64& rng, int n, double p) {
  std::bernoulli_distribution keep(p);
  std::vector<tcoord::Digraph::Edge> edges;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i != j && keep(rng)) edges.emplace_back(i, j);
    }
  }
  return tcoord::Digraph(n, edges);
}

// Transitive closure by Warshall; true iff some node reaches all others.
inline bool closure_has_root(const tcoord::Digraph& g) {
  const int n = g.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) reach[i][i] = 1;
  for (auto [i, j] : g.edges()) reach[j - 1][i - 1] = 1;  // j transmits to i
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
  for (int r = 0; r < n; ++r) {
    if (std::all_of(reach[r].begin(), reach[r].end(), [](char c) { return c != 0; })) return true;
  }
  return false;
}

inline tcoord::Digraph random_spanning_digraph(std::mt19937_64& rng, int n_max) {
  std::uniform_int_distribution<int> size(2, n_max);
  std::uniform_real_distribution<double> density(0.1, 0.7);
  for (;;) {
    auto g = random_digraph(rng, size(rng), density(rng));
    if (closure_has_root(g)) return g;
  }
}

// Greedy nearest-pair matching; returns the largest matched distance, or
// infinity when sizes differ.
inline double greedy_match(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& x : a) {
    auto best = std::min_element(b.begin(), b.end(),
                                 [&](const auto& u, const auto& v) { return std::abs(u - x) < std::abs(v - x); });
    worst = std::max(worst, std::abs(*best - x));
    b.erase(best);
  }
  return worst;
}

// Removes the eigenvalue closest to zero.
inline std::vector<std::complex<double>> drop_zero(std::vector<std::complex<double>> s) {
  auto z = std::min_element(s.begin(), s.end(), [](const auto& u, const auto& v) { return std::abs(u) < std::abs(v); });
  s.erase(z);
  return s;
}

// Classical RK4 on gamma_hat'' = -b (gamma_hat' - pace(t)); breakpoints must sit on the grid.
inline tcoord::Estimate integrate(double gamma, double gamma_dot, double t0, double t1, double b, const tcoord::PaceProfile& pace,
                           double h = 1e-6) {
  const long steps = std::lround((t1 - t0) / h);
  double x = gamma;
  double v = gamma_dot;
  for (long k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    const double pd = pace.value(t + 0.5 * h);  // constant within the step
    auto acc = [&](double vel) { return -b * (vel - pd); };
    const double k1x = v, k1v = acc(v);
    const double k2x = v + 0.5 * h * k1v, k2v = acc(v + 0.5 * h * k1v);
    const double k3x = v + 0.5 * h * k2v, k3v = acc(v + 0.5 * h * k2v);
    const double k4x = v + h * k3v, k4v = acc(v + h * k3v);
    x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return {x, v};
}

}  // namespace testing
