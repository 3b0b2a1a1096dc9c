#pragma once

// Reference computations for the tests. Deliberately naive and independent
// of the library's algorithms: hitting times come from the transition matrix
// with a dense LU solve per target, model quantities from explicit sums over
// vertex pairs.

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sbmh/graph.hpp"
#include "sbmh/model.hpp"

namespace oracle {

inline Eigen::MatrixXd transition(const sbmh::Graph& g) {
  const int n = g.n();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int v = 0; v < n; ++v) {
    int d = 0;
    for (int w = 0; w < n; ++w) d += g.edge(v, w);
    for (int w = 0; w < n; ++w) {
      if (g.edge(v, w)) p(v, w) = 1.0 / d;
    }
  }
  return p;
}

// h(v) = 1 + sum_u P(v,u) h(u) for v != w, h(w) = 0.
inline Eigen::VectorXd hitting_to(const sbmh::Graph& g, int w) {
  const int n = g.n();
  const Eigen::MatrixXd p = transition(g);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - p;
  Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
  a.row(w).setZero();
  a(w, w) = 1.0;
  b(w) = 0.0;
  return a.fullPivLu().solve(b);
}

inline Eigen::MatrixXd hitting_matrix(const sbmh::Graph& g) {
  Eigen::MatrixXd h(g.n(), g.n());
  for (int w = 0; w < g.n(); ++w) h.col(w) = hitting_to(g, w);
  return h;
}

inline Eigen::VectorXd stationary(const sbmh::Graph& g) {
  Eigen::VectorXd pi(g.n());
  double total = 0.0;
  for (int v = 0; v < g.n(); ++v) {
    int d = 0;
    for (int w = 0; w < g.n(); ++w) d += g.edge(v, w);
    pi(v) = d;
    total += d;
  }
  return pi / total;
}

inline sbmh::Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::uint8_t> adj(static_cast<std::size_t>(n) * n, 0);
  for (auto [v, w] : edges) {
    adj[static_cast<std::size_t>(v) * n + w] = 1;
    adj[static_cast<std::size_t>(w) * n + v] = 1;
  }
  return sbmh::Graph::from_adjacency(n, std::move(adj), std::vector<int>(n, 0), 1);
}

inline sbmh::Graph complete(int n, bool loops) {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < n; ++v) {
    for (int w = loops ? v : v + 1; w < n; ++w) e.emplace_back(v, w);
  }
  return from_edges(n, e);
}

inline double pair_probability(const sbmh::BlockModelConfig& c, int v, int w) {
  return c.block_of(v) == c.block_of(w) ? c.p[c.block_of(v)] : c.q;
}

// Expected degree of v by summing its row of the edge-probability matrix.
inline double expected_degree(const sbmh::BlockModelConfig& c, int v) {
  double s = 0.0;
  for (int w = 0; w < c.n; ++w) {
    if (w != v || c.allow_loops) s += pair_probability(c, v, w);
  }
  return s;
}

// Hand-rolled generator of random valid configurations for property tests.
struct ConfigGen {
  std::mt19937_64 rng;
  explicit ConfigGen(std::uint64_t seed) : rng(seed) {}

  double unit(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  sbmh::BlockModelConfig config(int m, int block_size, double p_lo, double p_hi, double q_lo,
                                double q_hi, bool identical = false) {
    sbmh::BlockModelConfig c;
    c.m = m;
    c.n = m * block_size;
    c.q = unit(q_lo, q_hi);
    const double p0 = unit(p_lo, p_hi);
    for (int b = 0; b < m; ++b) c.p.push_back(identical ? p0 : unit(p_lo, p_hi));
    std::sort(c.p.begin(), c.p.end(), std::greater<>());
    c.seed = rng();
    return c;
  }
};

}  // namespace oracle
