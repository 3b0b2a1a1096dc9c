#include "sbmh/graph.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sbmh/error.hpp"
#include "sbmh/rng.hpp"

namespace sbmh {

Graph Graph::from_adjacency(int n, std::vector<std::uint8_t> adjacency,
                            std::vector<int> block_of, int blocks) {
  if (n < 1) throw ValidationError("graph needs at least one vertex");
  if (adjacency.size() != static_cast<std::size_t>(n) * n) {
    throw ValidationError("adjacency matrix has wrong size");
  }
  if (block_of.size() != static_cast<std::size_t>(n)) {
    throw ValidationError("block labels have wrong length");
  }
  for (int b : block_of) {
    if (b < 0 || b >= blocks) throw ValidationError("block label out of range");
  }

  Graph g;
  g.n_ = n;
  g.blocks_ = blocks;
  g.block_of_ = std::move(block_of);
  g.adjacency_ = std::move(adjacency);
  g.degrees_.assign(n, 0);
  for (int v = 0; v < n; ++v) {
    for (int w = 0; w < n; ++w) {
      const auto a = g.adjacency_[g.index(v, w)];
      if (a > 1) throw ValidationError("adjacency entries must be 0 or 1");
      if (a != g.adjacency_[g.index(w, v)]) throw ValidationError("adjacency matrix is not symmetric");
      g.degrees_[v] += a;
      if (w > v) g.edge_count_ += a;
    }
    if (g.adjacency_[g.index(v, v)]) {
      ++g.loop_count_;
      ++g.edge_count_;
    }
  }
  return g;
}

std::vector<std::vector<int>> Graph::neighbour_lists() const {
  std::vector<std::vector<int>> out(n_);
  for (int v = 0; v < n_; ++v) {
    out[v].reserve(degrees_[v]);
    for (int w = 0; w < n_; ++w) {
      if (adjacency_[index(v, w)]) out[v].push_back(w);
    }
  }
  return out;
}

Graph sample(const BlockModelConfig& config) {
  config.validate();
  const int n = config.n;
  std::vector<std::uint8_t> adj(static_cast<std::size_t>(n) * n, 0);
  std::vector<int> blocks(n);
  for (int v = 0; v < n; ++v) blocks[v] = config.block_of(v);

  Rng rng(config.seed);
  for (int v = 0; v < n; ++v) {
    const double p_in = config.p[blocks[v]];
    const std::size_t row = static_cast<std::size_t>(v) * n;
    if (config.allow_loops && rng.bernoulli(p_in)) adj[row + v] = 1;
    for (int w = v + 1; w < n; ++w) {
      const double prob = blocks[w] == blocks[v] ? p_in : config.q;
      if (rng.bernoulli(prob)) {
        adj[row + w] = 1;
        adj[static_cast<std::size_t>(w) * n + v] = 1;
      }
    }
  }
  return Graph::from_adjacency(n, std::move(adj), std::move(blocks), config.m);
}

bool is_connected(const Graph& g) {
  const int n = g.n();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < n; ++w) {
      if (!seen[w] && g.edge(v, w)) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

DegreeConcentration degree_concentration(const Graph& g, const DerivedParams& params, double c) {
  if (!(c > 0.0)) throw ValidationError("degree concentration constant c must be positive");
  if (g.n() != params.config.n) throw ValidationError("graph and parameters disagree on n");
  DegreeConcentration out;
  out.c = c;
  for (int v = 0; v < g.n(); ++v) {
    const double gamma = params.gamma[g.block_of(v)];
    if (std::abs(g.degree(v) - gamma) > c * std::sqrt(gamma)) ++out.violations;
  }
  out.fraction = static_cast<double>(out.violations) / g.n();
  out.chernoff_reference = 2.0 * std::exp(-c * c / 2.0);
  return out;
}

// ---------------------------------------------------------------------------

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.n() << ' ' << g.blocks() << '\n';
  for (int v = 0; v < g.n(); ++v) out << g.block_of(v) << ' ' << v << '\n';
  for (int v = 0; v < g.n(); ++v) {
    for (int w = v; w < g.n(); ++w) {
      if (g.edge(v, w)) out << v << ' ' << w << '\n';
    }
  }
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_line = [&](std::string& dst) {
    while (std::getline(in, dst)) {
      ++line_no;
      if (!dst.empty() && dst.back() == '\r') dst.pop_back();
      if (!dst.empty()) return true;
    }
    return false;
  };
  auto fail = [&](const std::string& why) -> Graph {
    throw ValidationError("edge list line " + std::to_string(line_no) + ": " + why);
  };

  if (!next_line(line)) throw ValidationError("edge list is empty");
  int n = 0, blocks = 0;
  {
    std::istringstream ls(line);
    std::string extra;
    if (!(ls >> n >> blocks) || (ls >> extra) || n < 1 || blocks < 1) {
      return fail("expected header 'n m_blocks'");
    }
  }
  std::vector<int> block_of(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!next_line(line)) return fail("missing block lines");
    std::istringstream ls(line);
    int b = 0, v = 0;
    std::string extra;
    if (!(ls >> b >> v) || (ls >> extra)) return fail("expected 'block v'");
    if (v != i) return fail("block lines must list vertices 0..n-1 in order");
    block_of[v] = b;
  }
  std::vector<std::uint8_t> adj(static_cast<std::size_t>(n) * n, 0);
  while (next_line(line)) {
    std::istringstream ls(line);
    int v = 0, w = 0;
    std::string extra;
    if (!(ls >> v >> w) || (ls >> extra)) return fail("expected 'v w'");
    if (v < 0 || w < 0 || v >= n || w >= n) return fail("vertex out of range");
    if (v > w) return fail("edges must be written with v <= w");
    auto& cell = adj[static_cast<std::size_t>(v) * n + w];
    if (cell) return fail("duplicate edge");
    cell = 1;
    adj[static_cast<std::size_t>(w) * n + v] = 1;
  }
  return Graph::from_adjacency(n, std::move(adj), std::move(block_of), blocks);
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

void save_edge_list(const std::string& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  write_edge_list(out, g);
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read edge list '" + path + "'");
  return read_edge_list(in);
}

}  // namespace sbmh
