#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sbmh/model.hpp"

namespace sbmh {

/// Undirected simple graph with optional loops and block labels, stored as a
/// dense 0/1 adjacency matrix.
///
/// A loop {v, v} is one element of the edge set and adds 1 to d_v, so
///   sum_v d_v = 2 |E| - |L|.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from a row-major n x n 0/1 matrix. Throws
  /// ValidationError if the matrix is not symmetric, has entries other than
  /// 0/1, or `block_of` has the wrong length.
  static Graph from_adjacency(int n, std::vector<std::uint8_t> adjacency,
                              std::vector<int> block_of, int blocks);

  int n() const { return n_; }
  int blocks() const { return blocks_; }
  int block_of(int v) const { return block_of_[v]; }
  const std::vector<int>& block_labels() const { return block_of_; }

  bool edge(int v, int w) const { return adjacency_[index(v, w)] != 0; }
  const std::vector<std::uint8_t>& adjacency() const { return adjacency_; }

  int degree(int v) const { return degrees_[v]; }
  const std::vector<int>& degrees() const { return degrees_; }

  /// |E|: unordered pairs plus loops, each loop once.
  std::int64_t edge_count() const { return edge_count_; }
  std::int64_t loop_count() const { return loop_count_; }
  /// 2|E| - |L| = sum of degrees, the normaliser of the stationary law.
  std::int64_t degree_sum() const { return 2 * edge_count_ - loop_count_; }

  /// Neighbours of v in increasing order; v itself appears once if it has a
  /// loop, so a uniform pick realises transition probability a_{vw} / d_v.
  std::vector<std::vector<int>> neighbour_lists() const;

  bool operator==(const Graph&) const = default;

 private:
  std::size_t index(int v, int w) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(w);
  }

  int n_ = 0;
  int blocks_ = 0;
  std::vector<int> block_of_;
  std::vector<std::uint8_t> adjacency_;
  std::vector<int> degrees_;
  std::int64_t edge_count_ = 0;
  std::int64_t loop_count_ = 0;
};

/// Samples G_N(M, P) with independent Bernoulli edges from config.seed.
/// Pairs are visited row by row (v ascending, then w >= v), the loop of v
/// first; loops are skipped entirely when allow_loops is false.
Graph sample(const BlockModelConfig& config);

/// True iff a single component spans every vertex (loops are irrelevant).
bool is_connected(const Graph& g);

struct DegreeConcentration {
  double c = 0.0;
  int violations = 0;   // vertices with |d_v - gamma_B(v)| > c sqrt(gamma_B(v))
  double fraction = 0.0;
  double chernoff_reference = 0.0;  // 2 exp(-c^2 / 2)
};

DegreeConcentration degree_concentration(const Graph& g, const DerivedParams& params, double c);

// Edge-list text format:
//   line 1:        "n m_blocks"
//   next n lines:  "block v"    (v = 0 .. n-1 in order)
//   then:          "v w" for every edge with v <= w (loops as "v v")
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);
std::string to_edge_list(const Graph& g);
Graph parse_edge_list(const std::string& text);
void save_edge_list(const std::string& path, const Graph& g);
Graph load_edge_list(const std::string& path);

}  // namespace sbmh
