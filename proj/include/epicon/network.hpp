#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace epicon {

using NodeId = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Agent network. In-neighbor lists are sorted ascending and exclude the
/// node itself. Immutable after construction.
class Graph {
 public:
  Graph() = default;

  /// Undirected graph from an explicit edge list; duplicate edges and
  /// self-loops are rejected.
  static Graph from_edges(std::size_t n,
                          const std::vector<std::pair<NodeId, NodeId>>& edges,
                          std::vector<Point> positions = {});

  static Graph complete(std::size_t n);

  std::size_t size() const { return in_neighbors_.size(); }
  const std::vector<NodeId>& in_neighbors(NodeId i) const {
    return in_neighbors_[i];
  }
  std::size_t degree(NodeId i) const { return in_neighbors_[i].size(); }
  const std::vector<Point>& positions() const { return positions_; }

  // Generation metadata; zero for hand-built graphs.
  double side() const { return side_; }
  double radius() const { return radius_; }
  std::uint64_t seed() const { return seed_; }

  bool has_edge(NodeId from, NodeId to) const;
  std::size_t edge_count() const;  // undirected edges
  std::size_t isolated_count() const;

  friend Graph generate_rgg(std::size_t n, double side, double radius,
                            std::uint64_t seed);
  friend Graph read_edge_list(std::istream& in);

 private:
  std::vector<std::vector<NodeId>> in_neighbors_;
  std::vector<Point> positions_;
  double side_ = 0.0;
  double radius_ = 0.0;
  std::uint64_t seed_ = 0;
};

/// n nodes uniform in [0, side]^2, edge iff Euclidean distance <= radius.
/// Deterministic for a fixed seed.
Graph generate_rgg(std::size_t n, double side, double radius,
                   std::uint64_t seed);

std::size_t min_degree(const Graph& g);

/// Header `n L r seed`, then `i x y` per node, then `i j` (i < j) per edge.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

enum class PartitionMode { IndexSplit, Spatial };

/// Disjoint cover of the nodes by m subgroups (ids 0..m-1).
class Partition {
 public:
  Partition(std::size_t m, std::vector<std::uint32_t> assignment,
            PartitionMode mode);

  std::size_t count() const { return members_.size(); }
  std::uint32_t group_of(NodeId i) const { return assignment_[i]; }
  const std::vector<NodeId>& members(std::size_t s) const {
    return members_[s];
  }
  const std::vector<std::uint32_t>& assignment() const { return assignment_; }
  PartitionMode mode() const { return mode_; }

 private:
  std::vector<std::uint32_t> assignment_;
  std::vector<std::vector<NodeId>> members_;
  PartitionMode mode_;
};

/// IndexSplit: random balanced assignment (sizes differ by at most one).
/// Spatial: balanced bands ordered by x coordinate, group 0 leftmost.
/// Throws std::invalid_argument when m == 0 or m > n.
Partition partition_nodes(const Graph& g, std::size_t m, PartitionMode mode,
                          std::uint64_t seed);

/// Union of the in-neighborhoods of each subgroup, precomputed once per
/// (graph, partition) because local infection ratios are read every step.
class SubgroupNeighborhoods {
 public:
  SubgroupNeighborhoods(const Graph& g, const Partition& p);

  const std::vector<NodeId>& of(std::size_t s) const { return unions_[s]; }
  std::size_t count() const { return unions_.size(); }

  /// |union_s ∩ infected| / |union_s|, 0 for an empty union.
  double ratio(std::size_t s, const std::vector<bool>& infected) const;

 private:
  std::vector<std::vector<NodeId>> unions_;
};

double local_infection_ratio(const Graph& g, const Partition& p,
                             const std::vector<bool>& infected,
                             std::size_t s);

/// max_s |I_s - I| for I = |infected| / n.
double heterogeneity(const Graph& g, const Partition& p,
                     const std::vector<bool>& infected);

struct HomogeneityReport {
  std::vector<bool> holds;    // per node: |N_i ∩ infected| <= d_i I_s
  double worst_ratio = 0.0;   // max |N_i ∩ infected| / (d_i I_s), +inf if I_s = 0
  std::size_t violations = 0; // over non-infected nodes
};

HomogeneityReport homogeneity_check(const Graph& g, const Partition& p,
                                    const std::vector<bool>& infected);

}  // namespace epicon
