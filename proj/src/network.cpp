#include "epicon/network.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace epicon {

Graph Graph::from_edges(std::size_t n,
                        const std::vector<std::pair<NodeId, NodeId>>& edges,
                        std::vector<Point> positions) {
  if (!positions.empty() && positions.size() != n) {
    throw std::invalid_argument("Graph: positions size does not match n");
  }
  Graph g;
  g.in_neighbors_.resize(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw std::invalid_argument("Graph: node id out of range");
    if (a == b) throw std::invalid_argument("Graph: self-loop");
    g.in_neighbors_[a].push_back(b);
    g.in_neighbors_[b].push_back(a);
  }
  for (auto& list : g.in_neighbors_) {
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw std::invalid_argument("Graph: duplicate edge");
    }
  }
  g.positions_ = std::move(positions);
  return g;
}

Graph Graph::complete(std::size_t n) {
  Graph g;
  g.in_neighbors_.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    auto& list = g.in_neighbors_[i];
    list.reserve(n - 1);
    for (NodeId j = 0; j < n; ++j) {
      if (j != i) list.push_back(j);
    }
  }
  return g;
}

bool Graph::has_edge(NodeId from, NodeId to) const {
  const auto& list = in_neighbors_[to];
  return std::binary_search(list.begin(), list.end(), from);
}

std::size_t Graph::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : in_neighbors_) total += list.size();
  return total / 2;
}

std::size_t Graph::isolated_count() const {
  return static_cast<std::size_t>(
      std::count_if(in_neighbors_.begin(), in_neighbors_.end(),
                    [](const auto& l) { return l.empty(); }));
}

Graph generate_rgg(std::size_t n, double side, double radius,
                   std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_rgg: n < 1");
  if (!(side > 0.0) || !(radius > 0.0)) {
    throw std::invalid_argument("generate_rgg: side and radius must be > 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, side);

  Graph g;
  g.side_ = side;
  g.radius_ = radius;
  g.seed_ = seed;
  g.positions_.resize(n);
  for (auto& p : g.positions_) {
    p.x = coord(rng);
    p.y = coord(rng);
  }
  g.in_neighbors_.resize(n);
  const double r2 = radius * radius;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const double dx = g.positions_[i].x - g.positions_[j].x;
      const double dy = g.positions_[i].y - g.positions_[j].y;
      if (dx * dx + dy * dy <= r2) {
        g.in_neighbors_[i].push_back(j);
        g.in_neighbors_[j].push_back(i);
      }
    }
  }
  // j is appended in increasing order for each i, so lists are sorted.
  return g;
}

std::size_t min_degree(const Graph& g) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (NodeId i = 0; i < g.size(); ++i) best = std::min(best, g.degree(i));
  return g.size() == 0 ? 0 : best;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  char line[128];
  std::snprintf(line, sizeof line, "%zu %.17g %.17g %llu\n", g.size(), g.side(),
                g.radius(), static_cast<unsigned long long>(g.seed()));
  out << line;
  const auto& pos = g.positions();
  for (NodeId i = 0; i < g.size(); ++i) {
    const Point p = pos.empty() ? Point{} : pos[i];
    std::snprintf(line, sizeof line, "%u %.17g %.17g\n", i, p.x, p.y);
    out << line;
  }
  for (NodeId i = 0; i < g.size(); ++i) {
    for (NodeId j : g.in_neighbors(i)) {
      if (i < j) out << i << ' ' << j << '\n';
    }
  }
}

Graph read_edge_list(std::istream& in) {
  std::size_t n = 0;
  Graph g;
  unsigned long long seed = 0;
  if (!(in >> n >> g.side_ >> g.radius_ >> seed)) {
    throw std::runtime_error("edge list: malformed header");
  }
  g.seed_ = seed;
  g.positions_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t id = 0;
    Point p;
    if (!(in >> id >> p.x >> p.y) || id >= n) {
      throw std::runtime_error("edge list: malformed node line");
    }
    g.positions_[id] = p;
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  NodeId a = 0, b = 0;
  while (in >> a >> b) edges.emplace_back(a, b);
  if (!in.eof()) throw std::runtime_error("edge list: malformed edge line");

  Graph built = Graph::from_edges(n, edges, std::move(g.positions_));
  built.side_ = g.side_;
  built.radius_ = g.radius_;
  built.seed_ = g.seed_;
  return built;
}

Partition::Partition(std::size_t m, std::vector<std::uint32_t> assignment,
                     PartitionMode mode)
    : assignment_(std::move(assignment)), members_(m), mode_(mode) {
  for (NodeId i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] >= m) {
      throw std::invalid_argument("Partition: subgroup id out of range");
    }
    members_[assignment_[i]].push_back(i);
  }
}

Partition partition_nodes(const Graph& g, std::size_t m, PartitionMode mode,
                          std::uint64_t seed) {
  const std::size_t n = g.size();
  if (m == 0 || m > n) {
    throw std::invalid_argument("partition_nodes: need 1 <= m <= n");
  }
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  if (mode == PartitionMode::IndexSplit) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  } else {
    const auto& pos = g.positions();
    if (pos.size() != n) {
      throw std::invalid_argument("partition_nodes: spatial mode needs positions");
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return pos[a].x < pos[b].x; });
  }
  // Consecutive chunks of `order`; the first n % m chunks get one extra node.
  std::vector<std::uint32_t> assignment(n);
  const std::size_t base = n / m;
  const std::size_t extra = n % m;
  std::size_t cursor = 0;
  for (std::uint32_t s = 0; s < m; ++s) {
    const std::size_t size = base + (s < extra ? 1 : 0);
    for (std::size_t c = 0; c < size; ++c) assignment[order[cursor++]] = s;
  }
  return Partition(m, std::move(assignment), mode);
}

SubgroupNeighborhoods::SubgroupNeighborhoods(const Graph& g, const Partition& p)
    : unions_(p.count()) {
  std::vector<bool> seen(g.size());
  for (std::size_t s = 0; s < p.count(); ++s) {
    std::fill(seen.begin(), seen.end(), false);
    for (NodeId i : p.members(s)) {
      for (NodeId j : g.in_neighbors(i)) seen[j] = true;
    }
    for (NodeId j = 0; j < g.size(); ++j) {
      if (seen[j]) unions_[s].push_back(j);
    }
  }
}

double SubgroupNeighborhoods::ratio(std::size_t s,
                                    const std::vector<bool>& infected) const {
  const auto& u = unions_[s];
  if (u.empty()) return 0.0;
  std::size_t hit = 0;
  for (NodeId j : u) hit += infected[j] ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(u.size());
}

double local_infection_ratio(const Graph& g, const Partition& p,
                             const std::vector<bool>& infected, std::size_t s) {
  if (s >= p.count()) throw std::invalid_argument("subgroup id out of range");
  return SubgroupNeighborhoods(g, p).ratio(s, infected);
}

double heterogeneity(const Graph& g, const Partition& p,
                     const std::vector<bool>& infected) {
  const SubgroupNeighborhoods hoods(g, p);
  const double global =
      g.size() == 0 ? 0.0
                    : static_cast<double>(std::count(infected.begin(),
                                                     infected.end(), true)) /
                          static_cast<double>(g.size());
  double worst = 0.0;
  for (std::size_t s = 0; s < hoods.count(); ++s) {
    worst = std::max(worst, std::abs(hoods.ratio(s, infected) - global));
  }
  return worst;
}

HomogeneityReport homogeneity_check(const Graph& g, const Partition& p,
                                    const std::vector<bool>& infected) {
  const SubgroupNeighborhoods hoods(g, p);
  std::vector<double> local(p.count());
  for (std::size_t s = 0; s < p.count(); ++s) local[s] = hoods.ratio(s, infected);

  HomogeneityReport report;
  report.holds.assign(g.size(), true);
  for (NodeId i = 0; i < g.size(); ++i) {
    std::size_t hit = 0;
    for (NodeId j : g.in_neighbors(i)) hit += infected[j] ? 1 : 0;
    const double allowed = static_cast<double>(g.degree(i)) * local[p.group_of(i)];
    const bool ok = static_cast<double>(hit) <= allowed + 1e-12;
    report.holds[i] = ok;
    if (infected[i]) continue;
    if (!ok) ++report.violations;
    if (hit > 0) {
      const double ratio = allowed > 0.0
                               ? static_cast<double>(hit) / allowed
                               : std::numeric_limits<double>::infinity();
      report.worst_ratio = std::max(report.worst_ratio, ratio);
    }
  }
  return report;
}

}  // namespace epicon
