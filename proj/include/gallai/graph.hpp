#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gallai {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

/// Undirected edge, stored with the smaller endpoint first.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  constexpr Edge() = default;
  constexpr Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

  constexpr Vertex other(Vertex x) const { return x == u ? v : u; }
  friend constexpr bool operator==(const Edge&, const Edge&) = default;
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

struct Terminals {
  Vertex source = 0;
  Vertex sink = 0;
  friend constexpr bool operator==(const Terminals&, const Terminals&) = default;
};

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Simple undirected graph on vertices 0..n-1 with optional designated
/// terminals. Edges are kept sorted; an edge's id is its position.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t n, std::vector<Edge> edges,
        std::optional<Terminals> terminals = std::nullopt)
      : n_(n), edges_(std::move(edges)), terminals_(terminals) {
    if (n_ >= kNoVertex) throw GraphError("vertex count too large");
    for (auto& e : edges_) {
      e = Edge(e.u, e.v);
      if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
      if (e.v >= n_) throw GraphError("edge endpoint " + std::to_string(e.v) + " out of range");
    }
    sort_edges();
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end()) {
      throw GraphError("duplicate edge (" + std::to_string(dup->u) + "," +
                       std::to_string(dup->v) + ")");
    }
    if (edges_.size() >= kNoEdge / 2) throw GraphError("too many edges");
    if (terminals_) {
      if (terminals_->source >= n_ || terminals_->sink >= n_)
        throw GraphError("terminal out of range");
      if (terminals_->source == terminals_->sink)
        throw GraphError("terminals must be distinct");
    }
    build_adjacency();
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_[id]; }
  const std::optional<Terminals>& terminals() const { return terminals_; }

  std::size_t degree(Vertex x) const { return offsets_[x + 1] - offsets_[x]; }

  struct Incidence {
    Vertex neighbor;
    EdgeId edge;
  };

  /// Incident edges of `x`, sorted by neighbor id.
  std::pair<const Incidence*, const Incidence*> incident(Vertex x) const {
    return {adjacency_.data() + offsets_[x], adjacency_.data() + offsets_[x + 1]};
  }

  std::optional<EdgeId> edge_id(Vertex a, Vertex b) const {
    if (a >= n_ || b >= n_) return std::nullopt;
    auto [lo, hi] = incident(a);
    auto it = std::lower_bound(lo, hi, b, [](const Incidence& inc, Vertex w) {
      return inc.neighbor < w;
    });
    if (it == hi || it->neighbor != b) return std::nullopt;
    return it->edge;
  }

  bool has_edge(Vertex a, Vertex b) const { return edge_id(a, b).has_value(); }

  Graph with_terminals(std::optional<Terminals> t) const {
    Graph g = *this;
    if (t) {
      if (t->source >= n_ || t->sink >= n_ || t->source == t->sink)
        throw GraphError("invalid terminals");
    }
    g.terminals_ = t;
    return g;
  }

 private:
  void build_adjacency() {
    offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    // With edges in (u, v) order, x first receives its smaller neighbors in
    // increasing order, then its larger ones, so every list comes out sorted.
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      const auto& e = edges_[id];
      adjacency_[fill[e.u]++] = {e.v, id};
      adjacency_[fill[e.v]++] = {e.u, id};
    }
  }

  /// Two-pass counting sort by (u, v); linear in n + m.
  void sort_edges() {
    std::vector<Edge> buffer(edges_.size());
    std::vector<std::size_t> start(n_ + 1);
    auto pass = [&](std::vector<Edge>& from, std::vector<Edge>& to, auto key) {
      std::fill(start.begin(), start.end(), 0);
      for (const auto& e : from) ++start[key(e) + 1];
      for (std::size_t x = 0; x < n_; ++x) start[x + 1] += start[x];
      for (const auto& e : from) to[start[key(e)]++] = e;
    };
    pass(edges_, buffer, [](const Edge& e) { return e.v; });
    pass(buffer, edges_, [](const Edge& e) { return e.u; });
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::optional<Terminals> terminals_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> adjacency_;
};

inline bool is_connected(const Graph& g) {
  if (g.n() <= 1) return true;
  std::vector<char> seen(g.n(), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    auto [lo, hi] = g.incident(x);
    for (auto it = lo; it != hi; ++it) {
      if (!seen[it->neighbor]) {
        seen[it->neighbor] = 1;
        ++count;
        stack.push_back(it->neighbor);
      }
    }
  }
  return count == g.n();
}

/// A simple path given by its vertex sequence.
using Path = std::vector<Vertex>;

struct PathCover {
  std::vector<Path> paths;

  std::size_t size() const { return paths.size(); }
};

struct DegreeProfile {
  std::size_t n_odd = 0;
  std::size_t n_even = 0;
  friend constexpr bool operator==(const DegreeProfile&, const DegreeProfile&) = default;
};

inline DegreeProfile degree_profile(const Graph& g) {
  DegreeProfile p;
  for (Vertex x = 0; x < g.n(); ++x) {
    if (g.degree(x) % 2 == 1) {
      ++p.n_odd;
    } else {
      ++p.n_even;
    }
  }
  return p;
}

/// Every odd-degree vertex is the endpoint of some path, and a path has two
/// endpoints, so no cover can use fewer than max(1, n_odd / 2) paths.
inline std::size_t endpoint_lower_bound(const Graph& g) {
  if (g.m() == 0) throw GraphError("lower bound undefined for a graph without edges");
  return std::max<std::size_t>(1, degree_profile(g).n_odd / 2);
}

enum class ViolationKind {
  kTooShort,
  kVertexOutOfRange,
  kRepeatedVertex,
  kNotAnEdge,
  kEdgeCoveredTwice,
  kEdgeUncovered,
};

struct Violation {
  ViolationKind kind;
  std::size_t path = 0;  // index of the offending path (unused for kEdgeUncovered)
  std::string message;
};

struct VerificationReport {
  bool valid = false;
  std::size_t size = 0;
  std::optional<Violation> violation;
};

/// Checks that `pc` partitions the edge set of `g` into simple paths.
inline VerificationReport verify_cover(const Graph& g, const PathCover& pc) {
  VerificationReport report;
  report.size = pc.paths.size();
  auto fail = [&](ViolationKind kind, std::size_t path, std::string msg) {
    report.valid = false;
    report.violation = Violation{kind, path, std::move(msg)};
    return report;
  };

  std::vector<std::size_t> stamp(g.n(), 0);
  std::vector<char> used(g.m(), 0);
  std::size_t covered = 0;
  for (std::size_t i = 0; i < pc.paths.size(); ++i) {
    const Path& p = pc.paths[i];
    const std::string where = "path " + std::to_string(i);
    if (p.size() < 2) return fail(ViolationKind::kTooShort, i, where + " has fewer than 2 vertices");
    for (Vertex x : p) {
      if (x >= g.n()) {
        return fail(ViolationKind::kVertexOutOfRange, i,
                    where + ": vertex " + std::to_string(x) + " out of range");
      }
      if (stamp[x] == i + 1) {
        return fail(ViolationKind::kRepeatedVertex, i,
                    where + ": vertex " + std::to_string(x) + " repeats");
      }
      stamp[x] = i + 1;
    }
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
      auto id = g.edge_id(p[j], p[j + 1]);
      const std::string pair = "(" + std::to_string(p[j]) + "," + std::to_string(p[j + 1]) + ")";
      if (!id) return fail(ViolationKind::kNotAnEdge, i, where + ": " + pair + " is not an edge");
      if (used[*id]) {
        return fail(ViolationKind::kEdgeCoveredTwice, i,
                    where + ": edge " + pair + " covered more than once");
      }
      used[*id] = 1;
      ++covered;
    }
  }
  if (covered != g.m()) {
    for (EdgeId id = 0; id < g.m(); ++id) {
      if (!used[id]) {
        const auto& e = g.edge(id);
        return fail(ViolationKind::kEdgeUncovered, 0,
                    "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") is not covered");
      }
    }
  }
  report.valid = true;
  return report;
}

inline std::size_t ceil_half(std::size_t n) { return (n + 1) / 2; }

}  // namespace gallai
