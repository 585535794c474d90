#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gallai/graph.hpp"

namespace gallai::detail {

/// One end of an edge: port 2e sits at the edge's first endpoint, port 2e+1
/// at its second.
using Port = std::uint32_t;
inline constexpr Port kNoPort = std::numeric_limits<Port>::max();

/// Edge-disjoint trails stored as a transition system: at every vertex each
/// incident edge is either paired with one other incident edge (a trail runs
/// through) or unpaired (a trail ends there). Joining two trails at a shared
/// endpoint and cutting a trail at an interior vertex are both O(1).
class TrailSet {
 public:
  TrailSet() = default;

  explicit TrailSet(const Graph& g) {
    ends_.reserve(g.m());
    for (const auto& e : g.edges()) ends_.push_back({e.u, e.v});
    mate_.assign(2 * ends_.size(), kNoPort);
  }

  EdgeId add_edge(Vertex a, Vertex b) {
    ends_.push_back({a, b});
    mate_.push_back(kNoPort);
    mate_.push_back(kNoPort);
    return static_cast<EdgeId>(ends_.size() - 1);
  }

  std::size_t edge_count() const { return ends_.size(); }

  static Port port(EdgeId e, int side) { return 2 * e + static_cast<Port>(side); }
  static EdgeId edge_of(Port p) { return p >> 1; }
  static Port opposite(Port p) { return p ^ 1U; }

  Vertex vertex_of(Port p) const {
    const auto& [a, b] = ends_[edge_of(p)];
    return (p & 1U) ? b : a;
  }

  /// The port of edge `e` located at vertex `x`.
  Port port_at(EdgeId e, Vertex x) const {
    const auto& [a, b] = ends_[e];
    if (a == x) return port(e, 0);
    if (b == x) return port(e, 1);
    throw std::logic_error("edge " + std::to_string(e) + " is not incident to vertex " +
                           std::to_string(x));
  }

  Port mate(Port p) const { return mate_[p]; }
  bool is_free(Port p) const { return mate_[p] == kNoPort; }

  void join(Port a, Port b) {
    if (vertex_of(a) != vertex_of(b) || edge_of(a) == edge_of(b))
      throw std::logic_error("join of ports at different vertices");
    if (!is_free(a) || !is_free(b)) throw std::logic_error("join of an already paired port");
    mate_[a] = b;
    mate_[b] = a;
    ++joins_;
  }

  /// Cuts the transition through `p`; returns the former mate (or kNoPort).
  Port cut(Port p) {
    Port q = mate_[p];
    if (q != kNoPort) {
      mate_[p] = kNoPort;
      mate_[q] = kNoPort;
      ++cuts_;
    }
    return q;
  }

  std::size_t joins() const { return joins_; }
  std::size_t cuts() const { return cuts_; }

  /// Vertex sequence of the trail starting at the free port `start`.
  Path walk(Port start) const {
    Path out{vertex_of(start)};
    Port cur = start;
    while (true) {
      Port far = opposite(cur);
      out.push_back(vertex_of(far));
      Port next = mate_[far];
      if (next == kNoPort) break;
      cur = next;
      if (out.size() > 2 * ends_.size() + 2) throw std::logic_error("trail walk does not terminate");
    }
    return out;
  }

  struct Extraction {
    PathCover cover;
    std::vector<std::uint32_t> path_of_edge;
  };

  /// All trails, in order of their lowest free port. Throws if some edges lie
  /// on a closed trail.
  Extraction extract() const {
    Extraction ex;
    ex.path_of_edge.assign(ends_.size(), std::numeric_limits<std::uint32_t>::max());
    for (Port p = 0; p < mate_.size(); ++p) {
      if (mate_[p] != kNoPort) continue;
      if (ex.path_of_edge[edge_of(p)] != std::numeric_limits<std::uint32_t>::max()) continue;
      const auto idx = static_cast<std::uint32_t>(ex.cover.paths.size());
      Port cur = p;
      Path path{vertex_of(cur)};
      while (true) {
        ex.path_of_edge[edge_of(cur)] = idx;
        Port far = opposite(cur);
        path.push_back(vertex_of(far));
        Port next = mate_[far];
        if (next == kNoPort) break;
        cur = next;
      }
      ex.cover.paths.push_back(std::move(path));
    }
    for (EdgeId e = 0; e < ends_.size(); ++e) {
      if (ex.path_of_edge[e] == std::numeric_limits<std::uint32_t>::max())
        throw std::logic_error("closed trail through edge " + std::to_string(e));
    }
    return ex;
  }

  /// Number of trails, counted as half the number of free ports.
  std::size_t trail_count() const {
    std::size_t free_ports = 0;
    for (Port q : mate_) free_ports += (q == kNoPort);
    return free_ports / 2;
  }

 private:
  std::vector<std::pair<Vertex, Vertex>> ends_;
  std::vector<Port> mate_;
  std::size_t joins_ = 0;
  std::size_t cuts_ = 0;
};

}  // namespace gallai::detail
