#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "gallai/graph.hpp"

namespace gallai {

struct OracleLimits {
  std::size_t max_edges = 14;
  std::uint64_t node_limit = 200'000'000;
};

struct OracleResult {
  std::size_t min_size = 0;
  PathCover witness;
  std::uint64_t nodes_explored = 0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class OracleSearch {
 public:
  OracleSearch(const Graph& g, const OracleLimits& limits)
      : g_(g), limits_(limits), used_(g.m(), 0), on_path_(g.n(), 0) {}

  bool feasible(std::size_t k) {
    budget_ = k;
    paths_.clear();
    return open_path();
  }

  std::uint64_t nodes() const { return nodes_; }
  PathCover witness() const {
    PathCover pc;
    for (const auto& p : paths_) pc.paths.emplace_back(p.begin(), p.end());
    return pc;
  }

 private:
  void tick() {
    if (++nodes_ > limits_.node_limit)
      throw BudgetExceeded("oracle node limit of " + std::to_string(limits_.node_limit) + " reached");
  }

  /// Sum over components of the uncovered subgraph of max(1, odd/2).
  std::size_t remaining_lower_bound() {
    std::vector<std::size_t> deg(g_.n(), 0);
    for (EdgeId e = 0; e < g_.m(); ++e) {
      if (!used_[e]) {
        ++deg[g_.edge(e).u];
        ++deg[g_.edge(e).v];
      }
    }
    std::vector<char> seen(g_.n(), 0);
    std::size_t total = 0;
    for (Vertex s = 0; s < g_.n(); ++s) {
      if (seen[s] || deg[s] == 0) continue;
      std::size_t odd = 0;
      std::vector<Vertex> stack{s};
      seen[s] = 1;
      while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        odd += deg[x] % 2;
        auto [lo, hi] = g_.incident(x);
        for (auto it = lo; it != hi; ++it) {
          if (!used_[it->edge] && !seen[it->neighbor]) {
            seen[it->neighbor] = 1;
            stack.push_back(it->neighbor);
          }
        }
      }
      total += std::max<std::size_t>(1, odd / 2);
    }
    return total;
  }

  bool open_path() {
    tick();
    EdgeId first = 0;
    while (first < g_.m() && used_[first]) ++first;
    if (first == g_.m()) return true;
    if (paths_.size() == budget_) return false;
    if (paths_.size() + remaining_lower_bound() > budget_) return false;
    const Edge& e = g_.edge(first);
    paths_.push_back({e.u, e.v});
    used_[first] = 1;
    on_path_[e.u] = on_path_[e.v] = 1;
    bool ok = extend(true);
    if (!ok) {
      used_[first] = 0;
      on_path_[e.u] = on_path_[e.v] = 0;
      paths_.pop_back();
    }
    return ok;
  }

  /// Grows the newest path at its right end, then at its left end; closing
  /// the left phase opens the next path.
  bool extend(bool right) {
    tick();
    // paths_ may reallocate during recursion, so the newest path is
    // re-fetched rather than held by reference.
    const Vertex end = right ? paths_.back().back() : paths_.back().front();
    auto [lo, hi] = g_.incident(end);
    for (auto it = lo; it != hi; ++it) {
      if (used_[it->edge] || on_path_[it->neighbor]) continue;
      used_[it->edge] = 1;
      on_path_[it->neighbor] = 1;
      if (right) {
        paths_.back().push_back(it->neighbor);
      } else {
        paths_.back().push_front(it->neighbor);
      }
      if (extend(right)) return true;
      if (right) {
        paths_.back().pop_back();
      } else {
        paths_.back().pop_front();
      }
      on_path_[it->neighbor] = 0;
      used_[it->edge] = 0;
    }
    if (right) return extend(false);
    for (Vertex x : paths_.back()) on_path_[x] = 0;
    if (open_path()) return true;
    for (Vertex x : paths_.back()) on_path_[x] = 1;
    return false;
  }

  const Graph& g_;
  OracleLimits limits_;
  std::vector<char> used_;
  std::vector<char> on_path_;
  std::vector<std::deque<Vertex>> paths_;
  std::size_t budget_ = 0;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Minimum path cover by exhaustive search; for small graphs only.
inline OracleResult min_path_cover(const Graph& g, const OracleLimits& limits = {}) {
  if (g.m() > limits.max_edges)
    throw std::invalid_argument("oracle edge cap exceeded: m=" + std::to_string(g.m()) + " > " +
                                std::to_string(limits.max_edges));
  if (!is_connected(g)) throw std::invalid_argument("oracle requires a connected graph");
  detail::OracleSearch search(g, limits);
  for (std::size_t k = endpoint_lower_bound(g); k <= g.m(); ++k) {
    if (search.feasible(k)) return {k, search.witness(), search.nodes()};
  }
  throw std::logic_error("no path cover found with m paths");
}

}  // namespace gallai
