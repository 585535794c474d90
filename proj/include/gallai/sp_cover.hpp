#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <limits>
#include <utility>
#include <vector>

#include "gallai/graph.hpp"
#include "gallai/spqtree.hpp"
#include "gallai/trails.hpp"

namespace gallai {

/// Cover types of a two-terminal series-parallel graph with source s and
/// sink t. Every type designates an s-t path.
///   IP    : size <= n/2 + rho
///   IS    : size <= (n-1)/2 + rho
///   O     : a second s-t path, interior-disjoint from the first;
///           size <= (n+1)/2 + rho
///   L     : a second path starting at s and avoiding t; size <= n/2 + rho
///   Gamma : a second path starting at t and avoiding s; size <= n/2 + rho
enum class CoverType : std::uint8_t { IP, IS, O, L, Gamma };

inline std::string_view type_name(CoverType t) {
  switch (t) {
    case CoverType::IP: return "I_P";
    case CoverType::IS: return "I_S";
    case CoverType::O: return "O";
    case CoverType::L: return "L";
    case CoverType::Gamma: return "Gamma";
  }
  return "?";
}

/// Class Pi = {I_P, O}; class Sigma = {I_S, L, Gamma}.
inline bool in_class_pi(CoverType t) { return t == CoverType::IP || t == CoverType::O; }
inline bool in_class_sigma(CoverType t) { return !in_class_pi(t); }

inline bool has_second_path(CoverType t) {
  return t == CoverType::O || t == CoverType::L || t == CoverType::Gamma;
}

/// Path budget in half-units: a cover of type t on n vertices with rho braces
/// satisfies 2 * size <= budget_half_units(t, n) + 2 * rho.
inline long budget_half_units(CoverType t, long n) {
  switch (t) {
    case CoverType::IP: return n;
    case CoverType::IS: return n - 1;
    case CoverType::O: return n + 1;
    case CoverType::L: return n;
    case CoverType::Gamma: return n;
  }
  return 0;
}

/// Two whole paths p1, p2 with endpoints {u, v} plus a u-v piece of p3, all
/// three interior-disjoint. p1 is the path carrying the split vertex.
struct Brace {
  Vertex u = 0;
  Vertex v = 0;
  std::size_t p1 = 0;
  std::size_t p2 = 0;
  std::size_t p3 = 0;
  Vertex split_vertex = kNoVertex;
  std::size_t creation_index = 0;
  NodeId created_at = kNoNode;
  NodeId component = kNoNode;  // topmost node of the creating P-component
  std::size_t component_depth = 0;
};

struct TypedCover {
  Graph graph;
  PathCover cover;
  CoverType type = CoverType::IP;
  std::size_t st_path = 0;
  std::optional<std::size_t> second_path;
  std::vector<Brace> braces;
  std::size_t n = 0;  // vertices of the represented graph

  std::size_t rho() const { return braces.size(); }
};

class BraceConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Snapshot of one composition step, handed to an observer of typed_cover().
struct CompositionStep {
  struct BraceSnapshot {
    Vertex u = 0;
    Vertex v = 0;
    Path split_path;
    Path unsplit_path;
    Path p3;
    Vertex split_vertex = kNoVertex;
  };

  NodeId node = kNoNode;
  NodeKind kind = NodeKind::Q;
  std::string_view rule;  // "Q", "s-IX", "s-IO", "s-OX", "s-OO", "p-II", "p-IO", "p-IL", "p-LI", "p-LO"
  CoverType type = CoverType::IP;
  Vertex source = 0;
  Vertex sink = 0;
  std::size_t n = 0;
  std::size_t paths = 0;
  std::size_t rho = 0;
  Path st;
  std::optional<Path> second;
  std::optional<BraceSnapshot> brace;
  std::size_t cuts_so_far = 0;
};

using StepObserver = std::function<void(const CompositionStep&)>;

namespace detail {

/// End ports of a designated path; `a` sits at the end the type names (s for
/// s-t paths and L, t for Gamma).
struct Handle {
  Port a = kNoPort;
  Port b = kNoPort;
};

struct NodeCover {
  CoverType type = CoverType::IP;
  Handle st;
  Handle second;
  std::size_t n = 0;
  std::size_t paths = 0;
  std::size_t rho = 0;
  // Potential split vertex: an interior vertex of the s-t path and the two
  // ports through which that path passes it.
  Vertex split = kNoVertex;
  Port split_a = kNoPort;
  Port split_b = kNoPort;
};

struct BraceRecord {
  Vertex u = 0;
  Vertex v = 0;
  Handle split_path;
  Handle unsplit_path;
  Handle p3;
  Vertex split = kNoVertex;
  Port split_a = kNoPort;
  Port split_b = kNoPort;
  NodeId created_at = kNoNode;
};

class CoverBuilder {
 public:
  CoverBuilder(const SpqTree& tree, Graph graph)
      : tree_(tree), graph_(std::move(graph)), trails_(graph_) {}

  TypedCover run(const StepObserver& observer) {
    for (NodeId id : tree_.post_order()) {
      const auto& nd = tree_.node(id);
      std::string_view rule;
      std::optional<std::size_t> new_brace;
      switch (nd.kind) {
        case NodeKind::Q: rule = leaf(id); break;
        case NodeKind::S: rule = series(id); break;
        case NodeKind::P: rule = parallel(id, new_brace); break;
      }
      const auto& st = state_.back();
      const long lhs = 2 * static_cast<long>(st.paths);
      const long rhs = budget_half_units(st.type, static_cast<long>(st.n)) + 2 * static_cast<long>(st.rho);
      if (lhs > rhs) {
        throw std::logic_error("path budget exceeded at node " + std::to_string(id) + " (" +
                               std::string(rule) + ")");
      }
      if (observer) observer(snapshot(id, rule, new_brace));
    }
    return finish();
  }

 private:
  NodeCover pop() {
    NodeCover c = state_.back();
    state_.pop_back();
    return c;
  }

  std::pair<Port, Port> end_at(const Handle& h, Vertex x) const {
    if (trails_.vertex_of(h.a) == x) return {h.a, h.b};
    if (trails_.vertex_of(h.b) == x) return {h.b, h.a};
    throw std::logic_error("designated path does not end at vertex " + std::to_string(x));
  }

  /// Joins two paths at their common endpoint x. The result runs from the
  /// far end of `first` to the far end of `second`.
  Handle merge(const Handle& first, const Handle& second, Vertex x, Port* at_x_first = nullptr,
               Port* at_x_second = nullptr) {
    auto [fx, fo] = end_at(first, x);
    auto [sx, so] = end_at(second, x);
    trails_.join(fx, sx);
    if (at_x_first) *at_x_first = fx;
    if (at_x_second) *at_x_second = sx;
    return {fo, so};
  }

  std::string_view leaf(NodeId id) {
    const auto& nd = tree_.node(id);
    auto e = graph_.edge_id(nd.source, nd.sink);
    if (!e) throw std::logic_error("Q-node edge missing from graph");
    auto& c = state_.emplace_back();
    c.type = CoverType::IP;
    c.st = {trails_.port_at(*e, nd.source), trails_.port_at(*e, nd.sink)};
    c.n = 2;
    c.paths = 1;
    c.rho = 0;
    return "Q";
  }

  std::string_view series(NodeId id) {
    const auto& nd = tree_.node(id);
    const NodeCover r = pop();
    const NodeCover l = pop();
    const Vertex x = tree_.node(nd.left).sink;
    auto& c = state_.emplace_back();
    c.n = l.n + r.n - 1;
    c.rho = l.rho + r.rho;
    c.paths = l.paths + r.paths - 1;
    c.st = merge(l.st, r.st, x, &c.split_a, &c.split_b);
    c.split = x;
    c.second = {};
    if (l.type == CoverType::IP) {
      if (r.type == CoverType::O) {
        // The other s2-t2 path starts at t and avoids s.
        c.type = CoverType::Gamma;
        c.second = {r.second.b, r.second.a};
        return "s-IO";
      }
      c.type = CoverType::IS;
      return "s-IX";
    }
    if (l.type == CoverType::O) {
      if (r.type == CoverType::O) {
        merge(l.second, r.second, x);
        c.paths -= 1;
        c.type = CoverType::IS;
        return "s-OO";
      }
      c.type = CoverType::L;
      c.second = l.second;
      return "s-OX";
    }
    throw std::logic_error("series node whose left child is not of class Pi (tree not normalized?)");
  }

  std::string_view parallel(NodeId id, std::optional<std::size_t>& new_brace) {
    const auto& nd = tree_.node(id);
    const NodeCover r = pop();
    const NodeCover l = pop();
    const Vertex s = nd.source;
    const Vertex t = nd.sink;
    auto& c = state_.emplace_back();
    c.n = l.n + r.n - 2;
    c.rho = l.rho + r.rho;
    c.paths = l.paths + r.paths;
    c.split = l.split;
    c.split_a = l.split_a;
    c.split_b = l.split_b;
    c.second = {};
    const bool r_single = r.type == CoverType::IS || r.type == CoverType::IP;
    const bool r_hook = r.type == CoverType::L || r.type == CoverType::Gamma;

    if (l.type == CoverType::IS) {
      if (r_single) {
        c.type = CoverType::O;
        c.st = l.st;
        c.second = r.st;
        return "p-II";
      }
      if (r.type == CoverType::O) {
        BraceRecord b;
        b.u = s;
        b.v = t;
        b.split_path = r.st;
        b.unsplit_path = r.second;
        b.p3 = l.st;
        b.split = r.split;
        b.split_a = r.split_a;
        b.split_b = r.split_b;
        b.created_at = id;
        braces_.push_back(b);
        new_brace = braces_.size() - 1;
        c.rho += 1;
        c.type = CoverType::IP;
        c.st = l.st;
        return "p-IO";
      }
    }
    if (in_class_sigma(l.type) && r_hook) {
      // L-configuration merges at s, Gamma-configuration at t.
      merge(l.st, r.second, r.type == CoverType::L ? s : t);
      c.paths -= 1;
      c.type = CoverType::IP;
      c.st = r.st;
      return "p-IL";
    }
    if (l.type == CoverType::L || l.type == CoverType::Gamma) {
      const Vertex at = l.type == CoverType::L ? s : t;
      if (r_single) {
        merge(l.second, r.st, at);
        c.paths -= 1;
        c.type = CoverType::IP;
        c.st = l.st;
        return "p-LI";
      }
      if (r.type == CoverType::O) {
        merge(l.second, r.st, at);
        c.paths -= 1;
        c.type = CoverType::O;
        c.st = l.st;
        c.second = r.second;
        return "p-LO";
      }
    }
    throw std::logic_error("parallel node whose left child is not of class Sigma (tree not normalized?)");
  }

  CompositionStep snapshot(NodeId id, std::string_view rule, std::optional<std::size_t> brace) const {
    const auto& nd = tree_.node(id);
    const auto& c = state_.back();
    CompositionStep step;
    step.node = id;
    step.kind = nd.kind;
    step.rule = rule;
    step.type = c.type;
    step.source = nd.source;
    step.sink = nd.sink;
    step.n = c.n;
    step.paths = c.paths;
    step.rho = c.rho;
    step.st = trails_.walk(c.st.a);
    if (has_second_path(c.type)) step.second = trails_.walk(c.second.a);
    if (brace) {
      const auto& b = braces_[*brace];
      CompositionStep::BraceSnapshot snap;
      snap.u = b.u;
      snap.v = b.v;
      snap.split_path = trails_.walk(b.split_path.a);
      snap.unsplit_path = trails_.walk(b.unsplit_path.a);
      snap.p3 = trails_.walk(b.p3.a);
      snap.split_vertex = b.split;
      step.brace = std::move(snap);
    }
    step.cuts_so_far = trails_.cuts();
    return step;
  }

  TypedCover finish() {
    const NodeId root = tree_.root();
    // P-component tops and their depths, for brace removal order.
    std::vector<NodeId> top(tree_.size(), kNoNode);
    std::vector<std::size_t> depth(tree_.size(), 0);
    {
      std::vector<NodeId> stack{root};
      top[root] = root;
      while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        const auto& nd = tree_.node(id);
        if (nd.kind == NodeKind::Q) continue;
        for (NodeId ch : {nd.left, nd.right}) {
          depth[ch] = depth[id] + 1;
          top[ch] = (nd.kind == NodeKind::P && tree_.node(ch).kind == NodeKind::P) ? top[id] : ch;
          stack.push_back(ch);
        }
      }
    }

    auto ex = trails_.extract();
    const auto& rc = state_.back();
    TypedCover tc;
    tc.type = rc.type;
    tc.n = rc.n;
    tc.st_path = ex.path_of_edge[TrailSet::edge_of(rc.st.a)];
    if (has_second_path(rc.type)) tc.second_path = ex.path_of_edge[TrailSet::edge_of(rc.second.a)];
    tc.braces.reserve(braces_.size());
    for (std::size_t i = 0; i < braces_.size(); ++i) {
      const auto& b = braces_[i];
      Brace out;
      out.u = b.u;
      out.v = b.v;
      out.p1 = ex.path_of_edge[TrailSet::edge_of(b.split_path.a)];
      out.p2 = ex.path_of_edge[TrailSet::edge_of(b.unsplit_path.a)];
      out.p3 = ex.path_of_edge[TrailSet::edge_of(b.p3.a)];
      out.split_vertex = b.split;
      out.creation_index = i;
      out.created_at = b.created_at;
      out.component = top[b.created_at];
      out.component_depth = depth[out.component];
      tc.braces.push_back(out);
    }
    tc.cover = std::move(ex.cover);
    if (tc.cover.size() != rc.paths) throw std::logic_error("path count bookkeeping mismatch");
    tc.graph = std::move(graph_);
    return tc;
  }

  const SpqTree& tree_;
  Graph graph_;
  TrailSet trails_;
  // Covers of finished subtrees awaiting their parent, in post-order.
  std::vector<NodeCover> state_;
  std::vector<BraceRecord> braces_;
};

}  // namespace detail

/// Builds a typed cover bottom-up over a normalized SPQ-tree. The root type
/// is I_P for a Q root, in Pi for a P root, in Sigma for an S root.
inline TypedCover typed_cover(const NormalizedSpqTree& t, const StepObserver& observer = {}) {
  detail::CoverBuilder builder(t.tree(), expand(t.tree()));
  return builder.run(observer);
}

namespace detail {

class BraceRemover {
 public:
  explicit BraceRemover(const TypedCover& tc) : tc_(tc), trails_(tc.graph), positions_(tc.cover.paths.size()) {
    for (std::size_t i = 0; i < tc.cover.paths.size(); ++i) {
      const Path& p = tc.cover.paths[i];
      if (p.size() < 2) throw std::invalid_argument("cover contains a path shorter than one edge");
      for (std::size_t j = 1; j + 1 < p.size(); ++j) trails_.join(port(p[j], p[j - 1]), port(p[j], p[j + 1]));
    }
  }

  PathCover run() {
    std::vector<Resolved> resolved;
    resolved.reserve(tc_.braces.size());
    for (const auto& b : tc_.braces) resolved.push_back(resolve(b));

    std::vector<std::size_t> order(tc_.braces.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      const auto& a = tc_.braces[x];
      const auto& b = tc_.braces[y];
      return std::tie(a.component_depth, a.component, a.creation_index) <
             std::tie(b.component_depth, b.component, b.creation_index);
    });

    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j < order.size() && tc_.braces[order[j]].component == tc_.braces[order[i]].component) ++j;
      std::size_t k = i;
      for (; k + 1 < j; k += 2) remove_pair(resolved[order[k]], resolved[order[k + 1]]);
      if (k < j) remove_single(resolved[order[k]]);
      i = j;
    }

    auto ex = trails_.extract();
    if (ex.cover.size() + tc_.braces.size() != tc_.cover.size())
      throw std::logic_error("brace removal did not save one path per brace");
    return std::move(ex.cover);
  }

 private:
  struct Resolved {
    Vertex u = 0;
    Vertex v = 0;
    Port s_u = kNoPort;  // split path ends
    Port s_v = kNoPort;
    Port n_u = kNoPort;  // unsplit path ends
    Port n_v = kNoPort;
    Port t_u = kNoPort;  // p3 edge at u heading towards v
    Port z_a = kNoPort;  // the split path's two ports at the split vertex
    Port z_b = kNoPort;
  };

  Port port(Vertex at, Vertex other) const {
    auto e = tc_.graph.edge_id(at, other);
    if (!e) {
      throw std::invalid_argument("cover uses non-edge (" + std::to_string(at) + "," +
                                  std::to_string(other) + ")");
    }
    return trails_.port_at(*e, at);
  }

  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

  /// Index of x on the given path, or kAbsent. Each path is indexed on first use.
  std::size_t position(std::size_t path, Vertex x) {
    const Path& p = tc_.cover.paths.at(path);
    auto& index = positions_[path];
    if (index.empty()) {
      index.reserve(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) index.emplace_back(p[i], i);
      std::sort(index.begin(), index.end());
    }
    auto it = std::lower_bound(index.begin(), index.end(), std::pair<Vertex, std::size_t>{x, 0});
    return it != index.end() && it->first == x ? it->second : kAbsent;
  }

  /// Ports of a whole path with endpoints {u, v}: (port at u, port at v).
  std::pair<Port, Port> whole_path_ends(std::size_t idx, Vertex u, Vertex v, const char* what) {
    const Path& p = tc_.cover.paths.at(idx);
    const std::size_t k = p.size();
    if (p.front() == u && p.back() == v) return {port(u, p[1]), port(v, p[k - 2])};
    if (p.front() == v && p.back() == u) return {port(u, p[k - 2]), port(v, p[1])};
    throw BraceConsistencyError(std::string("brace path ") + what + " does not run between " +
                                std::to_string(u) + " and " + std::to_string(v));
  }

  Resolved resolve(const Brace& b) {
    if (b.p1 == b.p2 || b.p1 == b.p3 || b.p2 == b.p3)
      throw BraceConsistencyError("brace paths are not distinct");
    Resolved r;
    r.u = b.u;
    r.v = b.v;
    auto [p1u, p1v] = whole_path_ends(b.p1, b.u, b.v, "p1");
    auto [p2u, p2v] = whole_path_ends(b.p2, b.u, b.v, "p2");

    std::size_t split_idx = b.p1;
    std::size_t pos = position(b.p1, b.split_vertex);
    bool on_p1 = pos != kAbsent && pos > 0 && pos + 1 < tc_.cover.paths[b.p1].size();
    if (on_p1) {
      r.s_u = p1u, r.s_v = p1v, r.n_u = p2u, r.n_v = p2v;
    } else {
      split_idx = b.p2;
      pos = position(b.p2, b.split_vertex);
      if (pos == kAbsent || pos == 0 || pos + 1 >= tc_.cover.paths[b.p2].size())
        throw BraceConsistencyError("split vertex is not interior to p1 or p2");
      r.s_u = p2u, r.s_v = p2v, r.n_u = p1u, r.n_v = p1v;
    }
    const Path& sp = tc_.cover.paths[split_idx];
    r.z_a = port(b.split_vertex, sp[pos - 1]);
    r.z_b = port(b.split_vertex, sp[pos + 1]);

    const std::size_t iu = position(b.p3, b.u);
    const std::size_t iv = position(b.p3, b.v);
    if (iu == kAbsent || iv == kAbsent) throw BraceConsistencyError("p3 does not contain both brace ends");
    const Path& p3 = tc_.cover.paths[b.p3];
    const std::size_t next = iu < iv ? iu + 1 : iu - 1;
    r.t_u = port(b.u, p3[next]);
    return r;
  }

  void require_free(std::initializer_list<Port> ports) const {
    for (Port p : ports) {
      if (!trails_.is_free(p)) throw BraceConsistencyError("brace path end is no longer an endpoint");
    }
  }

  void cut_split(const Resolved& r) {
    if (trails_.mate(r.z_a) != r.z_b) throw BraceConsistencyError("split path was altered at its split vertex");
    trails_.cut(r.z_a);
  }

  /// Replaces the split and unsplit paths of two parallel braces by two
  /// paths, each running between the two split vertices.
  void remove_pair(const Resolved& b, const Resolved& c) {
    require_free({b.s_u, b.s_v, b.n_u, b.n_v, c.s_u, c.s_v, c.n_u, c.n_v});
    cut_split(b);
    cut_split(c);
    trails_.join(b.s_v, c.n_v);
    trails_.join(c.n_u, c.s_u);
    trails_.join(b.s_u, b.n_u);
    trails_.join(b.n_v, c.s_v);
  }

  /// Cuts p3 at u, routes its u-v piece out along the u-half of the split
  /// path and its remainder through the unsplit path into the v-half.
  void remove_single(const Resolved& b) {
    require_free({b.s_u, b.s_v, b.n_u, b.n_v});
    cut_split(b);
    Port before_u = trails_.cut(b.t_u);
    trails_.join(b.t_u, b.s_u);
    if (before_u != kNoPort) trails_.join(before_u, b.n_u);
    trails_.join(b.n_v, b.s_v);
  }

  const TypedCover& tc_;
  TrailSet trails_;
  std::vector<std::vector<std::pair<Vertex, std::size_t>>> positions_;
};

}  // namespace detail

/// Eliminates all braces, saving one path per brace. Parallel braces are
/// grouped by P-component; groups go outermost first, and within a group
/// braces go in creation order, two at a time where possible.
inline PathCover remove_braces(const TypedCover& tc) {
  if (tc.braces.empty()) return tc.cover;
  detail::BraceRemover remover(tc);
  return remover.run();
}

/// Path cover of a two-terminal series-parallel graph with at most
/// ceil(n/2) paths.
inline PathCover sp_path_cover(const Graph& g) {
  auto norm = normalize(recognize_and_build(g));
  const SpqTree& t = norm;
  // The tree was built from g, so g can stand in for expand(t).
  detail::CoverBuilder builder(t, g.with_terminals(Terminals{t.source(), t.sink()}));
  return remove_braces(builder.run({}));
}

}  // namespace gallai
