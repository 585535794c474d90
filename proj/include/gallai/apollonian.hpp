#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gallai/graph.hpp"
#include "gallai/trails.hpp"

namespace gallai {

using Face = std::array<Vertex, 3>;

inline Face sorted_face(Vertex a, Vertex b, Vertex c) {
  Face f{a, b, c};
  std::sort(f.begin(), f.end());
  return f;
}

/// Stacks vertex `v` into the interior face `face`.
struct StackOp {
  Vertex v = 0;
  Face face{};
};

/// A planar 3-tree: the triangle {0,1,2} plus stacking operations, op i
/// adding vertex 3+i.
struct StackingSequence {
  std::vector<StackOp> ops;

  std::size_t n() const { return 3 + ops.size(); }
};

class InvalidFace : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string face_string(const Face& f) {
  return "{" + std::to_string(f[0]) + "," + std::to_string(f[1]) + "," + std::to_string(f[2]) + "}";
}

/// Interior faces of the current graph. Stacking v into {a,b,c} (sorted)
/// creates {v,a,b}, {v,a,c}, {v,b,c} as slots 0, 1, 2 of owner v. A face's
/// owner is its largest vertex, so a triple maps to (owner, slot) directly.
class FaceTable {
 public:
  struct Entry {
    Vertex owner = kNoVertex;
    std::uint8_t slot = 0;
  };

  explicit FaceTable(std::size_t ops = 0) {
    stacked_into_.reserve(ops);
    consumed_.reserve(1 + 3 * ops);
    consumed_.push_back(0);
  }

  /// Replaces `face` by the three faces around `v`; returns the consumed entry.
  Entry stack(Vertex v, const Face& face) {
    const Face f = sorted_face(face[0], face[1], face[2]);
    auto [entry, index] = locate(f);
    if (index == kMissing || consumed_[index])
      throw InvalidFace("vertex " + std::to_string(v) + " stacked into " + face_string(f) +
                        ", which is not an interior face");
    consumed_[index] = 1;
    stacked_into_.push_back(f);
    consumed_.insert(consumed_.end(), {0, 0, 0});
    return entry;
  }

 private:
  static constexpr std::size_t kMissing = static_cast<std::size_t>(-1);

  std::pair<Entry, std::size_t> locate(const Face& f) const {
    if (f[0] == f[1] || f[1] == f[2]) return {{}, kMissing};
    if (f[2] < 3) return {{}, 0};
    const Vertex owner = f[2];
    const std::size_t k = owner - 3;
    if (k >= stacked_into_.size()) return {{}, kMissing};
    const Face& p = stacked_into_[k];
    std::uint8_t slot;
    if (f[0] == p[0] && f[1] == p[1]) {
      slot = 0;
    } else if (f[0] == p[0] && f[1] == p[2]) {
      slot = 1;
    } else if (f[0] == p[1] && f[1] == p[2]) {
      slot = 2;
    } else {
      return {{}, kMissing};
    }
    return {{owner, slot}, 1 + 3 * k + slot};
  }

  std::vector<Face> stacked_into_;
  std::vector<char> consumed_;
};

inline void check_sequence_shape(const StackingSequence& seq) {
  if (seq.n() >= (Vertex{1} << 21)) throw InvalidFace("stacking sequence too long");
  for (std::size_t i = 0; i < seq.ops.size(); ++i) {
    const auto& op = seq.ops[i];
    if (op.v != 3 + i)
      throw InvalidFace("op " + std::to_string(i) + " stacks vertex " + std::to_string(op.v) +
                        ", expected " + std::to_string(3 + i));
    for (Vertex x : op.face) {
      if (x >= op.v) throw InvalidFace("op " + std::to_string(i) + " references a vertex not yet present");
    }
  }
}

/// Edge set of an already validated sequence.
inline Graph stacked_graph(const StackingSequence& seq) {
  std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}};
  edges.reserve(3 + 3 * seq.ops.size());
  for (const auto& op : seq.ops) {
    for (Vertex x : op.face) edges.emplace_back(x, op.v);
  }
  return Graph(seq.n(), std::move(edges));
}

}  // namespace detail

inline Graph build_graph(const StackingSequence& seq) {
  detail::check_sequence_shape(seq);
  detail::FaceTable faces(seq.ops.size());
  for (const auto& op : seq.ops) faces.stack(op.v, op.face);
  return detail::stacked_graph(seq);
}

/// T_G with its leaves deleted: one node per stacked vertex. Node i is vertex
/// 3+i; its parent is the vertex whose stacking created the face it went into.
struct StackingTree {
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::vector<std::size_t> parent;
  std::vector<std::array<std::size_t, 3>> children;  // by face slot of the parent
  std::vector<Face> face_of;                         // sorted
  std::vector<std::size_t> depth;

  std::size_t size() const { return parent.size(); }
  static Vertex vertex(std::size_t node) { return static_cast<Vertex>(node + 3); }
  static std::size_t node(Vertex v) { return v - 3; }

  std::size_t child_count(std::size_t i) const {
    return static_cast<std::size_t>(std::count_if(children[i].begin(), children[i].end(),
                                                  [](std::size_t c) { return c != kNone; }));
  }

  std::size_t leaf_count() const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < size(); ++i) k += child_count(i) == 0;
    return k;
  }
};

inline StackingTree stacking_tree(const StackingSequence& seq) {
  detail::check_sequence_shape(seq);
  detail::FaceTable faces(seq.ops.size());
  StackingTree t;
  const std::size_t k = seq.ops.size();
  t.parent.assign(k, StackingTree::kNone);
  t.children.assign(k, {StackingTree::kNone, StackingTree::kNone, StackingTree::kNone});
  t.face_of.resize(k);
  t.depth.assign(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& op = seq.ops[i];
    auto entry = faces.stack(op.v, op.face);
    t.face_of[i] = sorted_face(op.face[0], op.face[1], op.face[2]);
    if (entry.owner != kNoVertex) {
      const std::size_t p = StackingTree::node(entry.owner);
      t.parent[i] = p;
      t.children[p][entry.slot] = i;
      t.depth[i] = t.depth[p] + 1;
    }
  }
  return t;
}

enum class GroupType : std::uint8_t { Exceptional, I, II, III };

/// `nodes` lists stacking-tree nodes: type I {parent, child}, type II
/// {parent, child, child}, type III {sibling, sibling, sibling}.
struct Group {
  GroupType type = GroupType::Exceptional;
  std::vector<std::size_t> nodes;
};

struct GroupPartition {
  std::vector<Group> groups;  // g_1 first; g_1 is Exceptional, possibly empty
  std::size_t alpha = 0;
  std::size_t beta = 0;
  std::size_t gamma = 0;
};

/// Repeatedly groups a deepest remaining leaf (smallest vertex id on ties)
/// with its remaining siblings, or with its parent when it has fewer than two.
inline GroupPartition group_partition(const StackingTree& t) {
  const std::size_t k = t.size();
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return t.depth[a] != t.depth[b] ? t.depth[a] > t.depth[b] : a < b;
  });

  std::vector<char> removed(k, 0);
  std::vector<Group> created;
  GroupPartition gp;
  Group first{GroupType::Exceptional, {}};
  for (std::size_t v : order) {
    if (removed[v]) continue;
    const std::size_t p = t.parent[v];
    if (p == StackingTree::kNone) {
      first.nodes.push_back(v);
      removed[v] = 1;
      continue;
    }
    std::array<std::size_t, 2> sibs{};
    std::size_t n_sibs = 0;
    for (std::size_t c : t.children[p]) {
      if (c != StackingTree::kNone && c != v && !removed[c]) sibs[n_sibs++] = c;
    }
    Group g;
    if (n_sibs == 0) {
      g = {GroupType::I, {p, v}};
      ++gp.alpha;
    } else if (n_sibs == 1) {
      g = {GroupType::II, {p, std::min(v, sibs[0]), std::max(v, sibs[0])}};
      ++gp.beta;
    } else {
      std::vector<std::size_t> three{v, sibs[0], sibs[1]};
      std::sort(three.begin(), three.end());
      g = {GroupType::III, three};
      ++gp.gamma;
    }
    for (std::size_t x : g.nodes) removed[x] = 1;
    created.push_back(std::move(g));
  }
  gp.groups.reserve(created.size() + 1);
  gp.groups.push_back(std::move(first));
  for (auto it = created.rbegin(); it != created.rend(); ++it) gp.groups.push_back(std::move(*it));
  return gp;
}

struct GroupStats {
  std::size_t alpha = 0;
  std::size_t beta = 0;
  std::size_t gamma = 0;
  std::size_t bound = 0;  // 2 + alpha + 2 beta + gamma
};

struct ThreeTreeCover {
  PathCover cover;
  GroupStats stats;
};

/// Called after the base cover and after every group insertion with the
/// group index (0 for g_1) and the cover of the graph built so far.
using GroupObserver = std::function<void(std::size_t group, const Graph& partial, const PathCover& cover)>;

namespace detail {

class ThreeTreeBuilder {
 public:
  explicit ThreeTreeBuilder(const StackingSequence& seq)
      : seq_(seq),
        tree_(stacking_tree(seq)),
        part_(group_partition(tree_)),
        graph_(stacked_graph(seq)),
        trails_(graph_),
        present_(seq.n(), 0) {}

  ThreeTreeCover run(const GroupObserver& observer) {
    const auto& g1 = part_.groups.front();
    if (g1.nodes.empty()) {
      base_k3();
    } else {
      base_k4(StackingTree::vertex(g1.nodes.front()));
    }
    if (observer) emit(0, observer);
    for (std::size_t i = 1; i < part_.groups.size(); ++i) {
      const auto& g = part_.groups[i];
      switch (g.type) {
        case GroupType::I: type_one(g.nodes[0], g.nodes[1]); break;
        case GroupType::II: type_two(g.nodes[0], g.nodes[1], g.nodes[2]); break;
        case GroupType::III: type_three(g.nodes); break;
        case GroupType::Exceptional: throw std::logic_error("exceptional group after g_1");
      }
      if (observer) emit(i, observer);
    }
    ThreeTreeCover out;
    out.stats = {part_.alpha, part_.beta, part_.gamma, 2 + part_.alpha + 2 * part_.beta + part_.gamma};
    out.cover = trails_.extract().cover;
    if (out.cover.size() != paths_ || paths_ != out.stats.bound)
      throw std::logic_error("path count differs from 2 + alpha + 2 beta + gamma");
    return out;
  }

 private:
  using Port = detail::Port;

  EdgeId edge(Vertex a, Vertex b) const {
    auto id = graph_.edge_id(a, b);
    if (!id) throw std::logic_error("cover step uses a non-edge");
    return *id;
  }

  void insert(std::initializer_list<Vertex> vs) {
    for (Vertex v : vs) present_[v] = 1;
  }

  /// Port of edge {a,b} at a.
  Port at(Vertex a, Vertex b) { return trails_.port_at(edge(a, b), a); }

  void chain(std::initializer_list<Vertex> path) {
    const Vertex* p = path.begin();
    for (std::size_t i = 1; i + 1 < path.size(); ++i) trails_.join(at(p[i], p[i - 1]), at(p[i], p[i + 1]));
  }

  /// Replaces edge {a,b} inside its path by the detour a-x-y-...-b.
  void substitute(Vertex a, Vertex b, std::initializer_list<Vertex> via) {
    const Port pa = at(a, b);
    const Port pb = at(b, a);
    const Port ma = trails_.cut(pa);
    const Port mb = trails_.cut(pb);
    std::vector<Vertex> seq{a};
    seq.insert(seq.end(), via.begin(), via.end());
    seq.push_back(b);
    for (std::size_t i = 1; i + 1 < seq.size(); ++i) trails_.join(at(seq[i], seq[i - 1]), at(seq[i], seq[i + 1]));
    if (ma != detail::kNoPort) trails_.join(ma, at(a, seq[1]));
    if (mb != detail::kNoPort) trails_.join(mb, at(b, seq[seq.size() - 2]));
  }

  void base_k3() {
    insert({0, 1, 2});
    chain({0, 1, 2});
    chain({0, 2});
    paths_ = 2;
  }

  void base_k4(Vertex r) {
    insert({0, 1, 2, r});
    chain({1, 0, r, 2});
    chain({0, 2, 1, r});
    paths_ = 2;
  }

  /// The two vertices of `f` other than `x`.
  static std::pair<Vertex, Vertex> others(const Face& f, Vertex x) {
    Vertex o[2];
    std::size_t k = 0;
    for (Vertex y : f) {
      if (y != x) o[k++] = y;
    }
    if (k != 2) throw std::logic_error("face does not contain the stacked parent");
    return {o[0], o[1]};
  }

  /// Inserts parent u and its child v; returns the end of the new path P_I
  /// that is not v (the vertex z of u's face missing from v's face).
  Vertex type_one(std::size_t un, std::size_t vn) {
    const Vertex u = StackingTree::vertex(un);
    const Vertex v = StackingTree::vertex(vn);
    const Face& fu = tree_.face_of[un];
    auto [x, y] = others(tree_.face_of[vn], u);
    Vertex z = kNoVertex;
    for (Vertex c : fu) {
      if (c != x && c != y) z = c;
    }
    // e is the smaller of {x,z}, {y,z}; w1 is its endpoint shared with v's face.
    const Edge ex(x, z);
    const Edge ey(y, z);
    const Vertex w1 = ex < ey ? x : y;
    const Vertex w1p = ex < ey ? y : x;
    insert({u, v});
    substitute(w1, z, {v, u});
    chain({z, w1, u, w1p, v});
    w1_of_pi_ = w1;
    paths_ += 1;
    return z;
  }

  void type_two(std::size_t un, std::size_t vn, std::size_t wn) {
    const Vertex u = StackingTree::vertex(un);
    const Vertex w = StackingTree::vertex(wn);
    const Vertex z = type_one(un, vn);
    insert({w});
    // w's face is {u, z, r}: extend P_I at its end z, then cover u-w-r.
    const Face& fw = tree_.face_of[wn];
    Vertex r = kNoVertex;
    for (Vertex c : fw) {
      if (c != u && c != z) r = c;
    }
    if (r == kNoVertex || std::find(fw.begin(), fw.end(), z) == fw.end())
      throw std::logic_error("type II sibling face misses z");
    const Port pz = at(z, w1_of_pi_);
    if (!trails_.is_free(pz)) throw std::logic_error("P_I does not end at z");
    trails_.join(pz, at(z, w));
    chain({u, w, r});
    paths_ += 1;
  }

  void type_three(const std::vector<std::size_t>& nodes) {
    const std::size_t qn = tree_.parent[nodes[0]];
    const Vertex q = StackingTree::vertex(qn);
    // Some path ends at q (q has degree 3); take the free port with the
    // smallest neighbor.
    Vertex r = kNoVertex;
    auto [lo, hi] = graph_.incident(q);
    for (auto it = lo; it != hi; ++it) {
      if (!present_[it->neighbor]) continue;
      if (trails_.is_free(trails_.port_at(it->edge, q))) {
        r = it->neighbor;
        break;
      }
    }
    if (r == kNoVertex) throw std::logic_error("no path ends at the type III parent");
    auto [r1, r2] = others(tree_.face_of[qn], r);
    Vertex u = kNoVertex, v = kNoVertex, w = kNoVertex;
    for (std::size_t c : nodes) {
      const Face& f = tree_.face_of[c];
      const bool has_r = std::find(f.begin(), f.end(), r) != f.end();
      const bool has_r1 = std::find(f.begin(), f.end(), r1) != f.end();
      const Vertex cv = StackingTree::vertex(c);
      if (!has_r) {
        w = cv;
      } else if (has_r1) {
        u = cv;
      } else {
        v = cv;
      }
    }
    insert({u, v, w});
    // The path ...-r-q becomes ...-r-u-q-w.
    const Port rq_at_r = at(r, q);
    const Port m = trails_.cut(rq_at_r);
    if (m != detail::kNoPort) trails_.join(m, at(r, u));
    trails_.join(at(u, r), at(u, q));
    trails_.join(at(q, u), at(q, w));
    substitute(r2, q, {v});
    chain({u, r1, w, r2, q, r, v});
    paths_ += 1;
  }

  void emit(std::size_t idx, const GroupObserver& observer) {
    // Edges at absent vertices are untouched single-edge trails; drop them.
    std::vector<Edge> edges;
    for (const auto& e : graph_.edges()) {
      if (present_[e.u] && present_[e.v]) edges.push_back(e);
    }
    Graph partial(seq_.n(), std::move(edges));
    PathCover pc;
    for (auto& p : trails_.extract().cover.paths) {
      if (present_[p.front()] && present_[p.back()]) pc.paths.push_back(std::move(p));
    }
    observer(idx, partial, pc);
  }

  const StackingSequence& seq_;
  StackingTree tree_;
  GroupPartition part_;
  Graph graph_;
  detail::TrailSet trails_;
  std::vector<char> present_;
  std::size_t paths_ = 0;
  Vertex w1_of_pi_ = kNoVertex;
};

}  // namespace detail

/// Path cover of a planar 3-tree of size exactly 2 + alpha + 2 beta + gamma.
inline ThreeTreeCover cover_3tree(const StackingSequence& seq, const GroupObserver& observer = {}) {
  detail::ThreeTreeBuilder builder(seq);
  return builder.run(observer);
}

struct BoundReport {
  std::size_t n = 0;
  std::size_t alpha = 0;
  std::size_t beta = 0;
  std::size_t gamma = 0;
  std::size_t constructive_bound = 0;
  bool constructive_regime = false;  // beta <= n/4 - 1
  std::size_t n_odd = 0;
  std::size_t n_even = 0;
  std::size_t dean_kouider_bound = 0;  // n_odd/2 + floor(2 n_even / 3), reported only
  std::size_t leaf_count = 0;
  bool leaf_witness = false;  // n_odd >= beta + 1
  std::size_t five_eighths = 0;
};

inline BoundReport bound_report(const StackingSequence& seq) {
  BoundReport r;
  r.n = seq.n();
  auto tree = stacking_tree(seq);
  auto gp = group_partition(tree);
  auto prof = degree_profile(build_graph(seq));
  r.alpha = gp.alpha;
  r.beta = gp.beta;
  r.gamma = gp.gamma;
  r.constructive_bound = 2 + gp.alpha + 2 * gp.beta + gp.gamma;
  r.constructive_regime = 4 * r.beta + 4 <= r.n;
  r.n_odd = prof.n_odd;
  r.n_even = prof.n_even;
  r.dean_kouider_bound = prof.n_odd / 2 + (2 * prof.n_even) / 3;
  r.leaf_count = tree.leaf_count();
  r.leaf_witness = r.n_odd >= r.beta + 1;
  r.five_eighths = (5 * r.n) / 8;
  return r;
}

}  // namespace gallai
