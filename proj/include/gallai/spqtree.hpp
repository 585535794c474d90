#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gallai/graph.hpp"

namespace gallai {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

enum class NodeKind : std::uint8_t { Q, S, P };

inline char kind_char(NodeKind k) {
  switch (k) {
    case NodeKind::Q: return 'Q';
    case NodeKind::S: return 'S';
    case NodeKind::P: return 'P';
  }
  return '?';
}

class NotSeriesParallel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MultiEdge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Q-node stands for the edge source-sink. S-nodes identify the sink of the
/// left child with the source of the right child; P-nodes identify both
/// sources and both sinks.
struct SpqNode {
  NodeKind kind = NodeKind::Q;
  Vertex source = 0;
  Vertex sink = 0;
  NodeId left = kNoNode;
  NodeId right = kNoNode;
};

/// Ordered binary SPQ-tree stored in an arena.
class SpqTree {
 public:
  NodeId add_q(Vertex source, Vertex sink) {
    if (source == sink) throw std::invalid_argument("Q-node needs distinct endpoints");
    return push({NodeKind::Q, source, sink, kNoNode, kNoNode});
  }

  NodeId add_s(NodeId left, NodeId right) {
    check_ids(left, right);
    if (nodes_[left].sink != nodes_[right].source)
      throw std::invalid_argument("series composition: sink of left child must equal source of right child");
    if (nodes_[left].source == nodes_[right].sink)
      throw std::invalid_argument("series composition would close a cycle at the terminals");
    return push({NodeKind::S, nodes_[left].source, nodes_[right].sink, left, right});
  }

  NodeId add_p(NodeId left, NodeId right) {
    check_ids(left, right);
    if (nodes_[left].source != nodes_[right].source || nodes_[left].sink != nodes_[right].sink)
      throw std::invalid_argument("parallel composition needs identical terminals");
    if (nodes_[left].kind == NodeKind::Q && nodes_[right].kind == NodeKind::Q)
      throw MultiEdge("parallel composition of two Q-nodes (" + std::to_string(nodes_[left].source) +
                      "," + std::to_string(nodes_[left].sink) + ")");
    return push({NodeKind::P, nodes_[left].source, nodes_[left].sink, left, right});
  }

  void set_root(NodeId r) {
    if (r >= nodes_.size()) throw std::out_of_range("root id");
    root_ = r;
  }

  NodeId root() const { return root_; }
  bool empty() const { return root_ == kNoNode; }
  std::size_t size() const { return nodes_.size(); }
  const SpqNode& node(NodeId id) const { return nodes_[id]; }
  const std::vector<SpqNode>& nodes() const { return nodes_; }

  Vertex source() const { return nodes_.at(root_).source; }
  Vertex sink() const { return nodes_.at(root_).sink; }

  /// Nodes reachable from the root in post-order (children before parents).
  std::vector<NodeId> post_order() const {
    std::vector<NodeId> order;
    if (root_ == kNoNode) return order;
    order.reserve(nodes_.size());
    std::vector<std::pair<NodeId, bool>> stack{{root_, false}};
    while (!stack.empty()) {
      auto [id, expanded] = stack.back();
      stack.pop_back();
      const auto& nd = nodes_[id];
      if (expanded || nd.kind == NodeKind::Q) {
        order.push_back(id);
        continue;
      }
      stack.push_back({id, true});
      stack.push_back({nd.right, false});
      stack.push_back({nd.left, false});
    }
    return order;
  }

  std::size_t q_count() const {
    std::size_t c = 0;
    for (NodeId id : post_order()) c += nodes_[id].kind == NodeKind::Q;
    return c;
  }

 private:
  friend SpqTree relink(SpqTree, std::vector<SpqNode>, NodeId);

  void check_ids(NodeId a, NodeId b) const {
    if (a >= nodes_.size() || b >= nodes_.size()) throw std::out_of_range("child id");
    if (a == b) throw std::invalid_argument("a node cannot be both children");
  }

  NodeId push(SpqNode nd) {
    nodes_.push_back(nd);
    root_ = static_cast<NodeId>(nodes_.size() - 1);
    return root_;
  }

  std::vector<SpqNode> nodes_;
  NodeId root_ = kNoNode;
};

inline SpqTree relink(SpqTree t, std::vector<SpqNode> nodes, NodeId root) {
  t.nodes_ = std::move(nodes);
  t.root_ = root;
  return t;
}

/// Structural equality of the trees hanging from the two roots.
inline bool same_shape(const SpqTree& a, const SpqTree& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  std::vector<std::pair<NodeId, NodeId>> stack{{a.root(), b.root()}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    const auto& nx = a.node(x);
    const auto& ny = b.node(y);
    if (nx.kind != ny.kind || nx.source != ny.source || nx.sink != ny.sink) return false;
    if (nx.kind != NodeKind::Q) {
      stack.push_back({nx.left, ny.left});
      stack.push_back({nx.right, ny.right});
    }
  }
  return true;
}

/// The represented graph, with the root's source and sink as terminals.
inline Graph expand(const SpqTree& t) {
  if (t.empty()) throw std::invalid_argument("empty SPQ-tree");
  std::vector<Edge> edges;
  Vertex max_vertex = 0;
  for (NodeId id : t.post_order()) {
    const auto& nd = t.node(id);
    if (nd.kind != NodeKind::Q) continue;
    edges.emplace_back(nd.source, nd.sink);
    max_vertex = std::max({max_vertex, nd.source, nd.sink});
  }
  try {
    return Graph(static_cast<std::size_t>(max_vertex) + 1, std::move(edges),
                 Terminals{t.source(), t.sink()});
  } catch (const GraphError& e) {
    throw MultiEdge(std::string("represented graph is not simple: ") + e.what());
  }
}

namespace detail {

/// Series/parallel reduction on a multigraph whose edges carry partial trees.
/// Tree children carry a reversal flag so orientation fixes stay O(1); the
/// final tree is materialized top-down.
/// Open-addressing map from vertex pairs to multigraph edge ids. Linear
/// probing with backward-shift deletion keeps it tombstone-free.
class PairTable {
 public:
  explicit PairTable(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < 2 * expected) cap <<= 1;
    slots_.assign(cap, {kEmpty, 0});
    mask_ = cap - 1;
  }

  static std::uint64_t key(Vertex a, Vertex b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  std::uint32_t* find(std::uint64_t k) {
    for (std::size_t i = home(k);; i = (i + 1) & mask_) {
      if (slots_[i].first == k) return &slots_[i].second;
      if (slots_[i].first == kEmpty) return nullptr;
    }
  }

  void insert(std::uint64_t k, std::uint32_t value) {
    std::size_t i = home(k);
    while (slots_[i].first != kEmpty) i = (i + 1) & mask_;
    slots_[i] = {k, value};
  }

  void erase(std::uint64_t k) {
    std::size_t i = home(k);
    while (slots_[i].first != k) {
      if (slots_[i].first == kEmpty) return;
      i = (i + 1) & mask_;
    }
    // Pull later entries of the probe run back into the hole.
    for (std::size_t j = (i + 1) & mask_; slots_[j].first != kEmpty; j = (j + 1) & mask_) {
      const std::size_t h = home(slots_[j].first);
      if (((j - h) & mask_) >= ((j - i) & mask_)) {
        slots_[i] = slots_[j];
        i = j;
      }
    }
    slots_[i].first = kEmpty;
  }

 private:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  std::size_t home(std::uint64_t k) const {
    return static_cast<std::size_t>((k * 0x9e3779b97f4a7c15ULL) >> 20) & mask_;
  }

  std::vector<std::pair<std::uint64_t, std::uint32_t>> slots_;
  std::size_t mask_ = 0;
};

class SpReducer {
 public:
  explicit SpReducer(const Graph& g) : g_(g), head_(g.n(), kNil), degree_(g.n(), 0), lookup_(g.m()) {
    medges_.reserve(2 * g.m());
    next_.reserve(4 * g.m());
    raw_.reserve(3 * g.m());
  }

  SpqTree run(std::optional<Terminals> protect) {
    if (g_.m() == 0) throw NotSeriesParallel("graph has no edges");
    if (!is_connected(g_)) throw NotSeriesParallel("graph is disconnected");
    std::vector<char> is_protected(g_.n(), 0);
    if (protect) {
      is_protected[protect->source] = 1;
      is_protected[protect->sink] = 1;
    }
    for (const auto& e : g_.edges()) {
      NodeId q = static_cast<NodeId>(raw_.size());
      raw_.push_back({NodeKind::Q, e.u, e.v, {kNoNode, kNoNode}, {false, false}});
      add_edge(e.u, e.v, q);
    }
    std::deque<Vertex> queue;
    for (Vertex x = 0; x < g_.n(); ++x) {
      if (!is_protected[x] && degree_[x] == 2) queue.push_back(x);
    }
    while (!queue.empty()) {
      Vertex x = queue.front();
      queue.pop_front();
      if (is_protected[x] || degree_[x] != 2) continue;
      std::uint32_t live[2];
      std::size_t k = 0;
      for (std::uint32_t slot = head_[x]; k < 2; slot = next_[slot]) {
        if (medges_[slot >> 1].alive) live[k++] = slot >> 1;
      }
      head_[x] = kNil;
      const std::uint32_t ea = live[0], eb = live[1];
      const Vertex a = medges_[ea].src == x ? medges_[ea].dst : medges_[ea].src;
      const Vertex b = medges_[eb].src == x ? medges_[eb].dst : medges_[eb].src;
      kill(ea);
      kill(eb);
      // New edge oriented a -> b: left child a -> x, right child x -> b.
      const auto& la = medges_[ea];
      const auto& lb = medges_[eb];
      NodeId s = static_cast<NodeId>(raw_.size());
      raw_.push_back({NodeKind::S, a, b, {la.node, lb.node}, {la.src != a, lb.src != x}});
      add_edge(a, b, s);
      for (Vertex y : {a, b}) {
        if (!is_protected[y] && degree_[y] == 2) queue.push_back(y);
      }
    }
    if (alive_ != 1) {
      throw NotSeriesParallel(protect ? "graph is not two-terminal series-parallel for terminals (" +
                                            std::to_string(protect->source) + "," +
                                            std::to_string(protect->sink) + ")"
                                      : "graph is not two-terminal series-parallel");
    }
    std::size_t last = 0;
    while (!medges_[last].alive) ++last;
    const auto& fin = medges_[last];
    Vertex s = fin.src;
    Vertex t = fin.dst;
    if (protect) {
      s = protect->source;
      t = protect->sink;
      if (!((fin.src == s && fin.dst == t) || (fin.src == t && fin.dst == s)))
        throw NotSeriesParallel("reduction ended away from the terminals");
    }
    return materialize(fin.node, fin.src != s);
  }

 private:
  struct RawNode {
    NodeKind kind;
    Vertex src;
    Vertex dst;
    NodeId child[2];
    bool flip[2];
  };
  struct MEdge {
    NodeId node;
    Vertex src;
    Vertex dst;
    bool alive;
  };

  static constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();

  void kill(std::uint32_t e) {
    auto& me = medges_[e];
    me.alive = false;
    --degree_[me.src];
    --degree_[me.dst];
    lookup_.erase(PairTable::key(me.src, me.dst));
    --alive_;
  }

  void add_edge(Vertex a, Vertex b, NodeId node) {
    if (const std::uint32_t* found = lookup_.find(PairTable::key(a, b))) {
      auto& existing = medges_[*found];
      NodeId p = static_cast<NodeId>(raw_.size());
      raw_.push_back({NodeKind::P, existing.src, existing.dst, {node, existing.node},
                      {a != existing.src, false}});
      existing.node = p;
      return;
    }
    const auto id = static_cast<std::uint32_t>(medges_.size());
    medges_.push_back({node, a, b, true});
    lookup_.insert(PairTable::key(a, b), id);
    // Slot 2*id links the edge into a's list, 2*id+1 into b's.
    next_.push_back(head_[a]);
    next_.push_back(head_[b]);
    head_[a] = 2 * id;
    head_[b] = 2 * id + 1;
    ++degree_[a];
    ++degree_[b];
    ++alive_;
  }

  SpqTree materialize(NodeId root, bool root_flip) {
    std::vector<SpqNode> out(raw_.size());
    // Pre-order copy: out ids are assigned on first visit.
    NodeId next = 0;
    struct Item {
      NodeId raw;
      bool flip;
      NodeId slot;
    };
    std::vector<Item> stack{{root, root_flip, next++}};
    while (!stack.empty()) {
      Item it = stack.back();
      stack.pop_back();
      const RawNode& r = raw_[it.raw];
      SpqNode& o = out[it.slot];
      o.kind = r.kind;
      o.source = it.flip ? r.dst : r.src;
      o.sink = it.flip ? r.src : r.dst;
      if (r.kind == NodeKind::Q) continue;
      int first = (r.kind == NodeKind::S && it.flip) ? 1 : 0;
      NodeId l = next++;
      NodeId rr = next++;
      o.left = l;
      o.right = rr;
      stack.push_back({r.child[1 - first], it.flip != r.flip[1 - first], rr});
      stack.push_back({r.child[first], it.flip != r.flip[first], l});
    }
    out.resize(next);
    return relink(SpqTree{}, std::move(out), 0);
  }

  const Graph& g_;
  std::vector<std::uint32_t> head_;
  std::vector<std::uint32_t> next_;
  std::vector<std::uint32_t> degree_;
  PairTable lookup_;
  std::vector<MEdge> medges_;
  std::vector<RawNode> raw_;
  std::size_t alive_ = 0;
};

}  // namespace detail

/// Builds an SPQ-tree for `g` with its designated terminals. Without
/// terminals, the endpoints of the edge the graph reduces to are used.
inline SpqTree recognize_and_build(const Graph& g) {
  detail::SpReducer reducer(g);
  return reducer.run(g.terminals());
}

/// Normal form: no S-node has an S-node as left child, every P-node has an
/// S-node as left child.
inline bool is_normalized(const SpqTree& t) {
  for (NodeId id : t.post_order()) {
    const auto& nd = t.node(id);
    if (nd.kind == NodeKind::S && t.node(nd.left).kind == NodeKind::S) return false;
    if (nd.kind == NodeKind::P && t.node(nd.left).kind != NodeKind::S) return false;
  }
  return true;
}

/// An SpqTree known to satisfy is_normalized().
class NormalizedSpqTree {
 public:
  const SpqTree& tree() const { return tree_; }
  operator const SpqTree&() const& { return tree_; }  // NOLINT
  operator const SpqTree&() const&& = delete;

  /// Wraps an already normalized tree; throws if it is not.
  static NormalizedSpqTree checked(SpqTree t) {
    if (t.empty() || !is_normalized(t)) throw std::invalid_argument("tree is not normalized");
    return NormalizedSpqTree(std::move(t));
  }

 private:
  friend NormalizedSpqTree normalize(const SpqTree& t);
  explicit NormalizedSpqTree(SpqTree t) : tree_(std::move(t)) {}
  SpqTree tree_;
};

namespace detail {

/// Rebuilds every maximal component of `kind`-nodes as a right-leaning path.
/// The component's nodes are reused in in-order; the non-component children
/// are hung off the path in in-order, except that for P-components a Q child
/// goes last.
inline NodeId straighten_components(std::vector<SpqNode>& nodes, NodeId root, NodeKind kind) {
  // Parent links over the current shape.
  std::vector<NodeId> parent(nodes.size(), kNoNode);
  std::vector<NodeId> order;
  {
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      order.push_back(id);
      if (nodes[id].kind == NodeKind::Q) continue;
      parent[nodes[id].left] = id;
      parent[nodes[id].right] = id;
      stack.push_back(nodes[id].right);
      stack.push_back(nodes[id].left);
    }
  }
  NodeId new_root = root;
  std::vector<NodeId> members;
  std::vector<NodeId> kids;
  for (NodeId top : order) {
    if (nodes[top].kind != kind) continue;
    if (parent[top] != kNoNode && nodes[parent[top]].kind == kind) continue;
    // In-order walk restricted to the component.
    members.clear();
    kids.clear();
    std::vector<std::pair<NodeId, int>> stack{{top, 0}};
    while (!stack.empty()) {
      auto& [id, state] = stack.back();
      if (nodes[id].kind != kind) {
        kids.push_back(id);
        stack.pop_back();
        continue;
      }
      if (state == 0) {
        state = 1;
        stack.push_back({nodes[id].left, 0});
      } else {
        members.push_back(id);
        NodeId r = nodes[id].right;
        stack.pop_back();
        stack.push_back({r, 0});
      }
    }
    if (kind == NodeKind::P) {
      std::size_t q_children = 0;
      for (NodeId k : kids) q_children += nodes[k].kind == NodeKind::Q;
      if (q_children > 1) throw MultiEdge("P-component with more than one Q-node child");
      std::stable_partition(kids.begin(), kids.end(),
                            [&](NodeId k) { return nodes[k].kind != NodeKind::Q; });
    }
    const std::size_t l = members.size();
    for (std::size_t j = 0; j < l; ++j) {
      auto& nd = nodes[members[j]];
      nd.left = kids[j];
      nd.right = (j + 1 < l) ? members[j + 1] : kids[l];
    }
    // Terminals along the rebuilt path.
    for (std::size_t j = l; j-- > 0;) {
      auto& nd = nodes[members[j]];
      nd.source = nodes[nd.left].source;
      nd.sink = nodes[nd.right].sink;
    }
    NodeId head = members.front();
    NodeId up = parent[top];
    if (up == kNoNode) {
      new_root = head;
    } else if (nodes[up].left == top) {
      nodes[up].left = head;
    } else {
      nodes[up].right = head;
    }
  }
  return new_root;
}

}  // namespace detail

/// Reshapes S-components into right-leaning paths (series order kept), then
/// P-components likewise with any Q-node child attached last.
inline NormalizedSpqTree normalize(const SpqTree& t) {
  if (t.empty()) throw std::invalid_argument("empty SPQ-tree");
  std::vector<SpqNode> nodes = t.nodes();
  NodeId root = detail::straighten_components(nodes, t.root(), NodeKind::S);
  root = detail::straighten_components(nodes, root, NodeKind::P);
  return NormalizedSpqTree(relink(t, std::move(nodes), root));
}

/// Q-node edges in left-to-right order.
inline std::vector<Edge> leaf_edges(const SpqTree& t) {
  std::vector<Edge> out;
  for (NodeId id : t.post_order()) {
    const auto& nd = t.node(id);
    if (nd.kind == NodeKind::Q) out.emplace_back(nd.source, nd.sink);
  }
  return out;
}

}  // namespace gallai
