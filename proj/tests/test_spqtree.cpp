#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "gallai/dot.hpp"
#include "gallai/generators.hpp"
#include "gallai/spqtree.hpp"

using namespace gallai;

namespace {

std::set<Edge> edge_set(const Graph& g) { return {g.edges().begin(), g.edges().end()}; }

/// Vertex sequence of an S-chain read off its Q-leaves in order.
std::vector<Vertex> series_order(const SpqTree& t) {
  std::vector<Vertex> seq;
  for (NodeId id : t.post_order()) {
    const auto& nd = t.node(id);
    if (nd.kind != NodeKind::Q) continue;
    if (seq.empty()) seq.push_back(nd.source);
    seq.push_back(nd.sink);
  }
  return seq;
}

}  // namespace

TEST(Recognize, SingleEdgeIsOneQNode) {
  auto t = recognize_and_build(Graph(2, {{0, 1}}, Terminals{0, 1}));
  ASSERT_EQ(t.post_order().size(), 1u);
  EXPECT_EQ(t.node(t.root()).kind, NodeKind::Q);
  EXPECT_EQ(t.source(), 0u);
  EXPECT_EQ(t.sink(), 1u);
}

TEST(Recognize, PathIsSOverTwoQ) {
  auto t = recognize_and_build(Graph(3, {{0, 1}, {1, 2}}, Terminals{0, 2}));
  const auto& r = t.node(t.root());
  ASSERT_EQ(r.kind, NodeKind::S);
  EXPECT_EQ(t.node(r.left).kind, NodeKind::Q);
  EXPECT_EQ(t.node(r.right).kind, NodeKind::Q);
  EXPECT_EQ(series_order(t), (std::vector<Vertex>{0, 1, 2}));
}

TEST(Recognize, TriangleIsPOverSAndQ) {
  auto t = normalize(recognize_and_build(Graph(3, {{0, 1}, {1, 2}, {0, 2}}, Terminals{0, 2}))).tree();
  const auto& r = t.node(t.root());
  ASSERT_EQ(r.kind, NodeKind::P);
  EXPECT_EQ(r.source, 0u);
  EXPECT_EQ(r.sink, 2u);
  const auto& s = t.node(r.left);
  ASSERT_EQ(s.kind, NodeKind::S);
  EXPECT_EQ(t.node(s.left).kind, NodeKind::Q);
  EXPECT_EQ(t.node(s.right).kind, NodeKind::Q);
  EXPECT_EQ(t.node(r.right).kind, NodeKind::Q);
}

TEST(Recognize, RejectsNonSeriesParallel) {
  Graph k4(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  EXPECT_THROW(recognize_and_build(k4), NotSeriesParallel);
  EXPECT_THROW(recognize_and_build(k4.with_terminals(Terminals{0, 3})), NotSeriesParallel);
  EXPECT_THROW(recognize_and_build(Graph(4, {{0, 1}, {2, 3}})), NotSeriesParallel);
  EXPECT_THROW(recognize_and_build(Graph(3, {})), NotSeriesParallel);
  // The star is a tree but not two-terminal series-parallel.
  EXPECT_THROW(recognize_and_build(Graph(4, {{0, 1}, {0, 2}, {0, 3}})), NotSeriesParallel);
}

TEST(Recognize, TerminalsMustBeTheReductionEnds) {
  // Path 0-1-2 with terminals (0,1) cannot be two-terminal SP.
  EXPECT_THROW(recognize_and_build(Graph(3, {{0, 1}, {1, 2}}, Terminals{0, 1})), NotSeriesParallel);
}

TEST(Recognize, WithoutTerminalsPicksThem) {
  auto t = recognize_and_build(Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}));
  EXPECT_EQ(edge_set(expand(t)), edge_set(Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}})));
}

TEST(Recognize, RoundTripsGeneratedGraphs) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 2 + seed % 80;
    Graph g = gen_sp_random(n, seed);
    auto t = recognize_and_build(g);
    EXPECT_EQ(t.source(), g.terminals()->source);
    EXPECT_EQ(t.sink(), g.terminals()->sink);
    Graph back = expand(t);
    EXPECT_EQ(edge_set(back), edge_set(g)) << "seed " << seed;
    EXPECT_EQ(t.q_count(), g.m());
  }
}

TEST(SpqTree, BuilderValidates) {
  SpqTree t;
  NodeId a = t.add_q(0, 1);
  NodeId b = t.add_q(1, 2);
  NodeId c = t.add_q(0, 2);
  EXPECT_THROW(t.add_s(a, c), std::invalid_argument);
  EXPECT_THROW(t.add_p(a, b), std::invalid_argument);
  NodeId q2 = t.add_q(0, 1);
  EXPECT_THROW(t.add_p(a, q2), MultiEdge);
  NodeId s = t.add_s(a, b);
  NodeId p = t.add_p(s, c);
  EXPECT_EQ(t.root(), p);
  EXPECT_THROW(t.add_q(3, 3), std::invalid_argument);
}

TEST(Expand, SmallTrees) {
  SpqTree q;
  q.add_q(0, 1);
  EXPECT_EQ(expand(q).m(), 1u);

  SpqTree s;
  NodeId a = s.add_q(0, 1);
  NodeId b = s.add_q(1, 2);
  s.add_s(a, b);
  Graph g = expand(s);
  EXPECT_EQ(g.m(), 2u);
  EXPECT_EQ(g.terminals(), (Terminals{0, 2}));
}

TEST(Expand, DuplicateEdgeIsMultiEdge) {
  // P(S(0-1-2), S(0-1-2)) would double both edges.
  SpqTree t;
  NodeId s1 = t.add_s(t.add_q(0, 1), t.add_q(1, 2));
  NodeId s2 = t.add_s(t.add_q(0, 1), t.add_q(1, 2));
  t.add_p(s1, s2);
  EXPECT_THROW(expand(t), MultiEdge);
}

TEST(Normalize, NormalizedTreeIsFixpoint) {
  SpqTree t;
  NodeId s = t.add_s(t.add_q(0, 1), t.add_q(1, 2));
  t.add_p(s, t.add_q(0, 2));
  ASSERT_TRUE(is_normalized(t));
  EXPECT_TRUE(same_shape(normalize(t).tree(), t));
}

TEST(Normalize, LeftLeaningSeriesChainBecomesRightLeaning) {
  SpqTree t;
  NodeId inner = t.add_s(t.add_q(0, 1), t.add_q(1, 2));
  t.add_s(inner, t.add_q(2, 3));
  ASSERT_FALSE(is_normalized(t));
  const auto norm = normalize(t);
  const SpqTree& n = norm;
  EXPECT_TRUE(is_normalized(n));
  const auto& r = n.node(n.root());
  ASSERT_EQ(r.kind, NodeKind::S);
  EXPECT_EQ(n.node(r.left).kind, NodeKind::Q);
  EXPECT_EQ(n.node(r.right).kind, NodeKind::S);
  EXPECT_EQ(series_order(n), series_order(t));
  EXPECT_EQ(series_order(n), (std::vector<Vertex>{0, 1, 2, 3}));
}

TEST(Normalize, QChildOfPGoesLast) {
  SpqTree t;
  NodeId q = t.add_q(0, 2);
  NodeId s = t.add_s(t.add_q(0, 1), t.add_q(1, 2));
  t.add_p(q, s);
  ASSERT_FALSE(is_normalized(t));
  const auto norm = normalize(t);
  const SpqTree& n = norm;
  const auto& r = n.node(n.root());
  EXPECT_EQ(n.node(r.left).kind, NodeKind::S);
  EXPECT_EQ(n.node(r.right).kind, NodeKind::Q);
}

TEST(Normalize, PropertiesOnRandomTrees) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Graph g = gen_sp_random(2 + seed % 120, seed);
    auto t = recognize_and_build(g);
    const auto norm = normalize(t);
  const SpqTree& n = norm;
    ASSERT_TRUE(is_normalized(n)) << "seed " << seed;
    EXPECT_EQ(edge_set(expand(n)), edge_set(g));
    EXPECT_EQ(n.source(), t.source());
    EXPECT_EQ(n.sink(), t.sink());
    EXPECT_TRUE(same_shape(normalize(n).tree(), n));
  }
}

TEST(Normalize, CheckedRejectsUnnormalized) {
  SpqTree t;
  NodeId inner = t.add_s(t.add_q(0, 1), t.add_q(1, 2));
  t.add_s(inner, t.add_q(2, 3));
  EXPECT_THROW(NormalizedSpqTree::checked(t), std::invalid_argument);
}

TEST(Normalize, DeepTreesDoNotRecurse) {
  // A long path and a long triangle chain give deep S-chains.
  std::vector<Edge> edges;
  const std::size_t n = 200000;
  for (Vertex i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  Graph path(n, edges, Terminals{0, static_cast<Vertex>(n - 1)});
  EXPECT_TRUE(is_normalized(normalize(recognize_and_build(path)).tree()));
  EXPECT_TRUE(is_normalized(normalize(recognize_and_build(gen_triangle_chain(100001))).tree()));
}

TEST(Dot, LabelsKindsAndTerminals) {
  SpqTree t;
  NodeId s = t.add_s(t.add_q(0, 1), t.add_q(1, 2));
  t.add_p(s, t.add_q(0, 2));
  const std::string dot = to_dot(t);
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("P (0,2)"), std::string::npos);
  EXPECT_NE(dot.find("S (0,2)"), std::string::npos);
  EXPECT_NE(dot.find("Q (1,2)"), std::string::npos);
}

TEST(PairTable, MatchesReferenceMapUnderChurn) {
  detail::PairTable table(64);
  std::map<std::uint64_t, std::uint32_t> ref;
  std::mt19937 rng(7);
  for (int step = 0; step < 20000; ++step) {
    const Vertex a = rng() % 12, b = rng() % 12;
    const auto k = detail::PairTable::key(a, b);
    EXPECT_EQ(k, detail::PairTable::key(b, a));
    if (ref.count(k)) {
      ASSERT_NE(table.find(k), nullptr);
      EXPECT_EQ(*table.find(k), ref[k]);
      if (rng() % 2) {
        table.erase(k);
        ref.erase(k);
        EXPECT_EQ(table.find(k), nullptr);
      }
    } else {
      ASSERT_EQ(table.find(k), nullptr);
      if (ref.size() < 64) {
        table.insert(k, static_cast<std::uint32_t>(step));
        ref[k] = static_cast<std::uint32_t>(step);
      }
    }
  }
  for (const auto& [k, v] : ref) EXPECT_EQ(*table.find(k), v);
}
