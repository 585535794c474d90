#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gallai/apollonian.hpp"
#include "gallai/graph.hpp"
#include "gallai/spqtree.hpp"

namespace gallai {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// One PRNG stream per (family, size, seed).
inline std::mt19937_64 instance_rng(std::string_view family, std::uint64_t size, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : family) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  std::uint64_t s = splitmix64(h);
  s = splitmix64(s ^ size);
  s = splitmix64(s ^ seed);
  return std::mt19937_64(s);
}

template <class Rng>
std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace detail

/// Random two-terminal series-parallel graph on exactly n vertices. Grows an
/// SPQ-tree by subdividing edges, replacing an edge st by st || s-x-t, and
/// closing a subtree with its terminal edge; then relabels vertices randomly.
inline Graph gen_sp_random(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_sp_random needs n >= 2");
  auto rng = detail::instance_rng("sp", n, seed);

  struct Node {
    NodeKind kind;
    Vertex s, t;
    std::size_t left = 0, right = 0;
  };
  std::vector<Node> nodes{{NodeKind::Q, 0, 1}};
  std::vector<std::size_t> leaves{0};
  std::vector<std::size_t> inner;
  std::set<std::pair<Vertex, Vertex>> edges{{0, 1}};
  auto key = [](Vertex a, Vertex b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  Vertex next = 2;

  auto new_leaf = [&](Vertex s, Vertex t) {
    nodes.push_back({NodeKind::Q, s, t});
    leaves.push_back(nodes.size() - 1);
    edges.insert(key(s, t));
    return nodes.size() - 1;
  };

  while (next < n) {
    const double roll = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (roll < 0.2 && !inner.empty()) {
      const std::size_t id = inner[detail::pick(rng, inner.size())];
      const Vertex s = nodes[id].s, t = nodes[id].t;
      if (edges.count(key(s, t))) continue;
      nodes.push_back(nodes[id]);
      const std::size_t moved = nodes.size() - 1;
      inner.push_back(moved);
      const std::size_t q = new_leaf(s, t);
      nodes[id] = {NodeKind::P, s, t, moved, q};
      continue;
    }
    const std::size_t li = detail::pick(rng, leaves.size());
    const std::size_t id = leaves[li];
    const Vertex s = nodes[id].s, t = nodes[id].t;
    const Vertex x = next++;
    if (roll < 0.6) {
      // Subdivide: Q(s,t) -> S(Q(s,x), Q(x,t)).
      edges.erase(key(s, t));
      leaves[li] = leaves.back();
      leaves.pop_back();
      const std::size_t a = new_leaf(s, x);
      const std::size_t b = new_leaf(x, t);
      nodes[id] = {NodeKind::S, s, t, a, b};
      inner.push_back(id);
    } else {
      // Q(s,t) -> P(S(Q(s,x), Q(x,t)), Q(s,t)).
      const std::size_t a = new_leaf(s, x);
      const std::size_t b = new_leaf(x, t);
      nodes.push_back({NodeKind::S, s, t, a, b});
      const std::size_t ser = nodes.size() - 1;
      nodes.push_back({NodeKind::Q, s, t});
      const std::size_t q = nodes.size() - 1;
      leaves[li] = q;
      nodes[id] = {NodeKind::P, s, t, ser, q};
      inner.push_back(ser);
      inner.push_back(id);
    }
  }

  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& [a, b] : edges) out.emplace_back(perm[a], perm[b]);
  return Graph(n, std::move(out), Terminals{perm[0], perm[1]});
}

/// Triangles {2i, 2i+1, 2i+2} chained at shared vertices; terminals 0, n-1.
inline Graph gen_triangle_chain(std::size_t n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("triangle chain needs odd n >= 3");
  std::vector<Edge> edges;
  for (Vertex i = 0; 2 * i + 2 < n; ++i) {
    edges.emplace_back(2 * i, 2 * i + 1);
    edges.emplace_back(2 * i + 1, 2 * i + 2);
    edges.emplace_back(2 * i, 2 * i + 2);
  }
  return Graph(n, std::move(edges), Terminals{0, static_cast<Vertex>(n - 1)});
}

enum class ThreeTreeKind { Random, Full, Serpentine, AllTypeII };

inline std::string_view kind_name(ThreeTreeKind k) {
  switch (k) {
    case ThreeTreeKind::Random: return "random";
    case ThreeTreeKind::Full: return "full";
    case ThreeTreeKind::Serpentine: return "serpentine";
    case ThreeTreeKind::AllTypeII: return "all_type_II";
  }
  return "?";
}

/// Stacking sequence on n vertices. Full needs n = 3k+1; all_type_II needs
/// n = 0 or 1 mod 3 and n >= 4.
inline StackingSequence gen_3tree(ThreeTreeKind kind, std::size_t n, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("planar 3-tree needs n >= 3");
  if (n >= (std::size_t{1} << 21)) throw std::invalid_argument("planar 3-tree too large");
  auto rng = detail::instance_rng(std::string("3tree-") + std::string(kind_name(kind)), n, seed);
  StackingSequence seq;
  seq.ops.reserve(n - 3);
  Vertex next = 3;
  auto stack = [&](const Face& f) {
    seq.ops.push_back({next, f});
    const Vertex v = next++;
    return std::array<Face, 3>{sorted_face(v, f[0], f[1]), sorted_face(v, f[0], f[2]),
                               sorted_face(v, f[1], f[2])};
  };
  const Face outer{0, 1, 2};

  switch (kind) {
    case ThreeTreeKind::Random: {
      std::vector<Face> faces{outer};
      while (next < n) {
        const std::size_t i = detail::pick(rng, faces.size());
        const Face f = faces[i];
        faces[i] = faces.back();
        faces.pop_back();
        for (const auto& g : stack(f)) faces.push_back(g);
      }
      break;
    }
    case ThreeTreeKind::Full: {
      if (n % 3 != 1) throw std::invalid_argument("full planar 3-tree needs n = 3k+1");
      std::vector<Face> queue{outer};
      for (std::size_t head = 0; next < n; ++head) {
        // The root takes one op, every later node is expanded all at once.
        for (const auto& g : stack(queue[head])) queue.push_back(g);
      }
      break;
    }
    case ThreeTreeKind::Serpentine: {
      Face f = outer;
      while (next < n) {
        auto made = stack(f);
        f = made[detail::pick(rng, 3)];
      }
      break;
    }
    case ThreeTreeKind::AllTypeII: {
      if (n < 4 || n % 3 == 2) throw std::invalid_argument("all_type_II needs n >= 4 with n = 0 or 1 mod 3");
      auto faces = stack(outer);  // root
      // n = 0 mod 3: the root is the parent of the first pair. Otherwise a
      // chain node u hangs below the root (or below the previous pair).
      bool need_parent = n % 3 == 1;
      while (next < n) {
        if (need_parent) {
          faces = stack(faces[detail::pick(rng, 3)]);
        }
        need_parent = true;
        const std::size_t skip = detail::pick(rng, 3);
        std::array<Face, 3> chosen{};
        std::size_t c = 0;
        for (std::size_t i = 0; i < 3; ++i) {
          if (i != skip) chosen[c++] = faces[i];
        }
        auto left = stack(chosen[0]);
        stack(chosen[1]);
        faces = left;
      }
      break;
    }
  }
  return seq;
}

}  // namespace gallai
