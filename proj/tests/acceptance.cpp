// Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gallai/gallai.hpp"

using namespace gallai;

namespace {

struct Check {
  std::size_t instances = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok && failures.size() == 5) failures.push_back("...");
  }
};

int report(int id, const std::string& title, const Check& c, const std::string& extra = "") {
  const bool pass = c.failures.empty() && c.instances > 0;
  std::printf("%s criterion %d: %s [%zu instances%s%s]\n", pass ? "PASS" : "FAIL", id, title.c_str(), c.instances,
              extra.empty() ? "" : "; ", extra.c_str());
  for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
  std::fflush(stdout);
  return pass ? 0 : 1;
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

double millis(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string tag(const std::string& family, std::size_t n, std::uint64_t seed) {
  return family + " n=" + std::to_string(n) + " seed=" + std::to_string(seed);
}

int criterion1() {
  Check c;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const std::size_t n = 2 + seed * 198 / 499;
    Graph g = gen_sp_random(n, seed);
    auto pc = sp_path_cover(g);
    c.expect(verify_cover(g, pc).valid, tag("sp", n, seed) + " invalid");
    c.expect(pc.size() <= ceil_div(n, 2), tag("sp", n, seed) + " over bound");
    ++c.instances;
  }
  for (std::size_t n = 3; n <= 41; n += 2) {
    Graph g = gen_triangle_chain(n);
    auto pc = sp_path_cover(g);
    c.expect(verify_cover(g, pc).valid, tag("chain", n, 0) + " invalid");
    c.expect(pc.size() <= ceil_div(n, 2), tag("chain", n, 0) + " over bound");
    ++c.instances;
  }
  return report(1, "series-parallel covers verify and have size <= ceil(n/2)", c);
}

int criterion2() {
  Check c;
  std::size_t oracle_calls = 0;
  auto compare = [&](const Graph& g, std::size_t size, std::size_t bound, const std::string& what) {
    auto o = min_path_cover(g);
    ++oracle_calls;
    c.expect(o.min_size <= size, what + ": oracle " + std::to_string(o.min_size) + " > " + std::to_string(size));
    c.expect(size <= bound, what + ": size over class bound");
    ++c.instances;
  };
  for (std::size_t n = 2; n <= 10; ++n) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Graph g = gen_sp_random(n, seed);
      if (g.m() > 14) continue;
      compare(g, sp_path_cover(g).size(), ceil_div(n, 2), tag("sp", n, seed));
    }
  }
  for (std::size_t n = 3; n <= 9; n += 2) {
    Graph g = gen_triangle_chain(n);
    if (g.m() <= 14) compare(g, sp_path_cover(g).size(), ceil_div(n, 2), tag("chain", n, 0));
  }
  for (auto kind : {ThreeTreeKind::Random, ThreeTreeKind::Serpentine, ThreeTreeKind::Full, ThreeTreeKind::AllTypeII}) {
    for (std::size_t n = 3; n <= 6; ++n) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        StackingSequence seq;
        try {
          seq = gen_3tree(kind, n, seed);
        } catch (const std::invalid_argument&) {
          continue;
        }
        Graph g = build_graph(seq);
        auto cov = cover_3tree(seq);
        compare(g, cov.cover.size(), cov.stats.bound, tag(std::string("3tree-") + std::string(kind_name(kind)), n, seed));
      }
    }
  }
  Graph tri(3, {{0, 1}, {1, 2}, {0, 2}});
  const auto tri_size = sp_path_cover(tri).size();
  const auto tri_min = min_path_cover(tri).min_size;
  c.expect(tri_size == 2 && tri_min == 2, "triangle: size " + std::to_string(tri_size) + ", oracle " + std::to_string(tri_min));
  return report(2, "oracle min <= algorithm size <= class bound for m <= 14; triangle exactly 2", c,
                std::to_string(oracle_calls) + " oracle runs");
}

int criterion3() {
  Check c;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 4 + seed * 296 / 199;
    auto seq = gen_3tree(ThreeTreeKind::Random, n, seed);
    Graph g = build_graph(seq);
    auto cov = cover_3tree(seq);
    auto gp = group_partition(stacking_tree(seq));
    c.expect(verify_cover(g, cov.cover).valid, tag("3tree-random", n, seed) + " invalid");
    c.expect(cov.cover.size() == 2 + gp.alpha + 2 * gp.beta + gp.gamma, tag("3tree-random", n, seed) + " size mismatch");
    ++c.instances;
  }
  return report(3, "planar 3-tree covers verify with size exactly 2 + alpha + 2 beta + gamma", c);
}

int criterion4() {
  Check c;
  for (std::size_t k = 1; k <= 30; ++k) {
    const std::size_t n = 3 * k + 1;
    auto seq = gen_3tree(ThreeTreeKind::Full, n, 0);
    auto cov = cover_3tree(seq);
    c.expect(verify_cover(build_graph(seq), cov.cover).valid, tag("3tree-full", n, 0) + " invalid");
    c.expect(cov.cover.size() <= ceil_div(n, 3), tag("3tree-full", n, 0) + " over ceil(n/3)");
    ++c.instances;
  }
  for (std::size_t n = 4; n <= 300; ++n) {
    auto seq = gen_3tree(ThreeTreeKind::Serpentine, n, n);
    auto cov = cover_3tree(seq);
    c.expect(verify_cover(build_graph(seq), cov.cover).valid, tag("3tree-serpentine", n, n) + " invalid");
    c.expect(cov.cover.size() <= ceil_div(n, 2), tag("3tree-serpentine", n, n) + " over ceil(n/2)");
    ++c.instances;
  }
  return report(4, "full 3-trees <= ceil(n/3); serpentine 3-trees <= ceil(n/2)", c);
}

int criterion5() {
  Check c;
  std::size_t constructive = 0, witnessed = 0;
  auto check = [&](const StackingSequence& seq, const std::string& what) {
    auto r = bound_report(seq);
    auto cov = cover_3tree(seq);
    if (r.constructive_regime) {
      ++constructive;
      c.expect(cov.cover.size() <= r.five_eighths, what + ": size over floor(5n/8)");
    } else {
      ++witnessed;
      c.expect(r.leaf_witness && 4 * r.n_odd > r.n, what + ": n_odd = " + std::to_string(r.n_odd) +
                                                        " does not exceed max(beta, n/4)");
    }
    ++c.instances;
  };
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 4 + seed * 296 / 199;
    check(gen_3tree(ThreeTreeKind::Random, n, seed), tag("3tree-random", n, seed));
  }
  for (std::size_t k = 1; k <= 30; ++k) check(gen_3tree(ThreeTreeKind::Full, 3 * k + 1, 0), tag("3tree-full", 3 * k + 1, 0));
  for (std::size_t n = 4; n <= 300; ++n) {
    check(gen_3tree(ThreeTreeKind::Serpentine, n, n), tag("3tree-serpentine", n, n));
    if (n % 3 != 2) check(gen_3tree(ThreeTreeKind::AllTypeII, n, n), tag("3tree-typeII", n, n));
  }
  return report(5, "size <= floor(5n/8) when beta <= n/4 - 1, else n_odd >= beta + 1 > n/4 (n >= 4)", c,
                std::to_string(constructive) + " constructive, " + std::to_string(witnessed) + " witnessed");
}

int criterion6() {
  Check c;
  std::size_t nodes_checked = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const std::size_t n = 2 + seed % 150;
    Graph g = gen_sp_random(n, seed);
    auto norm = normalize(recognize_and_build(g));
    c.expect(is_normalized(norm), tag("sp", n, seed) + " not normalized");
    typed_cover(norm, [&](const CompositionStep& s) {
      ++nodes_checked;
      c.expect(2 * static_cast<long>(s.paths) <=
                   budget_half_units(s.type, static_cast<long>(s.n)) + 2 * static_cast<long>(s.rho),
               tag("sp", n, seed) + " budget violated at node " + std::to_string(s.node));
    });
    ++c.instances;
  }
  for (auto kind : {ThreeTreeKind::Random, ThreeTreeKind::Full, ThreeTreeKind::Serpentine, ThreeTreeKind::AllTypeII}) {
    for (std::size_t n = 4; n <= 300; n += 3) {
      auto seq = gen_3tree(kind, n, n);
      auto t = stacking_tree(seq);
      auto cov = cover_3tree(seq);
      std::vector<char> endpoint(seq.n(), 0);
      for (const auto& p : cov.cover.paths) endpoint[p.front()] = endpoint[p.back()] = 1;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.child_count(i) == 0)
          c.expect(endpoint[StackingTree::vertex(i)], tag("3tree", n, n) + " leaf not an endpoint");
      }
      ++c.instances;
    }
  }
  return report(6, "normalization, per-node budget and endpoint-at-leaf invariants", c,
                std::to_string(nodes_checked) + " tree nodes budget-checked");
}

int criterion7() {
  Check c;
  std::string detail;
  // Repeats are interleaved across sizes so that a slow stretch of the
  // machine affects every size alike; each size keeps its fastest run.
  constexpr int kRepeats = 9;
  const std::size_t sizes[] = {1000, 10000, 100000};
  auto scaling = [&](const std::string& family, const std::function<std::function<void()>(std::size_t)>& make) {
    std::vector<std::function<void()>> tasks;
    for (std::size_t n : sizes) tasks.push_back(make(n));
    std::vector<double> best(tasks.size(), 1e300);
    for (int r = 0; r < kRepeats; ++r) {
      for (std::size_t i = 0; i < tasks.size(); ++i) best[i] = std::min(best[i], millis(tasks[i]));
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const std::size_t n = sizes[i];
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s%s n=%zu %.1fms", detail.empty() ? "" : ", ", family.c_str(), n, best[i]);
      detail += buf;
      if (n == 100000) c.expect(best[i] < 5000, family + " n=1e5 over 5 s");
      if (i > 0) {
        const double ratio = best[i] / best[i - 1];
        c.expect(ratio <= 15.0, family + " grew " + std::to_string(ratio) + "x at n=" + std::to_string(n));
      }
      ++c.instances;
    }
  };
  scaling("sp", [&](std::size_t n) {
    auto g = std::make_shared<Graph>(gen_sp_random(n, 1));
    return [&c, g, n] {
      auto pc = sp_path_cover(*g);
      c.expect(verify_cover(*g, pc).valid && pc.size() <= ceil_div(n, 2), "sp n=" + std::to_string(n) + " invalid");
    };
  });
  scaling("3tree", [&](std::size_t n) {
    auto seq = std::make_shared<StackingSequence>(gen_3tree(ThreeTreeKind::Random, n, 1));
    auto g = std::make_shared<Graph>(build_graph(*seq));
    return [&c, seq, g, n] {
      auto cov = cover_3tree(*seq);
      c.expect(verify_cover(*g, cov.cover).valid, "3tree n=" + std::to_string(n) + " invalid");
    };
  });
  return report(7, "n = 1e5 covered and verified in < 5 s; <= 15x growth per decade", c,
                "min of " + std::to_string(kRepeats) + ": " + detail);
}

}  // namespace

int main() {
  int failed = 0;
  failed += criterion1();
  failed += criterion2();
  failed += criterion3();
  failed += criterion4();
  failed += criterion5();
  failed += criterion6();
  failed += criterion7();
  std::printf("%d of 7 criteria passed\n", 7 - failed);
  return failed == 0 ? 0 : 1;
}
