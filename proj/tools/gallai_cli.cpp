// gallai: path covers of series-parallel graphs and planar 3-trees.
//
// Exit codes: 0 verified and within bound; 1 bad input (not series-parallel,
// invalid face, malformed file); 2 verification or bound failure; 3 oracle
// search budget exhausted.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gallai/gallai.hpp"

using namespace gallai;

namespace {

constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kFailure = 2;
constexpr int kBudget = 3;

const char* const kCsvHeader = "family,n,m,algorithm,size,bound,lower_bound,oracle,ms";

struct RunRecord {
  std::string family;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string algorithm;
  std::size_t size = 0;
  std::size_t bound = 0;
  std::size_t lower_bound = 0;
  std::optional<std::size_t> oracle;
  double ms = 0;

  std::string csv() const {
    char ms_buf[32];
    std::snprintf(ms_buf, sizeof ms_buf, "%.3f", ms);
    std::ostringstream out;
    out << family << ',' << n << ',' << m << ',' << algorithm << ',' << size << ',' << bound << ','
        << lower_bound << ',' << (oracle ? std::to_string(*oracle) : "") << ',' << ms_buf;
    return out.str();
  }
};

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

double millis_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GALLAI_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring non-numeric GALLAI_SEED\n";
    }
  }
  return 1;
}

const std::vector<std::string> kFamilies{"sp", "chain", "3tree-random", "3tree-full", "3tree-serpentine",
                                         "3tree-typeII"};

ThreeTreeKind kind_of(const std::string& f) {
  if (f == "3tree-full") return ThreeTreeKind::Full;
  if (f == "3tree-serpentine") return ThreeTreeKind::Serpentine;
  if (f == "3tree-typeII") return ThreeTreeKind::AllTypeII;
  return ThreeTreeKind::Random;
}

/// One generated instance: a graph, or a stacking sequence plus its graph.
struct Instance {
  std::string family;
  Graph graph;
  std::optional<StackingSequence> seq;
};

Instance generate(const std::string& family, std::size_t n, std::uint64_t seed) {
  if (family == "sp") return {family, gen_sp_random(n, seed), std::nullopt};
  if (family == "chain") return {family, gen_triangle_chain(n), std::nullopt};
  auto seq = gen_3tree(kind_of(family), n, seed);
  Graph g = build_graph(seq);
  return {family, std::move(g), std::move(seq)};
}

/// Nearest size not above n that the family accepts (at least its minimum).
std::size_t admissible_size(const std::string& family, std::size_t n) {
  if (family == "sp") return std::max<std::size_t>(n, 2);
  if (family == "chain") {
    n = std::max<std::size_t>(n, 3);
    return n % 2 ? n : n - 1;
  }
  if (family == "3tree-full") {
    n = std::max<std::size_t>(n, 4);
    return n - (n + 2) % 3;
  }
  if (family == "3tree-typeII") {
    n = std::max<std::size_t>(n, 4);
    return n % 3 == 2 ? n - 1 : n;
  }
  return std::max<std::size_t>(n, 3);
}

struct Outcome {
  RunRecord record;
  PathCover cover;
  std::vector<std::string> failures;
};

/// Covers, verifies and checks bounds; the oracle runs when m <= oracle_cap.
Outcome run_instance(const Instance& inst, std::size_t oracle_cap) {
  Outcome out;
  auto& rec = out.record;
  rec.family = inst.family;
  rec.n = inst.graph.n();
  rec.m = inst.graph.m();
  rec.lower_bound = inst.graph.m() ? endpoint_lower_bound(inst.graph) : 0;

  const auto t0 = std::chrono::steady_clock::now();
  std::optional<GroupStats> stats;
  if (inst.seq) {
    auto c = cover_3tree(*inst.seq);
    rec.ms = millis_since(t0);
    out.cover = std::move(c.cover);
    stats = c.stats;
    rec.algorithm = "3tree-cover";
    rec.bound = c.stats.bound;
    if (inst.family == "3tree-full") rec.bound = ceil_div(rec.n, 3);
    if (inst.family == "3tree-serpentine") rec.bound = ceil_div(rec.n, 2);
  } else {
    out.cover = sp_path_cover(inst.graph);
    rec.ms = millis_since(t0);
    rec.algorithm = "sp-cover";
    rec.bound = ceil_div(rec.n, 2);
  }
  rec.size = out.cover.size();

  auto rep = verify_cover(inst.graph, out.cover);
  if (!rep.valid) out.failures.push_back("invalid cover: " + rep.violation->message);
  if (rec.size > rec.bound)
    out.failures.push_back("size " + std::to_string(rec.size) + " exceeds bound " + std::to_string(rec.bound));
  if (rec.size < rec.lower_bound) out.failures.push_back("size below the endpoint lower bound");
  if (stats && rec.size != stats->bound) out.failures.push_back("size differs from 2 + alpha + 2 beta + gamma");
  if (inst.seq && rec.n >= 4) {
    auto br = bound_report(*inst.seq);
    if (br.constructive_regime && rec.size > br.five_eighths)
      out.failures.push_back("size exceeds floor(5n/8) in the constructive regime");
    if (!br.constructive_regime && !br.leaf_witness)
      out.failures.push_back("n_odd < beta + 1 outside the constructive regime");
  }
  if (oracle_cap > 0 && rec.m <= oracle_cap && rec.m > 0) {
    try {
      auto o = min_path_cover(inst.graph, {oracle_cap, OracleLimits{}.node_limit});
      rec.oracle = o.min_size;
      if (o.min_size > rec.size) out.failures.push_back("oracle minimum exceeds the algorithm's size");
    } catch (const BudgetExceeded& e) {
      out.failures.push_back(std::string("oracle: ") + e.what());
    }
  }
  return out;
}

/// Runs `count` tasks on `jobs` threads; results are indexed by task.
template <class Fn>
auto parallel_map(std::size_t count, unsigned jobs, Fn fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::optional<R>> results(count);
  std::vector<std::string> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = fn(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return std::make_pair(std::move(results), std::move(errors));
}

int cmd_cover(const std::string& input, const std::string& cls, const std::string& emit, const std::string& dot) {
  Instance inst;
  try {
    auto j = io::read_file(input);
    if (cls == "sp") {
      inst = {"sp", io::graph_from_json(j), std::nullopt};
      if (!dot.empty()) {
        std::ofstream out(dot);
        out << to_dot(normalize(recognize_and_build(inst.graph)).tree());
      }
    } else {
      auto seq = io::stacking_from_json(j);
      Graph g = build_graph(seq);
      inst = {"3tree", std::move(g), std::move(seq)};
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const NotSeriesParallel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }

  Outcome out;
  try {
    out = run_instance(inst, 0);
  } catch (const NotSeriesParallel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kFailure;
  }

  const auto cover_json = io::cover_to_json(out.cover);
  if (emit.empty()) {
    std::cout << cover_json.dump() << '\n';
    std::cerr << kCsvHeader << '\n' << out.record.csv() << '\n';
  } else {
    io::write_file(emit, cover_json);
    std::cout << kCsvHeader << '\n' << out.record.csv() << '\n';
  }
  for (const auto& f : out.failures) std::cerr << "FAIL: " << f << '\n';
  return out.failures.empty() ? kOk : kFailure;
}

int cmd_verify(const std::string& graph_file, const std::string& cover_file) {
  Graph g;
  PathCover pc;
  try {
    auto j = io::read_file(graph_file);
    g = j.contains("ops") ? build_graph(io::stacking_from_json(j)) : io::graph_from_json(j);
    pc = io::cover_from_json(io::read_file(cover_file));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  auto rep = verify_cover(g, pc);
  if (!rep.valid) {
    std::cout << "invalid: " << rep.violation->message << '\n';
    return kBadInput;
  }
  std::cout << "valid: " << rep.size << " paths\n";
  return kOk;
}

int cmd_gen(const std::string& family, std::size_t n, std::uint64_t seed, const std::string& output) {
  try {
    auto inst = generate(family, n, seed);
    const auto j = inst.seq ? io::stacking_to_json(*inst.seq) : io::graph_to_json(inst.graph);
    if (output.empty()) {
      std::cout << j.dump() << '\n';
    } else {
      io::write_file(output, j);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kOk;
}

int cmd_fuzz(const std::string& family, std::size_t count, std::size_t max_n, std::uint64_t seed,
             std::size_t oracle_cap, unsigned jobs) {
  const std::size_t lo = admissible_size(family, 0);
  if (max_n < lo) {
    std::cerr << "error: --max-n must be at least " << lo << " for family " << family << '\n';
    return kBadInput;
  }
  auto [results, errors] = parallel_map(count, jobs, [&](std::size_t i) {
    auto rng = detail::instance_rng("fuzz-" + family, i, seed);
    const std::size_t n = admissible_size(family, lo + detail::pick(rng, max_n - lo + 1));
    return run_instance(generate(family, n, rng()), oracle_cap);
  });
  std::cout << kCsvHeader << '\n';
  std::size_t violations = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (!results[i]) {
      ++violations;
      std::cerr << "instance " << i << ": exception: " << errors[i] << '\n';
      continue;
    }
    std::cout << results[i]->record.csv() << '\n';
    for (const auto& f : results[i]->failures) {
      ++violations;
      std::cerr << "instance " << i << " (n=" << results[i]->record.n << "): " << f << '\n';
    }
  }
  std::cerr << count << " instances, " << violations << " violations\n";
  return violations == 0 ? kOk : kFailure;
}

int cmd_bench(const std::string& family, const std::vector<std::size_t>& sizes, std::uint64_t seed,
              std::size_t repeats) {
  std::cout << kCsvHeader << '\n';
  int rc = kOk;
  for (std::size_t requested : sizes) {
    const std::size_t n = admissible_size(family, requested);
    Instance inst;
    try {
      inst = generate(family, n, seed);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kBadInput;
    }
    std::optional<Outcome> best;
    for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
      Outcome o = run_instance(inst, 0);
      if (!best || o.record.ms < best->record.ms) best = std::move(o);
    }
    std::cout << best->record.csv() << '\n';
    for (const auto& f : best->failures) {
      std::cerr << "n=" << n << ": " << f << '\n';
      rc = kFailure;
    }
  }
  return rc;
}

int cmd_oracle(const std::string& input, std::size_t cap, std::uint64_t node_limit) {
  Graph g;
  try {
    auto j = io::read_file(input);
    g = j.contains("ops") ? build_graph(io::stacking_from_json(j)) : io::graph_from_json(j);
    auto r = min_path_cover(g, {cap, node_limit});
    std::cout << "min_size " << r.min_size << "\nnodes " << r.nodes_explored << '\n'
              << io::cover_to_json(r.witness).dump() << '\n';
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path covers of series-parallel graphs and planar 3-trees"};
  app.require_subcommand(1);
  const std::uint64_t env_seed = default_seed();

  std::string input, cls = "sp", emit, dot;
  auto* cover = app.add_subcommand("cover", "Cover a graph (sp) or stacking sequence (3tree) and verify it");
  cover->add_option("input", input, "Input JSON file")->required();
  cover->add_option("--class", cls, "Input class")->check(CLI::IsMember({"sp", "3tree"}));
  cover->add_option("--emit", emit, "Write the cover JSON here instead of stdout");
  cover->add_option("--dot", dot, "Write the normalized SPQ-tree as DOT (sp only)");

  std::string graph_file, cover_file;
  auto* verify = app.add_subcommand("verify", "Check that a cover partitions the edges into paths");
  verify->add_option("graph", graph_file, "Graph or stacking JSON")->required();
  verify->add_option("cover", cover_file, "Cover JSON")->required();

  std::string family = "sp", output;
  std::size_t n = 10;
  std::uint64_t seed = env_seed;
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->add_option("--family", family)->check(CLI::IsMember(kFamilies));
  gen->add_option("-n,--n", n, "Vertex count");
  gen->add_option("--seed", seed);
  gen->add_option("-o,--output", output);

  std::size_t count = 100, max_n = 40, oracle_cap = 0;
  unsigned jobs = 1;
  auto* fuzz = app.add_subcommand("fuzz", "Cover, verify and bound-check generated instances; CSV on stdout");
  fuzz->add_option("--family", family)->check(CLI::IsMember(kFamilies));
  fuzz->add_option("--count", count);
  fuzz->add_option("--max-n", max_n);
  fuzz->add_option("--seed", seed);
  fuzz->add_option("--oracle-cap", oracle_cap, "Cross-check with the oracle when m <= cap (0 = off)");
  fuzz->add_option("--jobs", jobs);

  std::vector<std::size_t> sizes{1000, 10000, 100000};
  std::size_t repeats = 3;
  auto* bench = app.add_subcommand("bench", "Time the cover pipeline per size; CSV on stdout");
  bench->add_option("--family", family)->check(CLI::IsMember(kFamilies));
  bench->add_option("--sizes", sizes)->delimiter(',');
  bench->add_option("--seed", seed);
  bench->add_option("--repeats", repeats);

  std::size_t cap = 14;
  std::uint64_t node_limit = OracleLimits{}.node_limit;
  auto* oracle = app.add_subcommand("oracle", "Exact minimum path cover of a small graph");
  oracle->add_option("input", input)->required();
  oracle->add_option("--cap", cap, "Maximum edge count");
  oracle->add_option("--node-limit", node_limit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  if (cover->parsed()) return cmd_cover(input, cls, emit, dot);
  if (verify->parsed()) return cmd_verify(graph_file, cover_file);
  if (gen->parsed()) return cmd_gen(family, n, seed, output);
  if (fuzz->parsed()) return cmd_fuzz(family, count, max_n, seed, oracle_cap, jobs);
  if (bench->parsed()) return cmd_bench(family, sizes, seed, repeats);
  if (oracle->parsed()) return cmd_oracle(input, cap, node_limit);
  return kBadInput;
}
