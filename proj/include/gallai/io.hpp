#pragma once

#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "gallai/apollonian.hpp"
#include "gallai/graph.hpp"

namespace gallai {

class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace io {

using nlohmann::json;

/// {"n": int, "edges": [[u,v],...], "terminals": [s,t]}; terminals optional.
inline json graph_to_json(const Graph& g) {
  json j;
  j["n"] = g.n();
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  if (g.terminals()) j["terminals"] = {g.terminals()->source, g.terminals()->sink};
  return j;
}

inline Graph graph_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
      throw FormatError("graph JSON needs \"n\" and \"edges\"");
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw FormatError("edge must be a pair [u,v]");
      edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
    }
    std::optional<Terminals> terms;
    if (j.contains("terminals") && !j["terminals"].is_null()) {
      const auto& t = j["terminals"];
      if (!t.is_array() || t.size() != 2) throw FormatError("terminals must be a pair [s,t]");
      terms = Terminals{t[0].get<Vertex>(), t[1].get<Vertex>()};
    }
    return Graph(n, std::move(edges), terms);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed graph JSON: ") + e.what());
  }
}

/// {"paths": [[v0,v1,...],...]}
inline json cover_to_json(const PathCover& pc) {
  json paths = json::array();
  for (const auto& p : pc.paths) paths.push_back(p);
  return json{{"paths", std::move(paths)}};
}

inline PathCover cover_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("paths")) throw FormatError("cover JSON needs \"paths\"");
    PathCover pc;
    for (const auto& p : j.at("paths")) pc.paths.push_back(p.get<Path>());
    return pc;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed cover JSON: ") + e.what());
  }
}

/// {"ops": [[v, [a,b,c]], ...]} over the initial triangle {0,1,2}.
inline json stacking_to_json(const StackingSequence& seq) {
  json ops = json::array();
  for (const auto& op : seq.ops) ops.push_back({op.v, {op.face[0], op.face[1], op.face[2]}});
  return json{{"ops", std::move(ops)}};
}

inline StackingSequence stacking_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("ops")) throw FormatError("stacking JSON needs \"ops\"");
    StackingSequence seq;
    for (const auto& op : j.at("ops")) {
      if (!op.is_array() || op.size() != 2 || !op[1].is_array() || op[1].size() != 3)
        throw FormatError("op must be [v, [a,b,c]]");
      seq.ops.push_back({op[0].get<Vertex>(), {op[1][0].get<Vertex>(), op[1][1].get<Vertex>(), op[1][2].get<Vertex>()}});
    }
    return seq;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed stacking JSON: ") + e.what());
  }
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse(text);
}

inline void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << j.dump() << '\n';
}

}  // namespace io
}  // namespace gallai
