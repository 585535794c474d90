#pragma once

#include <sstream>
#include <string>

#include "gallai/spqtree.hpp"

namespace gallai {

/// Graphviz rendering of an SPQ-tree; nodes are labelled with their kind and
/// terminals, edges to children are ordered left to right.
inline std::string to_dot(const SpqTree& t) {
  std::ostringstream out;
  out << "digraph spq {\n  node [shape=box];\n";
  for (NodeId id : t.post_order()) {
    const auto& nd = t.node(id);
    out << "  n" << id << " [label=\"" << kind_char(nd.kind) << " (" << nd.source << "," << nd.sink
        << ")\"];\n";
    if (nd.kind != NodeKind::Q) {
      out << "  n" << id << " -> n" << nd.left << " [label=\"L\"];\n";
      out << "  n" << id << " -> n" << nd.right << " [label=\"R\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace gallai
