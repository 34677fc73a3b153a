#pragma once

#include <string>
#include <vector>

#include "dlg/graph.hpp"

namespace dlg {

/// A vertex ordering that depends only on the graph's isomorphism
/// class: color refinement over labels and degrees, with exhaustive
/// individualization of remaining symmetric vertices.
std::vector<int> canonical_order(const Graph& g);

/// Single-line serialization with vertices renamed n0..nk along the
/// canonical order. Two graphs get the same key iff they are equal up
/// to label-preserving isomorphism.
std::string canonical_key(const Graph& g);

bool isomorphic(const Graph& a, const Graph& b);

} // namespace dlg
