#pragma once

#include <set>
#include <string>
#include <vector>

#include "mmg/case.hpp"

namespace mmg
{

// Operations on the microgrid-level topology induced by the linking-line
// switch states.  Vertices are microgrid ids; an edge is present when its
// switch is closed.

// Partition of microgrid ids into connected components under the closed
// linking lines.  Component order is deterministic (by smallest member id).
std::vector<std::set<int>> connected_components(const NetworkCase &c, const SwitchConfig &sw);

// Linking lines with exactly one endpoint inside the vertex set
// (the cut induced by the set, irrespective of switch state).
std::vector<const LinkingLine *> cut_edges(const NetworkCase &c, const std::set<int> &vertex_set);

// Linking lines with both endpoints inside the vertex set.
std::vector<const LinkingLine *> internal_edges(const NetworkCase &c, const std::set<int> &vertex_set);

// True iff the closed edges with both ends inside the vertex set contain a
// spanning tree of it, i.e. the set is connected under the configuration.
// Singletons are trivially true.  Throws on unknown vertex ids.
bool spanning_tree_feasible(const NetworkCase &c, const SwitchConfig &sw,
                            const std::set<int> &vertex_set);

// True when closing exactly the given edges yields a spanning tree of the
// microgrid graph: connected and |edges| == |vertices| - 1.
bool is_spanning_tree(const NetworkCase &c, const SwitchConfig &sw);

} // namespace mmg
