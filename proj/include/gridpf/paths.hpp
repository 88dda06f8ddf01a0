#pragma once

#include <map>
#include <utility>
#include <vector>

#include "gridpf/network.hpp"

namespace gridpf {

// Unique qualifying paths between (PQ, PV) bus pairs under a specific
// assignment snapshot. A path qualifies when its interior buses are all PQ,
// it is simple, and it spans at most max_hops edges. A pair is stored iff
// exactly one qualifying path exists.
struct PathCatalog {
    // key: (pq bus, pv bus), internal indices; value: bus sequence pq..pv.
    std::map<std::pair<int, int>, std::vector<int>> pairs;
};

PathCatalog build_path_catalog(const Topology& topo,
                               const BusTypeAssignment& a, int max_hops);

// Enumerates simple u->v paths with all-PQ interior up to max_hops edges,
// stopping once `limit` paths are found (0 = no limit). Depth-first order
// over sorted neighbor lists.
std::vector<std::vector<int>> enumerate_pq_paths(const Topology& topo,
                                                 const BusTypeAssignment& a,
                                                 int u, int v, int max_hops,
                                                 int limit);

}  // namespace gridpf
