#include "gridpf/paths.hpp"

namespace gridpf {

namespace {

// Depth-first enumeration of simple u->v paths whose interior vertices are
// all PQ under the snapshot. Neighbor lists are sorted, so paths come out in
// lexicographic order per depth; the caller caps the count via `limit`.
struct Dfs {
    const Topology& topo;
    const BusTypeAssignment& a;
    int target;
    int max_hops;
    int limit;
    std::vector<std::vector<int>>& found;
    std::vector<int> stack;
    std::vector<uint8_t> on_stack;

    bool run(int u) {
        stack.push_back(u);
        on_stack[u] = 1;
        bool full = descend(u);
        on_stack[u] = 0;
        stack.pop_back();
        return full;
    }

    bool descend(int u) {
        // invariant on entry: used_edges <= max_hops - 1, so taking the
        // target edge is always within budget
        const int used_edges = static_cast<int>(stack.size()) - 1;
        for (int nb : topo.adjacency[u]) {
            if (on_stack[nb]) continue;
            if (nb == target) {
                std::vector<int> path = stack;
                path.push_back(nb);
                found.push_back(std::move(path));
                if (limit > 0 && static_cast<int>(found.size()) >= limit)
                    return true;
                continue;
            }
            if (a.types[nb] != BusType::PQ) continue;  // interior must be PQ
            if (used_edges + 1 >= max_hops) continue;  // no room to reach target
            stack.push_back(nb);
            on_stack[nb] = 1;
            bool full = descend(nb);
            on_stack[nb] = 0;
            stack.pop_back();
            if (full) return true;
        }
        return false;
    }
};

}  // namespace

std::vector<std::vector<int>> enumerate_pq_paths(const Topology& topo,
                                                 const BusTypeAssignment& a,
                                                 int u, int v, int max_hops,
                                                 int limit) {
    std::vector<std::vector<int>> found;
    if (u == v || max_hops < 1) return found;
    Dfs dfs{topo, a, v, max_hops, limit, found, {}, {}};
    dfs.on_stack.assign(topo.adjacency.size(), 0);
    dfs.run(u);
    return found;
}

PathCatalog build_path_catalog(const Topology& topo,
                               const BusTypeAssignment& a, int max_hops) {
    PathCatalog cat;
    const int n = a.n();
    std::vector<int> pq, pv;
    for (int k = 0; k < n; ++k) {
        if (a.types[k] == BusType::PQ) pq.push_back(k);
        if (a.types[k] == BusType::PV) pv.push_back(k);
    }
    for (int u : pq) {
        for (int v : pv) {
            auto paths = enumerate_pq_paths(topo, a, u, v, max_hops, 2);
            if (paths.size() == 1)
                cat.pairs.emplace(std::make_pair(u, v), std::move(paths[0]));
        }
    }
    return cat;
}

}  // namespace gridpf
