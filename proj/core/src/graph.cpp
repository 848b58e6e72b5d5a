#include "fraglab/graph.hpp"

#include <algorithm>
#include <limits>

namespace fraglab {

std::vector<Tuple> GaifmanGraph::edges() const {
    std::vector<Tuple> out;
    for (Element a = 0; a < n; ++a)
        for (auto b : adj[a])
            if (a < b) out.emplace_back(a, b);
    return out;
}

std::size_t GaifmanGraph::edge_count() const {
    std::size_t c = 0;
    for (auto& v : adj) c += v.size();
    return c / 2;
}

GaifmanGraph gaifman(const Structure& m) {
    GaifmanGraph g;
    g.n = m.size();
    g.adj.resize(g.n);
    for (std::size_t r = 0; r < m.binary_names().size(); ++r)
        for (Element a = 0; a < g.n; ++a)
            for (auto b : m.successors(r, a)) {
                if (a == b) continue;
                g.adj[a].push_back(b);
                g.adj[b].push_back(a);
            }
    for (auto& v : g.adj) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return g;
}

std::optional<std::size_t> girth(const GaifmanGraph& g) {
    constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
    std::size_t best = inf;
    std::vector<std::size_t> dist(g.n, inf);
    std::vector<Element> parent(g.n), queue, touched;
    queue.reserve(g.n);
    for (Element root = 0; root < g.n; ++root) {
        queue.clear();
        queue.push_back(root);
        dist[root] = 0;
        parent[root] = root;
        touched.assign(1, root);
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            Element u = queue[qi];
            // anything found from depth d has length at least 2d
            if (best != inf && 2 * dist[u] >= best) break;
            for (auto w : g.adj[u]) {
                if (dist[w] == inf) {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                    touched.push_back(w);
                } else if (parent[u] != w) {
                    best = std::min(best, dist[u] + dist[w] + 1);
                }
            }
        }
        for (auto t : touched) dist[t] = inf;
    }
    if (best == inf) return std::nullopt;
    return best;
}

std::optional<std::size_t> girth(const Structure& m) { return girth(gaifman(m)); }

bool connected(const GaifmanGraph& g) {
    if (g.n == 0) return true;
    std::vector<char> seen(g.n, 0);
    std::vector<Element> st{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!st.empty()) {
        auto u = st.back();
        st.pop_back();
        for (auto w : g.adj[u])
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                st.push_back(w);
            }
    }
    return count == g.n;
}

}  // namespace fraglab
