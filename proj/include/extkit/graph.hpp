#pragma once

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "index_set.hpp"

namespace extkit {

/// Undirected simple graph. Vertices are 0-based internally; the file format is
/// 1-based. Edge k is the k-th pair of the input sequence, so EdgeSet indices are
/// positionally stable.
class Graph {
public:
    Graph() : n_(0) {}
    Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n), edges_(std::move(edges)) {
        adj_.assign(n_, {});
        inc_.assign(n_, {});
        for (size_t k = 0; k < edges_.size(); ++k) {
            auto& [u, v] = edges_[k];
            if (u > v) std::swap(u, v);
            if (u < 0 || v >= n_ || u == v)
                throw precondition_error("bad edge (" + std::to_string(u + 1) + "," +
                                         std::to_string(v + 1) + ")");
            for (size_t j = 0; j < k; ++j)
                if (edges_[j] == edges_[k]) throw precondition_error("duplicate edge");
            adj_[u].push_back(v);
            adj_[v].push_back(u);
            inc_[u].push_back((int)k);
            inc_[v].push_back((int)k);
        }
        for (auto& a : adj_) std::sort(a.begin(), a.end());
    }

    int vertex_count() const { return n_; }
    int edge_count() const { return (int)edges_.size(); }
    std::pair<int, int> edge(int k) const { return edges_[k]; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    int degree(int v) const { check_vertex(v); return (int)adj_[v].size(); }
    const std::vector<int>& neighbors(int v) const { check_vertex(v); return adj_[v]; }
    const std::vector<int>& incident_edges(int v) const { check_vertex(v); return inc_[v]; }

    int max_degree() const {
        int d = 0;
        for (int v = 0; v < n_; ++v) d = std::max(d, (int)adj_[v].size());
        return d;
    }
    int min_degree() const {
        int d = n_ ? (int)adj_[0].size() : 0;
        for (int v = 1; v < n_; ++v) d = std::min(d, (int)adj_[v].size());
        return d;
    }

    IndexSet closed_neighborhood(int v) const {
        check_vertex(v);
        IndexSet s(n_);
        s.add(v);
        for (int w : adj_[v]) s.add(w);
        return s;
    }

    /// Edge index of {u,v} if present.
    std::optional<int> edge_index(int u, int v) const {
        if (u > v) std::swap(u, v);
        for (int k : inc_[u])
            if (edges_[k] == std::make_pair(u, v)) return k;
        return std::nullopt;
    }
    bool adjacent(int u, int v) const { return edge_index(u, v).has_value(); }

    /// Subgraph induced by vertex set S, vertices renumbered by increasing index.
    /// old2new[v] is -1 for dropped vertices.
    Graph induced_subgraph(const IndexSet& s, std::vector<int>* old2new = nullptr) const {
        std::vector<int> map(n_, -1);
        int m = 0;
        for (int v = 0; v < n_; ++v)
            if (s.contains(v)) map[v] = m++;
        std::vector<std::pair<int, int>> es;
        for (auto [u, v] : edges_)
            if (map[u] >= 0 && map[v] >= 0) es.push_back({map[u], map[v]});
        if (old2new) *old2new = map;
        return Graph(m, std::move(es));
    }

    /// Partial graph (V, X) for an edge subset X.
    Graph partial_graph(const IndexSet& x) const {
        std::vector<std::pair<int, int>> es;
        for (int k = 0; k < edge_count(); ++k)
            if (x.contains(k)) es.push_back(edges_[k]);
        return Graph(n_, std::move(es));
    }

    /// V(X): vertices incident to edges in X.
    IndexSet vertices_of(const IndexSet& x) const {
        IndexSet s(n_);
        for (int k = 0; k < edge_count(); ++k)
            if (x.contains(k)) { s.add(edges_[k].first); s.add(edges_[k].second); }
        return s;
    }

    /// 2-coloring when bipartite, nothing otherwise.
    std::optional<std::vector<int>> is_bipartite() const {
        std::vector<int> color(n_, -1);
        std::vector<int> queue;
        for (int s = 0; s < n_; ++s) {
            if (color[s] != -1) continue;
            color[s] = 0;
            queue.assign(1, s);
            while (!queue.empty()) {
                int v = queue.back();
                queue.pop_back();
                for (int w : adj_[v]) {
                    if (color[w] == -1) {
                        color[w] = 1 - color[v];
                        queue.push_back(w);
                    } else if (color[w] == color[v]) {
                        return std::nullopt;
                    }
                }
            }
        }
        return color;
    }

    void serialize(std::ostream& os) const {
        os << n_ << ' ' << edge_count() << '\n';
        for (auto [u, v] : edges_) os << u + 1 << ' ' << v + 1 << '\n';
    }

private:
    void check_vertex(int v) const {
        if (v < 0 || v >= n_) throw precondition_error("vertex index out of range");
    }

    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<int>> inc_;
};

namespace detail {
inline bool data_line(const std::string& line) {
    for (char c : line) {
        if (c == '#') return false;
        if (!isspace((unsigned char)c)) return true;
    }
    return false;
}
} // namespace detail

/// Graph file: first non-comment line "n m", then m lines "u v" (1-based).
/// '#'-prefixed comment lines are ignored anywhere.
inline Graph parse_graph(std::istream& is) {
    std::string line;
    int lineno = 0, n = -1, m = -1;
    std::vector<std::pair<int, int>> edges;
    std::vector<bool> seen;
    while (std::getline(is, line)) {
        ++lineno;
        if (!detail::data_line(line)) continue;
        std::istringstream ss(line);
        if (n < 0) {
            if (!(ss >> n >> m) || n < 0 || m < 0)
                throw parse_error("expected header 'n m'", lineno);
            continue;
        }
        if ((int)edges.size() == m) throw parse_error("more edges than declared", lineno);
        int u, v;
        if (!(ss >> u >> v)) throw parse_error("expected edge 'u v'", lineno);
        if (u < 1 || u > n || v < 1 || v > n) throw parse_error("vertex index out of range", lineno);
        if (u == v) throw parse_error("self-loop", lineno);
        int a = std::min(u, v) - 1, b = std::max(u, v) - 1;
        if (seen.empty()) seen.assign((size_t)n * n, false);
        if (seen[(size_t)a * n + b]) throw parse_error("duplicate edge", lineno);
        seen[(size_t)a * n + b] = true;
        edges.push_back({a, b});
    }
    if (n < 0) throw parse_error("empty graph file");
    if ((int)edges.size() != m) throw parse_error("fewer edges than declared");
    return Graph(n, std::move(edges));
}

inline Graph parse_graph(const std::string& text) {
    std::istringstream ss(text);
    return parse_graph(ss);
}

/// Pre-solution file: "V k" followed by k vertex indices, or "E k" followed by
/// k lines "u v" naming existing edges. Returns the set and whether it is a
/// vertex set (true) or edge set (false).
inline std::pair<IndexSet, bool> parse_presolution(std::istream& is, const Graph& g) {
    std::string line;
    int lineno = 0;
    char kind = 0;
    int k = -1, got = 0;
    IndexSet set;
    while (std::getline(is, line)) {
        ++lineno;
        if (!detail::data_line(line)) continue;
        std::istringstream ss(line);
        if (!kind) {
            std::string tag;
            if (!(ss >> tag >> k) || (tag != "V" && tag != "E") || k < 0)
                throw parse_error("expected header 'V k' or 'E k'", lineno);
            kind = tag[0];
            set = IndexSet(kind == 'V' ? g.vertex_count() : g.edge_count());
            if (kind == 'V') {
                int v;
                while (ss >> v) {
                    if (v < 1 || v > g.vertex_count())
                        throw parse_error("vertex index out of range", lineno);
                    set.add(v - 1);
                    ++got;
                }
            }
            continue;
        }
        if (kind == 'V') {
            int v;
            while (ss >> v) {
                if (v < 1 || v > g.vertex_count())
                    throw parse_error("vertex index out of range", lineno);
                set.add(v - 1);
                ++got;
            }
        } else {
            int u, v;
            if (!(ss >> u >> v)) throw parse_error("expected edge 'u v'", lineno);
            if (u < 1 || u > g.vertex_count() || v < 1 || v > g.vertex_count())
                throw parse_error("vertex index out of range", lineno);
            auto idx = g.edge_index(u - 1, v - 1);
            if (!idx) throw parse_error("no such edge", lineno);
            set.add(*idx);
            ++got;
        }
    }
    if (!kind) throw parse_error("empty pre-solution file");
    if (got != k) throw parse_error("element count does not match header");
    return {set, kind == 'V'};
}

inline void serialize_presolution(std::ostream& os, const Graph& g, const IndexSet& set,
                                  bool vertex_set) {
    os << (vertex_set ? 'V' : 'E') << ' ' << set.count() << '\n';
    if (vertex_set) {
        for (int v : set.elements()) os << v + 1 << '\n';
    } else {
        for (int k : set.elements())
            os << g.edge(k).first + 1 << ' ' << g.edge(k).second + 1 << '\n';
    }
}

} // namespace extkit
