#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "framework.hpp"
#include "graph.hpp"

namespace extkit {

struct TreeDecomposition {
    std::vector<std::vector<int>> bags; // sorted vertex lists
    std::vector<int> parent;            // -1 at the root

    int width() const {
        int w = 0;
        for (auto& b : bags) w = std::max(w, (int)b.size());
        return w - 1;
    }
};

/// Checks the three decomposition invariants against g.
inline bool valid_decomposition(const TreeDecomposition& td, const Graph& g) {
    int n = g.vertex_count(), nb = (int)td.bags.size();
    if ((int)td.parent.size() != nb) return false;
    int roots = 0;
    for (int i = 0; i < nb; ++i) {
        if (td.parent[i] == -1) ++roots;
        else if (td.parent[i] < 0 || td.parent[i] >= nb || td.parent[i] == i) return false;
        for (int v : td.bags[i])
            if (v < 0 || v >= n) return false;
    }
    if (nb > 0 && roots != 1) return false;
    std::vector<char> seen(n, 0);
    for (auto& b : td.bags)
        for (int v : b) seen[v] = 1;
    for (int v = 0; v < n; ++v)
        if (!seen[v]) return false;
    for (auto [u, v] : g.edges()) {
        bool shared = false;
        for (auto& b : td.bags)
            if (std::binary_search(b.begin(), b.end(), u) &&
                std::binary_search(b.begin(), b.end(), v)) { shared = true; break; }
        if (!shared) return false;
    }
    // per-vertex bags induce a connected subtree
    for (int v = 0; v < n; ++v) {
        std::vector<int> holders;
        for (int i = 0; i < nb; ++i)
            if (std::binary_search(td.bags[i].begin(), td.bags[i].end(), v)) holders.push_back(i);
        if (holders.empty()) return false;
        // walk up from each holder; all paths must merge inside the holder set
        std::vector<char> is_holder(nb, 0);
        for (int h : holders) is_holder[h] = 1;
        int top = holders[0];
        while (td.parent[top] != -1 && is_holder[td.parent[top]]) top = td.parent[top];
        for (int h : holders) {
            int cur = h;
            while (cur != top) {
                cur = td.parent[cur];
                if (cur == -1 || !is_holder[cur]) return false;
            }
        }
    }
    return true;
}

/// Greedy min-fill elimination with a custom order; validity, not optimality, is
/// the contract.
inline TreeDecomposition decomposition_from_order(const Graph& g, const std::vector<int>& order) {
    int n = g.vertex_count();
    TreeDecomposition td;
    if (n == 0) return td;
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    std::vector<int> bag_of(n);
    td.bags.resize(n);
    for (int step = 0; step < n; ++step) {
        int v = order[step];
        std::vector<int> live;
        for (int w = 0; w < n; ++w)
            if (adj[v][w] && pos[w] > step) live.push_back(w);
        std::vector<int> bag = live;
        bag.push_back(v);
        std::sort(bag.begin(), bag.end());
        td.bags[step] = bag;
        bag_of[v] = step;
        for (size_t i = 0; i < live.size(); ++i)
            for (size_t j = i + 1; j < live.size(); ++j)
                adj[live[i]][live[j]] = adj[live[j]][live[i]] = 1;
    }
    td.parent.assign(n, -1);
    for (int step = 0; step < n - 1; ++step) {
        int v = order[step];
        int first = -1;
        for (int w : td.bags[step])
            if (w != v && (first == -1 || pos[w] < pos[first])) first = w;
        td.parent[step] = first == -1 ? n - 1 : bag_of[first];
    }
    return td;
}

inline TreeDecomposition compute_tree_decomposition(const Graph& g) {
    int n = g.vertex_count();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
    std::vector<char> gone(n, 0);
    std::vector<int> order;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        long long best_fill = -1;
        int best_deg = -1;
        for (int v = 0; v < n; ++v) {
            if (gone[v]) continue;
            std::vector<int> live;
            for (int w = 0; w < n; ++w)
                if (!gone[w] && adj[v][w]) live.push_back(w);
            long long fill = 0;
            for (size_t i = 0; i < live.size(); ++i)
                for (size_t j = i + 1; j < live.size(); ++j)
                    if (!adj[live[i]][live[j]]) ++fill;
            if (best == -1 || fill < best_fill ||
                (fill == best_fill && (int)live.size() < best_deg)) {
                best = v;
                best_fill = fill;
                best_deg = (int)live.size();
            }
        }
        order.push_back(best);
        std::vector<int> live;
        for (int w = 0; w < n; ++w)
            if (!gone[w] && adj[best][w]) live.push_back(w);
        for (size_t i = 0; i < live.size(); ++i)
            for (size_t j = i + 1; j < live.size(); ++j)
                adj[live[i]][live[j]] = adj[live[j]][live[i]] = 1;
        gone[best] = 1;
    }
    return decomposition_from_order(g, order);
}

enum class NodeKind { Leaf, Introduce, Forget, Join };

struct NiceNode {
    NodeKind kind;
    int vertex = -1; // Leaf / Introduce / Forget
    std::vector<int> bag;
    int child1 = -1, child2 = -1;
};

/// Rooted nice decomposition; children precede parents in `nodes`, the root bag is
/// empty, every vertex is forgotten exactly once.
struct NiceTreeDecomposition {
    std::vector<NiceNode> nodes;
    int root = -1;
    int width = -1;
};

inline NiceTreeDecomposition to_nice(const TreeDecomposition& td_in, const Graph& g) {
    if (!valid_decomposition(td_in, g)) throw precondition_error("invalid tree decomposition");
    NiceTreeDecomposition out;
    out.width = td_in.width();
    if (g.vertex_count() == 0) return out;

    // contract empty bags (possible in externally supplied decompositions)
    TreeDecomposition td = td_in;
    bool contracted = true;
    while (contracted) {
        contracted = false;
        for (size_t i = 0; i < td.bags.size(); ++i) {
            if (!td.bags[i].empty() || td.parent[i] == -2) continue;
            int p = td.parent[i];
            if (p == -1) { // empty root: promote one child, reattach the rest to it
                int nr = -1;
                for (size_t j = 0; j < td.bags.size(); ++j)
                    if (td.parent[j] == (int)i) { nr = (int)j; break; }
                if (nr == -1) continue; // lone empty root over a nonempty graph: invalid
                td.parent[nr] = -1;
                p = nr;
            }
            for (size_t j = 0; j < td.bags.size(); ++j)
                if (td.parent[j] == (int)i) td.parent[j] = p;
            td.parent[i] = -2; // dropped
            contracted = true;
        }
    }

    int nb = (int)td.bags.size();
    std::vector<std::vector<int>> children(nb);
    int root_bag = -1;
    for (int i = 0; i < nb; ++i) {
        if (td.parent[i] == -2) continue;
        if (td.parent[i] == -1) root_bag = i;
        else children[td.parent[i]].push_back(i);
    }

    auto add_node = [&](NodeKind k, int v, std::vector<int> bag, int c1, int c2) {
        out.nodes.push_back(NiceNode{k, v, std::move(bag), c1, c2});
        return (int)out.nodes.size() - 1;
    };
    // adjust a nice subtree top with bag `from` into bag `to`: forgets then introduces
    auto adapt = [&](int node, std::vector<int> from, const std::vector<int>& to) {
        for (int v : from) {
            if (std::binary_search(to.begin(), to.end(), v)) continue;
            std::vector<int> nb2;
            for (int w : out.nodes[node].bag)
                if (w != v) nb2.push_back(w);
            node = add_node(NodeKind::Forget, v, nb2, node, -1);
        }
        for (int v : to) {
            if (std::binary_search(from.begin(), from.end(), v)) continue;
            std::vector<int> nb2 = out.nodes[node].bag;
            nb2.insert(std::lower_bound(nb2.begin(), nb2.end(), v), v);
            node = add_node(NodeKind::Introduce, v, nb2, node, -1);
        }
        return node;
    };
    auto fresh_chain = [&](const std::vector<int>& bag) {
        int node = add_node(NodeKind::Leaf, bag[0], {bag[0]}, -1, -1);
        for (size_t i = 1; i < bag.size(); ++i) {
            std::vector<int> nb2(bag.begin(), bag.begin() + i + 1);
            node = add_node(NodeKind::Introduce, bag[i], nb2, node, -1);
        }
        return node;
    };

    std::function<int(int)> build = [&](int t) -> int {
        std::vector<int> tops;
        for (int c : children[t]) tops.push_back(adapt(build(c), td.bags[c], td.bags[t]));
        if (tops.empty()) return fresh_chain(td.bags[t]);
        int node = tops[0];
        for (size_t i = 1; i < tops.size(); ++i)
            node = add_node(NodeKind::Join, -1, td.bags[t], node, tops[i]);
        return node;
    };

    int top = build(root_bag);
    out.root = adapt(top, td.bags[root_bag], {});
    return out;
}

/// Node count is O(width * n) for decompositions produced here; handy for tests.
inline int nice_node_count(const NiceTreeDecomposition& ntd) { return (int)ntd.nodes.size(); }

/// PACE-style layout: "td <bags> <max-bag-size> <n>" (or "s td ..."), bag lines
/// "b <id> v1 v2 ...", tree edge lines "t <i> <j>" (bare "i j" also accepted).
inline TreeDecomposition parse_tree_decomposition(std::istream& is, const Graph& g) {
    std::string line;
    int lineno = 0, nb = -1;
    std::vector<std::vector<int>> bags;
    std::vector<std::pair<int, int>> tree_edges;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line[0] == 'c') continue;
        std::istringstream ss(line);
        std::string tok;
        ss >> tok;
        if (nb < 0) {
            if (tok == "s") ss >> tok;
            if (tok != "td") throw parse_error("expected 'td' header", lineno);
            int mb = 0, n = 0;
            if (!(ss >> nb >> mb >> n) || nb < 0) throw parse_error("bad td header counts", lineno);
            if (n != g.vertex_count()) throw parse_error("vertex count does not match graph", lineno);
            bags.assign(nb, {});
            continue;
        }
        if (tok == "b") {
            int id, v;
            if (!(ss >> id) || id < 1 || id > nb) throw parse_error("bad bag id", lineno);
            while (ss >> v) {
                if (v < 1 || v > g.vertex_count()) throw parse_error("bag vertex out of range", lineno);
                bags[id - 1].push_back(v - 1);
            }
            std::sort(bags[id - 1].begin(), bags[id - 1].end());
        } else {
            int i, j;
            if (tok == "t") {
                if (!(ss >> i >> j)) throw parse_error("expected 't i j'", lineno);
            } else {
                i = std::stoi(tok);
                if (!(ss >> j)) throw parse_error("expected tree edge 'i j'", lineno);
            }
            if (i < 1 || i > nb || j < 1 || j > nb) throw parse_error("tree edge id out of range", lineno);
            tree_edges.push_back({i - 1, j - 1});
        }
    }
    if (nb < 0) throw parse_error("empty decomposition file");
    TreeDecomposition td;
    td.bags = bags;
    td.parent.assign(nb, -1);
    std::vector<std::vector<int>> nbrs(nb);
    for (auto [i, j] : tree_edges) {
        nbrs[i].push_back(j);
        nbrs[j].push_back(i);
    }
    std::vector<char> vis(nb, 0);
    std::vector<int> stack{0};
    if (nb > 0) vis[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : nbrs[v])
            if (!vis[w]) { vis[w] = 1; td.parent[w] = v; stack.push_back(w); }
    }
    for (int i = 0; i < nb; ++i)
        if (!vis[i]) throw parse_error("decomposition tree is disconnected");
    if (!valid_decomposition(td, g)) throw parse_error("not a valid tree decomposition of the graph");
    return td;
}

inline void serialize_tree_decomposition(std::ostream& os, const TreeDecomposition& td, int n) {
    os << "td " << td.bags.size() << ' ' << td.width() + 1 << ' ' << n << '\n';
    for (size_t i = 0; i < td.bags.size(); ++i) {
        os << "b " << i + 1;
        for (int v : td.bags[i]) os << ' ' << v + 1;
        os << '\n';
    }
    for (size_t i = 0; i < td.bags.size(); ++i)
        if (td.parent[i] != -1) os << "t " << i + 1 << ' ' << td.parent[i] + 1 << '\n';
}

/// Runtime instrumentation for the DP tables.
struct DpStats {
    std::size_t max_rows = 0;
    // Ext VC clean-up bound check: rows <= 2^|bag| after clean-up
    std::size_t vc_bound_violations = 0;
    std::size_t vc_worst_rows = 0;
    std::size_t vc_worst_bag = 0;
};

namespace twdetail {

using Row = std::vector<std::uint8_t>;

struct Prov {
    int c1 = -1, c2 = -1;
    std::uint64_t data = 0;
};

struct Table {
    std::vector<Row> rows;
    std::vector<Prov> provs;
    std::map<Row, int> index;

    void insert(const Row& r, const Prov& p) {
        if (index.emplace(r, (int)rows.size()).second) {
            rows.push_back(r);
            provs.push_back(p);
        }
    }
    void erase_rows(const std::vector<char>& dead) {
        std::vector<Row> nr;
        std::vector<Prov> np;
        index.clear();
        for (size_t i = 0; i < rows.size(); ++i) {
            if (dead[i]) continue;
            index.emplace(rows[i], (int)nr.size());
            nr.push_back(std::move(rows[i]));
            np.push_back(provs[i]);
        }
        rows.swap(nr);
        provs.swap(np);
    }
};

constexpr std::size_t kTableLimit = 4'000'000;

inline int bag_pos(const std::vector<int>& bag, int v) {
    return (int)(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
}

/// Pre-run structural pass: per forget node the pending neighbors (edges processed
/// there), plus the checks that every vertex is forgotten exactly once and every
/// edge processed exactly once — the mismatch errors for foreign decompositions.
struct Plan {
    std::vector<std::vector<int>> pending; // neighbor vertices, ascending, per node
    static Plan analyze(const Graph& g, const NiceTreeDecomposition& ntd) {
        Plan plan;
        plan.pending.resize(ntd.nodes.size());
        std::vector<int> forgotten(g.vertex_count(), 0);
        std::vector<int> processed(g.edge_count(), 0);
        for (size_t i = 0; i < ntd.nodes.size(); ++i) {
            const NiceNode& nd = ntd.nodes[i];
            if (nd.kind != NodeKind::Forget) continue;
            ++forgotten[nd.vertex];
            const std::vector<int>& child_bag = ntd.nodes[nd.child1].bag;
            for (int w : g.neighbors(nd.vertex)) {
                if (w == nd.vertex) continue;
                if (std::binary_search(child_bag.begin(), child_bag.end(), w) && !forgotten[w]) {
                    plan.pending[i].push_back(w);
                    ++processed[*g.edge_index(nd.vertex, w)];
                }
            }
        }
        for (int v = 0; v < g.vertex_count(); ++v)
            if (forgotten[v] != 1)
                throw precondition_error("decomposition does not match the graph (vertex coverage)");
        for (int k = 0; k < g.edge_count(); ++k)
            if (processed[k] != 1)
                throw precondition_error("decomposition does not match the graph (edge coverage)");
        return plan;
    }
};

struct ForgetCtx {
    int x;                              // vertex being forgotten
    int xi;                             // its position in the child bag
    const std::vector<int>& pending;    // neighbors whose edge to x is processed here
    const std::vector<int>& pend_pos;   // their positions in the child bag
};

struct IntroCtx {
    int v;                        // vertex being introduced
    int pos;                      // its position in the new bag
    std::vector<int> nbr_pos;     // its neighbors' positions in the new bag
};

/// Shared DP driver. The per-problem rules object supplies:
///   leaf_states(v) / introduce_states(v)   -> vector of (state, data)
///   expand_forget(row, ctx, emit(row', taken_mask)) — edge processing plus the
///     finalization of ctx.x; the emitted row no longer carries x's coordinate
///   join(a, b)                             -> optional<state> per vertex
///   cleanup(Table&)                        — problem-specific dominance deletion
///   instrument(node, table, stats)
template <class Rules>
std::pair<bool, std::vector<Table>> run_dp(const Graph& g, const NiceTreeDecomposition& ntd,
                                           Rules& rules, DpStats* stats) {
    Plan plan = Plan::analyze(g, ntd);
    std::vector<Table> tables(ntd.nodes.size());
    bool dead = false;
    for (size_t i = 0; i < ntd.nodes.size() && !dead; ++i) {
        const NiceNode& nd = ntd.nodes[i];
        Table& t = tables[i];
        switch (nd.kind) {
            case NodeKind::Leaf: {
                for (auto [s, data] : rules.leaf_states(nd.vertex))
                    t.insert(Row{s}, Prov{-1, -1, data});
                break;
            }
            case NodeKind::Introduce: {
                const Table& ct = tables[nd.child1];
                IntroCtx ctx{nd.vertex, bag_pos(nd.bag, nd.vertex), {}};
                for (int w : g.neighbors(nd.vertex))
                    if (std::binary_search(nd.bag.begin(), nd.bag.end(), w))
                        ctx.nbr_pos.push_back(bag_pos(nd.bag, w));
                for (size_t r = 0; r < ct.rows.size(); ++r) {
                    rules.expand_introduce(ct.rows[r], ctx,
                                           [&](Row&& row, std::uint64_t data) {
                                               t.insert(row, Prov{(int)r, -1, data});
                                           });
                }
                break;
            }
            case NodeKind::Forget: {
                const Table& ct = tables[nd.child1];
                const std::vector<int>& child_bag = ntd.nodes[nd.child1].bag;
                int xi = bag_pos(child_bag, nd.vertex);
                std::vector<int> pend_pos;
                for (int w : plan.pending[i]) pend_pos.push_back(bag_pos(child_bag, w));
                ForgetCtx ctx{nd.vertex, xi, plan.pending[i], pend_pos};
                for (size_t r = 0; r < ct.rows.size(); ++r) {
                    rules.expand_forget(ct.rows[r], ctx,
                                        [&](Row&& row, std::uint64_t taken) {
                                            t.insert(row, Prov{(int)r, -1, taken});
                                        });
                }
                break;
            }
            case NodeKind::Join: {
                const Table& t1 = tables[nd.child1];
                const Table& t2 = tables[nd.child2];
                size_t bag_size = nd.bag.size();
                for (size_t r1 = 0; r1 < t1.rows.size(); ++r1) {
                    for (size_t r2 = 0; r2 < t2.rows.size(); ++r2) {
                        Row row(bag_size);
                        bool ok = true;
                        for (size_t p = 0; p < bag_size && ok; ++p) {
                            auto s = rules.join(t1.rows[r1][p], t2.rows[r2][p]);
                            if (!s) ok = false;
                            else row[p] = *s;
                        }
                        if (ok) t.insert(row, Prov{(int)r1, (int)r2, 0});
                    }
                }
                break;
            }
        }
        rules.cleanup(t);
        if (stats) {
            stats->max_rows = std::max(stats->max_rows, t.rows.size());
            rules.instrument(nd, t, *stats);
        }
        if (t.rows.size() > kTableLimit) throw size_limit_error("treewidth table exploded");
        if (t.rows.empty()) dead = true;
    }
    return {!dead && !tables[ntd.root].rows.empty(), std::move(tables)};
}

/// Generic dominance clean-up: rows are grouped by a per-state class key and a row
/// is deleted when another row of the same key classes pointwise dominates it.
template <class ClassFn, class DomFn>
void dominance_cleanup(Table& t, ClassFn cls, DomFn dominates) {
    if (t.rows.size() < 2) return;
    std::map<Row, std::vector<int>> groups;
    for (size_t i = 0; i < t.rows.size(); ++i) {
        Row key(t.rows[i].size());
        for (size_t p = 0; p < t.rows[i].size(); ++p) key[p] = cls(t.rows[i][p]);
        groups[key].push_back((int)i);
    }
    std::vector<char> dead(t.rows.size(), 0);
    for (auto& [key, idxs] : groups) {
        for (size_t a = 0; a < idxs.size(); ++a) {
            if (dead[idxs[a]]) continue;
            for (size_t b = 0; b < idxs.size(); ++b) {
                if (a == b || dead[idxs[b]]) continue;
                const Row &ra = t.rows[idxs[a]], &rb = t.rows[idxs[b]];
                bool dom = true, strict = false;
                for (size_t p = 0; p < ra.size() && dom; ++p) {
                    if (ra[p] == rb[p]) continue;
                    if (dominates(ra[p], rb[p])) strict = true;
                    else dom = false;
                }
                if (dom && strict) dead[idxs[b]] = 1;
            }
        }
    }
    for (char d : dead)
        if (d) { t.erase_rows(dead); return; }
}

/// Collects witness decisions by walking the provenance DAG from the root row.
inline void walk_witness(const NiceTreeDecomposition& ntd, const std::vector<Table>& tables,
                         const Plan& plan,
                         const std::function<void(const NiceNode&, const Prov&,
                                                  const std::vector<int>&)>& visit) {
    std::function<void(int, int)> rec = [&](int node, int row) {
        const NiceNode& nd = ntd.nodes[node];
        const Prov& p = tables[node].provs[row];
        visit(nd, p, plan.pending[node]);
        if (nd.kind == NodeKind::Introduce || nd.kind == NodeKind::Forget) rec(nd.child1, p.c1);
        else if (nd.kind == NodeKind::Join) {
            rec(nd.child1, p.c1);
            rec(nd.child2, p.c2);
        }
    };
    rec(ntd.root, 0);
}

/// Default introduce: append one of the per-vertex start states, no edge logic.
template <class Rules, class Emit>
void plain_introduce(const Rules& rules, const Row& child, const IntroCtx& ctx, Emit emit) {
    for (auto [s, data] : rules.introduce_states(ctx.v)) {
        Row row = child;
        row.insert(row.begin() + ctx.pos, s);
        emit(std::move(row), data);
    }
}

// ---------------------------------------------------------------------------
// Ext VC: states 0 = out, 1 = in the cover without a private edge yet, 2 = in
// with a private edge among the processed edges. Edges are processed when their
// later endpoint is introduced: a vertex may enter as 0 only when all its bag
// neighbors are covering (and they gain their private edge, 1 becoming 2); it
// enters as 1 when no bag neighbor is out, as 2 when one is. Forget keeps 0 and
// 2 only; clean-up deletes rows dominated 2-over-1.
// ---------------------------------------------------------------------------
struct VcRules {
    const Graph& g;
    const IndexSet& u;

    std::vector<std::pair<std::uint8_t, std::uint64_t>> leaf_states(int v) const {
        if (u.contains(v)) return {{1, 1}};
        return {{0, 0}, {1, 1}};
    }
    template <class Emit>
    void expand_introduce(const Row& child, const IntroCtx& ctx, Emit emit) const {
        Row base = child;
        base.insert(base.begin() + ctx.pos, 0);
        bool some_out = false;
        for (int q : ctx.nbr_pos)
            if (base[q] == 0) some_out = true;
        if (!some_out && !u.contains(ctx.v)) {
            Row r = base; // v stays out; every bag neighbor now has a private edge
            for (int q : ctx.nbr_pos)
                if (r[q] == 1) r[q] = 2;
            emit(std::move(r), 0);
        }
        if (!some_out) {
            Row r = base;
            r[ctx.pos] = 1;
            emit(std::move(r), 1);
        } else {
            Row r = base;
            r[ctx.pos] = 2;
            emit(std::move(r), 1);
        }
    }
    template <class Emit>
    void expand_forget(const Row& child, const ForgetCtx& ctx, Emit emit) const {
        if (child[ctx.xi] == 1) return; // in the cover but never private
        Row r = child;
        r.erase(r.begin() + ctx.xi);
        emit(std::move(r), 0);
    }
    std::optional<std::uint8_t> join(std::uint8_t a, std::uint8_t b) const {
        if ((a == 0) != (b == 0)) return std::nullopt;
        return std::max(a, b);
    }
    void cleanup(Table& t) const {
        dominance_cleanup(t, [](std::uint8_t s) { return s == 0 ? 0 : 1; },
                          [](std::uint8_t a, std::uint8_t b) { return a == 2 && b == 1; });
    }
    void instrument(const NiceNode& nd, const Table& t, DpStats& stats) const {
        std::size_t bound = std::size_t(1) << nd.bag.size();
        if (t.rows.size() > bound) {
            ++stats.vc_bound_violations;
            if (t.rows.size() > stats.vc_worst_rows) {
                stats.vc_worst_rows = t.rows.size();
                stats.vc_worst_bag = nd.bag.size();
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Ext DS states. In the set: I0 = no dominator among processed neighbors (may
// still declare itself its own private neighbor at forget time), I1 = has a
// processed dominator and no private neighbor yet, I2 = secured a private
// neighbor. Out: O0 = undominated so far, O1 = dominated, O2 = reserved as the
// private neighbor of an adjacent set vertex (no further dominators allowed).
// ---------------------------------------------------------------------------
struct DsRules {
    static constexpr std::uint8_t I0 = 0, I1 = 1, I2 = 2, O0 = 3, O1 = 4, O2 = 5;
    const Graph& g;
    const IndexSet& u;

    std::vector<std::pair<std::uint8_t, std::uint64_t>> leaf_states(int v) const {
        if (u.contains(v)) return {{I0, 1}};
        return {{I0, 1}, {O0, 0}};
    }
    std::vector<std::pair<std::uint8_t, std::uint64_t>> introduce_states(int v) const {
        return leaf_states(v);
    }
    template <class Emit>
    void expand_introduce(const Row& child, const IntroCtx& ctx, Emit emit) const {
        plain_introduce(*this, child, ctx, emit);
    }
    static bool inset(std::uint8_t s) { return s <= I2; }

    template <class Emit>
    void expand_forget(const Row& child, const ForgetCtx& ctx, Emit emit) const {
        std::function<void(Row, size_t)> step = [&](Row r, size_t ei) {
            if (ei == ctx.pend_pos.size()) {
                std::uint8_t sx = r[ctx.xi];
                if (sx == I1 || sx == O0) return; // unsecured set vertex / undominated
                r.erase(r.begin() + ctx.xi);
                emit(std::move(r), 0);
                return;
            }
            int wp = ctx.pend_pos[ei];
            std::uint8_t sx = r[ctx.xi], sw = r[wp];
            if (inset(sx) && inset(sw)) {
                Row r2 = r;
                if (r2[ctx.xi] == I0) r2[ctx.xi] = I1;
                if (r2[wp] == I0) r2[wp] = I1;
                step(std::move(r2), ei + 1);
                return;
            }
            if (!inset(sx) && !inset(sw)) {
                step(std::move(r), ei + 1);
                return;
            }
            // one endpoint in the set, the other out
            int ip = inset(sx) ? ctx.xi : wp, op = inset(sx) ? wp : ctx.xi;
            std::uint8_t si = r[ip], so = r[op];
            if (so != O2) { // plain domination
                Row r2 = r;
                if (so == O0) r2[op] = O1;
                step(std::move(r2), ei + 1);
            }
            if (so == O0 && (si == I0 || si == I1)) { // reserve as private neighbor
                Row r2 = r;
                r2[ip] = I2;
                r2[op] = O2;
                step(std::move(r2), ei + 1);
            }
        };
        step(child, 0);
    }
    std::optional<std::uint8_t> join(std::uint8_t a, std::uint8_t b) const {
        if (inset(a) != inset(b)) return std::nullopt;
        if (inset(a)) {
            if (a == I2 || b == I2) return I2;
            if (a == I1 || b == I1) return I1;
            return I0;
        }
        if (a == O2 || b == O2) {
            if (a == O0 || b == O0) return O2;
            return std::nullopt; // a reserved private neighbor saw another dominator
        }
        if (a == O1 || b == O1) return O1;
        return O0;
    }
    void cleanup(Table& t) const {
        dominance_cleanup(t, [](std::uint8_t s) { return inset(s) ? 0 : 1; },
                          [](std::uint8_t a, std::uint8_t b) {
                              if (a == I2 && (b == I0 || b == I1)) return true;
                              if (a == I0 && b == I1) return true;
                              return a == O1 && b == O2;
                          });
    }
    void instrument(const NiceNode&, const Table&, DpStats&) const {}
};

// ---------------------------------------------------------------------------
// Ext EM states: 0 = stays unmatched (every incident edge needs a matched other
// endpoint), H = will be matched but has no partner yet, M = matched. Solution
// edges are chosen where their first endpoint is forgotten; only permitted edges
// may be chosen, but blocking is checked against all edges of the graph.
// ---------------------------------------------------------------------------
struct EmRules {
    static constexpr std::uint8_t S0 = 0, SH = 1, SM = 2;
    const Graph& g;
    const IndexSet& allowed;

    std::vector<std::pair<std::uint8_t, std::uint64_t>> leaf_states(int) const {
        return {{S0, 0}, {SH, 0}};
    }
    std::vector<std::pair<std::uint8_t, std::uint64_t>> introduce_states(int v) const {
        return leaf_states(v);
    }
    template <class Emit>
    void expand_introduce(const Row& child, const IntroCtx& ctx, Emit emit) const {
        plain_introduce(*this, child, ctx, emit);
    }
    template <class Emit>
    void expand_forget(const Row& child, const ForgetCtx& ctx, Emit emit) const {
        std::function<void(Row, size_t, std::uint64_t)> step = [&](Row r, size_t ei,
                                                                   std::uint64_t taken) {
            if (ei == ctx.pend_pos.size()) {
                if (r[ctx.xi] == SH) return; // committed but never found a partner
                r.erase(r.begin() + ctx.xi);
                emit(std::move(r), taken);
                return;
            }
            int wp = ctx.pend_pos[ei];
            std::uint8_t sx = r[ctx.xi], sw = r[wp];
            if (sx != S0 || sw != S0) step(r, ei + 1, taken); // edge is blocked
            if (sx == SH && sw == SH && allowed.contains(*g.edge_index(ctx.x, ctx.pending[ei]))) {
                Row r2 = r;
                r2[ctx.xi] = SM;
                r2[wp] = SM;
                step(std::move(r2), ei + 1, taken | (std::uint64_t(1) << ei));
            }
        };
        step(child, 0, 0);
    }
    std::optional<std::uint8_t> join(std::uint8_t a, std::uint8_t b) const {
        if ((a == S0) != (b == S0)) return std::nullopt;
        if (a == S0) return S0;
        if (a == SM && b == SM) return std::nullopt; // two partners
        return (a == SM || b == SM) ? SM : SH;
    }
    void cleanup(Table&) const {}
    void instrument(const NiceNode&, const Table&, DpStats&) const {}
};

// ---------------------------------------------------------------------------
// Ext EC states: 0 = not yet covered, P = covered by exactly one cover edge and
// pinned as that edge's private endpoint, F = covered, unpinned. Every chosen
// edge must pin one fresh endpoint; pre-solution edges are forced.
// ---------------------------------------------------------------------------
struct EcRules {
    static constexpr std::uint8_t S0 = 0, SP = 1, SF = 2;
    const Graph& g;
    const IndexSet& u;

    std::vector<std::pair<std::uint8_t, std::uint64_t>> leaf_states(int) const {
        return {{S0, 0}};
    }
    std::vector<std::pair<std::uint8_t, std::uint64_t>> introduce_states(int v) const {
        return leaf_states(v);
    }
    template <class Emit>
    void expand_introduce(const Row& child, const IntroCtx& ctx, Emit emit) const {
        plain_introduce(*this, child, ctx, emit);
    }
    template <class Emit>
    void expand_forget(const Row& child, const ForgetCtx& ctx, Emit emit) const {
        std::function<void(Row, size_t, std::uint64_t)> step = [&](Row r, size_t ei,
                                                                   std::uint64_t taken) {
            if (ei == ctx.pend_pos.size()) {
                if (r[ctx.xi] == S0) return; // vertex left uncovered
                r.erase(r.begin() + ctx.xi);
                emit(std::move(r), taken);
                return;
            }
            int wp = ctx.pend_pos[ei];
            bool forced = u.contains(*g.edge_index(ctx.x, ctx.pending[ei]));
            if (!forced) step(r, ei + 1, taken);
            std::uint8_t sx = r[ctx.xi], sw = r[wp];
            const std::uint8_t xopts[2] = {SP, SF}, wopts[2] = {SP, SF};
            for (std::uint8_t xo : xopts) {
                if (sx == SP || (sx == SF && xo == SP)) continue;
                for (std::uint8_t wo : wopts) {
                    if (sw == SP || (sw == SF && wo == SP)) continue;
                    bool pins = (sx == S0 && xo == SP) || (sw == S0 && wo == SP);
                    if (!pins) continue; // a cover edge needs a private endpoint
                    Row r2 = r;
                    r2[ctx.xi] = xo;
                    r2[wp] = wo;
                    step(std::move(r2), ei + 1, taken | (std::uint64_t(1) << ei));
                }
            }
        };
        step(child, 0, 0);
    }
    std::optional<std::uint8_t> join(std::uint8_t a, std::uint8_t b) const {
        if (a == S0 && b == S0) return S0;
        if (a == SF && b == SF) return SF;
        if (a == S0 || b == S0) return std::max(a, b); // S0 contributes no cover edge
        return std::nullopt;                           // a pinned vertex saw more edges
    }
    void cleanup(Table& t) const {
        dominance_cleanup(t, [](std::uint8_t s) { return s == S0 ? 0 : 1; },
                          [](std::uint8_t a, std::uint8_t b) { return a == SF && b == SP; });
    }
    void instrument(const NiceNode&, const Table&, DpStats&) const {}
};

// ---------------------------------------------------------------------------
// Ext EDS. Per-vertex commitment: Z = never touched by a solution edge, O =
// touched by exactly one, M = touched by at least one. An O vertex may justify
// its solution edge, which requires a Z neighbor (seen or still awaited); an
// O-O solution edge may instead justify itself. States track degree so far,
// whether a Z neighbor was processed, and an unresolved justification need.
// ---------------------------------------------------------------------------
struct EdsRules {
    static constexpr std::uint8_t Z = 0, O0n = 1, O0z = 2, O1 = 3, O1need = 4, M0 = 5, M1 = 6;
    const Graph& g;
    const IndexSet& u;

    static int mode(std::uint8_t s) { return s == Z ? 0 : (s <= O1need ? 1 : 2); }

    std::vector<std::pair<std::uint8_t, std::uint64_t>> leaf_states(int) const {
        return {{Z, 0}, {O0n, 0}, {M0, 0}};
    }
    std::vector<std::pair<std::uint8_t, std::uint64_t>> introduce_states(int v) const {
        return leaf_states(v);
    }
    template <class Emit>
    void expand_introduce(const Row& child, const IntroCtx& ctx, Emit emit) const {
        plain_introduce(*this, child, ctx, emit);
    }
    template <class Emit>
    void expand_forget(const Row& child, const ForgetCtx& ctx, Emit emit) const {
        std::function<void(Row, size_t, std::uint64_t)> step = [&](Row r, size_t ei,
                                                                   std::uint64_t taken) {
            if (ei == ctx.pend_pos.size()) {
                std::uint8_t sx = r[ctx.xi];
                if (sx != Z && sx != O1 && sx != M1) return; // unmet degree commitment
                r.erase(r.begin() + ctx.xi);
                emit(std::move(r), taken);
                return;
            }
            int wp = ctx.pend_pos[ei];
            bool forced = u.contains(*g.edge_index(ctx.x, ctx.pending[ei]));
            std::uint8_t sx = r[ctx.xi], sw = r[wp];
            int mx = mode(sx), mw = mode(sw);
            if (!forced && (mx != 0 || mw != 0)) { // skip; edge dominated by a commitment
                Row r2 = r;
                if (mw == 0 && mx == 1) r2[ctx.xi] = sx == O0n ? O0z : (sx == O1need ? O1 : sx);
                if (mx == 0 && mw == 1) r2[wp] = sw == O0n ? O0z : (sw == O1need ? O1 : sw);
                step(std::move(r2), ei + 1, taken);
            }
            if (mx == 0 || mw == 0) return;                       // solution edge needs both ends
            if ((mx == 1 && sx >= O1) || (mw == 1 && sw >= O1)) return; // O capacity exhausted
            auto place = [&](std::uint8_t s, int justify /*0 no, 1 yes*/) -> std::uint8_t {
                if (mode(s) == 2) return M1;
                if (!justify) return O1;
                return s == O0z ? O1 : O1need;
            };
            std::uint64_t tk = taken | (std::uint64_t(1) << ei);
            if (mx == 1) { // justified through x
                Row r2 = r;
                r2[ctx.xi] = place(sx, 1);
                r2[wp] = place(sw, 0);
                step(std::move(r2), ei + 1, tk);
            }
            if (mw == 1) { // justified through w
                Row r2 = r;
                r2[ctx.xi] = place(sx, 0);
                r2[wp] = place(sw, 1);
                step(std::move(r2), ei + 1, tk);
            }
            if (mx == 1 && mw == 1) { // the edge is its own private edge
                Row r2 = r;
                r2[ctx.xi] = O1;
                r2[wp] = O1;
                step(std::move(r2), ei + 1, tk);
            }
        };
        step(child, 0, 0);
    }
    std::optional<std::uint8_t> join(std::uint8_t a, std::uint8_t b) const {
        if (mode(a) != mode(b)) return std::nullopt;
        switch (mode(a)) {
            case 0: return Z;
            case 2: return (a == M1 || b == M1) ? M1 : M0;
            default: break;
        }
        bool d1a = a >= O1, d1b = b >= O1;
        if (d1a && d1b) return std::nullopt; // two solution edges at an O vertex
        if (!d1a && !d1b) return (a == O0z || b == O0z) ? O0z : O0n;
        std::uint8_t one = d1a ? a : b, zero = d1a ? b : a;
        if (one == O1need) return zero == O0z ? O1 : O1need;
        return O1;
    }
    void cleanup(Table& t) const {
        dominance_cleanup(t, [](std::uint8_t s) { return mode(s); },
                          [](std::uint8_t a, std::uint8_t b) {
                              if (a == O0z && b == O0n) return true;
                              if (a == O1 && b == O1need) return true;
                              return a == M1 && b == M0;
                          });
    }
    void instrument(const NiceNode&, const Table&, DpStats&) const {}
};

} // namespace twdetail

namespace twdetail {

inline IndexSet collect_vertex_witness(const Graph& g, const NiceTreeDecomposition& ntd,
                                       const std::vector<Table>& tables) {
    IndexSet sol(g.vertex_count());
    Plan plan = Plan::analyze(g, ntd);
    walk_witness(ntd, tables, plan,
                 [&](const NiceNode& nd, const Prov& p, const std::vector<int>&) {
                     if ((nd.kind == NodeKind::Leaf || nd.kind == NodeKind::Introduce) && p.data)
                         sol.add(nd.vertex);
                 });
    return sol;
}

inline IndexSet collect_edge_witness(const Graph& g, const NiceTreeDecomposition& ntd,
                                     const std::vector<Table>& tables) {
    IndexSet sol(g.edge_count());
    Plan plan = Plan::analyze(g, ntd);
    walk_witness(ntd, tables, plan,
                 [&](const NiceNode& nd, const Prov& p, const std::vector<int>& pending) {
                     if (nd.kind != NodeKind::Forget) return;
                     for (size_t i = 0; i < pending.size(); ++i)
                         if (p.data >> i & 1) sol.add(*g.edge_index(nd.vertex, pending[i]));
                 });
    return sol;
}

template <class Rules>
Verdict run_and_collect(const Graph& g, const NiceTreeDecomposition& ntd, Rules rules,
                        DpStats* stats, bool vertex_witness) {
    int ground = vertex_witness ? g.vertex_count() : g.edge_count();
    if (g.vertex_count() == 0) return {true, Candidate(IndexSet(ground))};
    if (ntd.root < 0) throw precondition_error("decomposition does not match the graph");
    auto [ans, tables] = run_dp(g, ntd, rules, stats);
    if (!ans) return {false, std::nullopt};
    IndexSet sol = vertex_witness ? collect_vertex_witness(g, ntd, tables)
                                  : collect_edge_witness(g, ntd, tables);
    return {true, Candidate(sol)};
}

} // namespace twdetail

/// Is there a minimal vertex cover of g containing U?
inline Verdict ext_vc_treewidth(const Graph& g, const IndexSet& u,
                                const NiceTreeDecomposition& ntd, DpStats* stats = nullptr) {
    if (u.universe() != g.vertex_count()) throw precondition_error("pre-solution must be a vertex set");
    return twdetail::run_and_collect(g, ntd, twdetail::VcRules{g, u}, stats, true);
}

/// Is there a minimal dominating set of g containing U?
inline Verdict ext_ds_treewidth(const Graph& g, const IndexSet& u,
                                const NiceTreeDecomposition& ntd, DpStats* stats = nullptr) {
    if (u.universe() != g.vertex_count()) throw precondition_error("pre-solution must be a vertex set");
    return twdetail::run_and_collect(g, ntd, twdetail::DsRules{g, u}, stats, true);
}

/// Is some subset of the permitted edges a maximal matching of g?
inline Verdict ext_em_treewidth(const Graph& g, const IndexSet& allowed,
                                const NiceTreeDecomposition& ntd, DpStats* stats = nullptr) {
    if (allowed.universe() != g.edge_count()) throw precondition_error("pre-solution must be an edge set");
    return twdetail::run_and_collect(g, ntd, twdetail::EmRules{g, allowed}, stats, false);
}

/// Is there a minimal edge cover of g containing U?
inline Verdict ext_ec_treewidth(const Graph& g, const IndexSet& u,
                                const NiceTreeDecomposition& ntd, DpStats* stats = nullptr) {
    if (u.universe() != g.edge_count()) throw precondition_error("pre-solution must be an edge set");
    return twdetail::run_and_collect(g, ntd, twdetail::EcRules{g, u}, stats, false);
}

/// Is there a minimal edge dominating set of g containing U?
inline Verdict ext_eds_treewidth(const Graph& g, const IndexSet& u,
                                 const NiceTreeDecomposition& ntd, DpStats* stats = nullptr) {
    if (u.universe() != g.edge_count()) throw precondition_error("pre-solution must be an edge set");
    return twdetail::run_and_collect(g, ntd, twdetail::EdsRules{g, u}, stats, false);
}

} // namespace extkit
