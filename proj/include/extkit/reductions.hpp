#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "framework.hpp"

namespace extkit {

/// (3,B2)-SAT: every clause has three literals on three distinct variables and
/// every variable occurs exactly four times, twice negated and twice unnegated.
/// (Distinctness is what the gadget shapes and the exact image counts rely on.)
struct Cnf3B2Instance {
    Cnf formula;
    int clause_count() const { return (int)formula.clauses.size(); }
};

inline Cnf3B2Instance validate_3b2sat(const Cnf& f) {
    std::vector<int> pos(f.vars, 0), neg(f.vars, 0);
    for (size_t i = 0; i < f.clauses.size(); ++i) {
        auto& c = f.clauses[i];
        if (c.size() != 3)
            throw precondition_error("clause " + std::to_string(i + 1) + " has " +
                                     std::to_string(c.size()) + " literals, expected 3");
        for (size_t a = 0; a < 3; ++a)
            for (size_t b = a + 1; b < 3; ++b)
                if (std::abs(c[a]) == std::abs(c[b]))
                    throw precondition_error("clause " + std::to_string(i + 1) +
                                             " repeats variable " + std::to_string(std::abs(c[a])));
        for (int lit : c) (lit > 0 ? pos : neg)[std::abs(lit) - 1]++;
    }
    for (int v = 0; v < f.vars; ++v) {
        if (pos[v] != 2 || neg[v] != 2)
            throw precondition_error("variable " + std::to_string(v + 1) + " occurs " +
                                     std::to_string(pos[v]) + " times unnegated and " +
                                     std::to_string(neg[v]) + " times negated, expected 2/2");
    }
    return Cnf3B2Instance{f};
}

/// Exhaustive satisfiability check, first satisfying assignment in numeric order.
inline std::optional<std::vector<bool>> sat_oracle(const Cnf& f, int var_cap = 20) {
    if (f.vars > var_cap) throw size_limit_error("sat oracle supports at most " +
                                                 std::to_string(var_cap) + " variables");
    std::vector<bool> assign(f.vars, false);
    for (long long mask = 0; mask < (1ll << f.vars); ++mask) {
        for (int i = 0; i < f.vars; ++i) assign[i] = mask >> i & 1;
        if (f.satisfied_by(assign)) return assign;
    }
    return std::nullopt;
}

/// Seed-deterministic random (3,B2)-SAT instance with n variables (n = 3k) and
/// m = 4n/3 clauses: the 4n literal slots are shuffled onto clause slots until no
/// clause repeats a variable.
inline Cnf3B2Instance gen_3b2sat(int n, std::uint64_t seed) {
    if (n < 3 || n % 3 != 0) throw precondition_error("n must be a positive multiple of 3");
    int m = 4 * n / 3;
    std::vector<int> slots;
    for (int v = 1; v <= n; ++v) {
        slots.push_back(v);
        slots.push_back(v);
        slots.push_back(-v);
        slots.push_back(-v);
    }
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::vector<int> s = slots;
        for (size_t i = s.size() - 1; i > 0; --i) std::swap(s[i], s[rng() % (i + 1)]);
        Cnf f;
        f.vars = n;
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) {
            std::vector<int> c(s.begin() + 3 * j, s.begin() + 3 * j + 3);
            if (std::abs(c[0]) == std::abs(c[1]) || std::abs(c[0]) == std::abs(c[2]) ||
                std::abs(c[1]) == std::abs(c[2]))
                ok = false;
            else
                f.clauses.push_back(c);
        }
        if (ok) return validate_3b2sat(f);
    }
    throw std::runtime_error("could not generate a well-formed (3,B2) instance");
}

/// Tautology via the extension order on assignments: with the all-ones assignment
/// as pre-solution, an extension exists iff the formula is a tautology.
inline Verdict ext_tautology_demo(const Cnf& f, int var_cap = 20) {
    if (f.vars > var_cap) throw size_limit_error("tautology check supports at most " +
                                                 std::to_string(var_cap) + " variables");
    std::vector<bool> ones(f.vars, true);
    if (!f.satisfied_by(ones))
        throw precondition_error("the all-ones assignment must satisfy the formula");
    std::vector<bool> assign(f.vars, false);
    for (long long mask = 0; mask < (1ll << f.vars); ++mask) {
        for (int i = 0; i < f.vars; ++i) assign[i] = mask >> i & 1;
        if (!f.satisfied_by(assign)) return {false, std::nullopt};
    }
    return {true, Candidate(ones)};
}

enum class ReductionTarget {
    EXT_EC,
    EXT_EM,
    EXT_DS,
    EXT_EDS,
    // reserved for planarity-preserving variants; not implemented
    EXT_EC_PLANAR,
    EXT_EM_PLANAR,
    EXT_DS_PLANAR,
    EXT_EDS_PLANAR,
};

/// A generated extension instance plus the deterministic vertex naming scheme,
/// embedded as comments in emitted files so failures localize to gadgets.
struct ReducedInstance {
    ExtensionInstance instance;
    std::vector<std::string> vertex_names;
};

namespace redetail {

struct GraphBuilder {
    std::vector<std::string> names;
    std::map<std::string, int> ids;
    std::vector<std::pair<int, int>> edges;

    int vertex(const std::string& name) {
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        int id = (int)names.size();
        names.push_back(name);
        ids.emplace(name, id);
        return id;
    }
    int edge(int a, int b) {
        edges.push_back({a, b});
        return (int)edges.size() - 1;
    }
    Graph build() const { return Graph((int)names.size(), edges); }
};

} // namespace redetail

/// The four hardness reductions from (3,B2)-SAT, realized as instance generators.
/// Images are bipartite with maximum degree 3; the pre-solution has the exact
/// structural shape the theorems state.
inline ReducedInstance reduce_3b2sat(const Cnf3B2Instance& inst, ReductionTarget target) {
    const Cnf& f = inst.formula;
    int n = f.vars, m = inst.clause_count();
    redetail::GraphBuilder b;
    auto var = [&](int v) { return "x" + std::to_string(v); };
    auto cl = [&](int c) { return "c" + std::to_string(c + 1); };

    switch (target) {
        case ReductionTarget::EXT_EC: {
            // split every variable vertex by a P5 (x, l, m, r, -x); U matches the
            // pendant-like edges x-l and -x-r
            std::vector<int> u_edges;
            for (int v = 1; v <= n; ++v) {
                int x = b.vertex(var(v)), l = b.vertex(var(v) + ".l"), mm = b.vertex(var(v) + ".m");
                int r = b.vertex(var(v) + ".r"), nx = b.vertex(var(v) + ".neg");
                u_edges.push_back(b.edge(x, l));
                b.edge(l, mm);
                b.edge(mm, r);
                u_edges.push_back(b.edge(r, nx));
            }
            for (int c = 0; c < m; ++c) {
                int cv = b.vertex(cl(c));
                for (int lit : f.clauses[c])
                    b.edge(cv, b.vertex(lit > 0 ? var(lit) : var(-lit) + ".neg"));
            }
            Graph g = b.build();
            IndexSet u(g.edge_count());
            for (int k : u_edges) u.add(k);
            return {ExtensionInstance{ProblemId::EC, Payload(g), Candidate(u), 1}, b.names};
        }
        case ReductionTarget::EXT_DS: {
            // clause gadget: 1'c,2'c carry the literals, {3c,4c} are forced;
            // variable gadget: path x - 1x - -x with 1x forced
            std::vector<int> u_vertices;
            for (int v = 1; v <= n; ++v) {
                int x = b.vertex(var(v)), nx = b.vertex(var(v) + ".neg");
                int ox = b.vertex(var(v) + ".1x");
                b.edge(x, ox);
                b.edge(nx, ox);
                u_vertices.push_back(ox);
            }
            for (int c = 0; c < m; ++c) {
                int p1 = b.vertex(cl(c) + ".1p"), p2 = b.vertex(cl(c) + ".2p");
                int v1 = b.vertex(cl(c) + ".1c"), v2 = b.vertex(cl(c) + ".2c");
                int v3 = b.vertex(cl(c) + ".3c"), v4 = b.vertex(cl(c) + ".4c");
                int v5 = b.vertex(cl(c) + ".5c");
                b.edge(p1, v1);
                b.edge(v1, v3);
                b.edge(p2, v2);
                b.edge(v2, v3);
                b.edge(v3, v4);
                b.edge(v4, v5);
                u_vertices.push_back(v3);
                u_vertices.push_back(v4);
                auto& lits = f.clauses[c];
                auto litv = [&](int lit) {
                    return b.vertex(lit > 0 ? var(lit) : var(-lit) + ".neg");
                };
                b.edge(p1, litv(lits[0]));
                b.edge(p1, litv(lits[1]));
                b.edge(p2, litv(lits[2]));
            }
            Graph g = b.build();
            IndexSet u(g.vertex_count());
            for (int v : u_vertices) u.add(v);
            return {ExtensionInstance{ProblemId::DS, Payload(g), Candidate(u), 1}, b.names};
        }
        case ReductionTarget::EXT_EDS: {
            // as for Ext DS with one extra tail vertex per gadget; forced edges form
            // the P3s 3c-4c-5c and 1x-2x-3x
            std::vector<int> u_edges;
            for (int v = 1; v <= n; ++v) {
                int x = b.vertex(var(v)), nx = b.vertex(var(v) + ".neg");
                int o1 = b.vertex(var(v) + ".1x"), o2 = b.vertex(var(v) + ".2x");
                int o3 = b.vertex(var(v) + ".3x"), o4 = b.vertex(var(v) + ".4x");
                b.edge(x, o1);
                b.edge(nx, o1);
                u_edges.push_back(b.edge(o1, o2));
                u_edges.push_back(b.edge(o2, o3));
                b.edge(o3, o4);
            }
            for (int c = 0; c < m; ++c) {
                int p1 = b.vertex(cl(c) + ".1p"), p2 = b.vertex(cl(c) + ".2p");
                int v1 = b.vertex(cl(c) + ".1c"), v2 = b.vertex(cl(c) + ".2c");
                int v3 = b.vertex(cl(c) + ".3c"), v4 = b.vertex(cl(c) + ".4c");
                int v5 = b.vertex(cl(c) + ".5c"), v6 = b.vertex(cl(c) + ".6c");
                b.edge(p1, v1);
                b.edge(v1, v3);
                b.edge(p2, v2);
                b.edge(v2, v3);
                u_edges.push_back(b.edge(v3, v4));
                u_edges.push_back(b.edge(v4, v5));
                b.edge(v5, v6);
                auto& lits = f.clauses[c];
                auto litv = [&](int lit) {
                    return b.vertex(lit > 0 ? var(lit) : var(-lit) + ".neg");
                };
                b.edge(p1, litv(lits[0]));
                b.edge(p1, litv(lits[1]));
                b.edge(p2, litv(lits[2]));
            }
            Graph g = b.build();
            IndexSet u(g.edge_count());
            for (int k : u_edges) u.add(k);
            return {ExtensionInstance{ProblemId::EDS, Payload(g), Candidate(u), 1}, b.names};
        }
        case ReductionTarget::EXT_EM: {
            // clause gadget H(c): literal vertices l1..l3 with forbidden pendant
            // edges into 1c,2c,3c and two unnamed vertices 1c-a-2c-b-3c; variable
            // gadget H(x) on 12 vertices with forbidden spine edges; crossing edges
            // are always permitted
            std::vector<int> u_edges;
            // variable gadgets; occurrence slots: positive -> x.c1/x.c2, negative -> x.n3/x.n4
            for (int v = 1; v <= n; ++v) {
                std::string s = var(v);
                int ox1 = b.vertex(s + ".1x"), ox2 = b.vertex(s + ".2x");
                int ox3 = b.vertex(s + ".3x"), ox4 = b.vertex(s + ".4x");
                int i11 = b.vertex(s + ".1c1"), i12 = b.vertex(s + ".1c2");
                int i23 = b.vertex(s + ".2c3"), i24 = b.vertex(s + ".2c4");
                int xc1 = b.vertex(s + ".c1"), xc2 = b.vertex(s + ".c2");
                int nx3 = b.vertex(s + ".n3"), nx4 = b.vertex(s + ".n4");
                b.edge(ox1, i11);                       // forbidden
                u_edges.push_back(b.edge(i11, xc1));    // in U_negx
                b.edge(ox1, i12);                       // forbidden
                u_edges.push_back(b.edge(i12, xc2));    // in U_negx
                b.edge(ox2, i23);                       // forbidden
                u_edges.push_back(b.edge(i23, nx3));    // in U_x
                b.edge(ox2, i24);                       // forbidden
                u_edges.push_back(b.edge(i24, nx4));    // in U_x
                u_edges.push_back(b.edge(ox1, ox3));    // e_x
                u_edges.push_back(b.edge(ox2, ox3));    // e_negx
                b.edge(ox3, ox4);                       // forbidden
            }
            std::vector<int> pos_used(n + 1, 0), neg_used(n + 1, 0);
            for (int c = 0; c < m; ++c) {
                std::string s = cl(c);
                int l1 = b.vertex(s + ".l1"), l2 = b.vertex(s + ".l2"), l3 = b.vertex(s + ".l3");
                int o1 = b.vertex(s + ".1c"), o2 = b.vertex(s + ".2c"), o3 = b.vertex(s + ".3c");
                int a = b.vertex(s + ".a"), bb = b.vertex(s + ".b");
                b.edge(l1, o1); // forbidden F_c
                b.edge(l2, o2);
                b.edge(l3, o3);
                u_edges.push_back(b.edge(o1, a));
                u_edges.push_back(b.edge(o2, a));
                u_edges.push_back(b.edge(o2, bb));
                u_edges.push_back(b.edge(o3, bb));
                const int lvs[3] = {l1, l2, l3};
                for (int i = 0; i < 3; ++i) {
                    int lit = f.clauses[c][i];
                    int v = std::abs(lit);
                    std::string slot = lit > 0 ? (++pos_used[v] == 1 ? ".c1" : ".c2")
                                               : (++neg_used[v] == 1 ? ".n3" : ".n4");
                    u_edges.push_back(b.edge(b.vertex(var(v) + slot), lvs[i])); // crossing
                }
            }
            Graph g = b.build();
            IndexSet u(g.edge_count());
            for (int k : u_edges) u.add(k);
            return {ExtensionInstance{ProblemId::EM, Payload(g), Candidate(u), 1}, b.names};
        }
        default:
            throw precondition_error("planarity-preserving reductions are not implemented");
    }
}

/// 3-Partition source instance: 3m positive integers strictly between b/4 and b/2
/// summing to m*b.
struct ThreePartitionInstance {
    std::vector<long long> values;
    long long bound = 0;

    ThreePartitionInstance(std::vector<long long> s, long long b) : values(std::move(s)), bound(b) {
        if (values.empty() || values.size() % 3 != 0)
            throw precondition_error("value count must be a positive multiple of 3");
        long long m = (long long)values.size() / 3, sum = 0;
        for (long long v : values) {
            if (4 * v <= bound || 2 * v >= bound)
                throw precondition_error("every value must satisfy b/4 < s < b/2 strictly");
            sum += v;
        }
        if (sum != m * bound) throw precondition_error("values must sum to m*b");
    }
    long long triple_count() const { return (long long)values.size() / 3; }
};

/// Exhaustive 3-Partition decision (partition into triples of sum b each).
inline bool three_partition_brute(const ThreePartitionInstance& tp) {
    int n = (int)tp.values.size();
    std::vector<char> used(n, 0);
    std::function<bool()> rec = [&]() -> bool {
        int first = -1;
        for (int i = 0; i < n; ++i)
            if (!used[i]) { first = i; break; }
        if (first < 0) return true;
        used[first] = 1;
        for (int j = first + 1; j < n; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            for (int k = j + 1; k < n; ++k) {
                if (used[k]) continue;
                if (tp.values[first] + tp.values[j] + tp.values[k] != tp.bound) continue;
                used[k] = 1;
                if (rec()) return true;
                used[k] = 0;
            }
            used[j] = 0;
        }
        used[first] = 0;
        return false;
    };
    return rec();
}

/// Image: items x0 (weight m/(m+1)) and xi (weight si/b); pre-solution keeps x0
/// apart from everything else.
inline ExtensionInstance reduce_3partition_to_ext_bp(const ThreePartitionInstance& tp) {
    long long m = tp.triple_count();
    std::vector<Rational> w;
    w.push_back(Rational(m, m + 1));
    for (long long s : tp.values) w.push_back(Rational(s, tp.bound));
    BpInstance bi{std::move(w)};
    std::vector<int> rest;
    for (int i = 1; i <= (int)tp.values.size(); ++i) rest.push_back(i);
    Partition pu(std::vector<std::vector<int>>{{0}, rest});
    return ExtensionInstance{ProblemId::BP, Payload(bi), Candidate(pu), 1};
}

/// Ext HS -> Ext DS: incidence bipartite graph plus the y/y' dominator pair for the
/// ground side and the z1..z4 path guarding the hyperedge side; |U'| = |U| + 3.
inline ReducedInstance reduce_hs_to_ext_ds(const HittingSetInstance& h, const IndexSet& u) {
    if (u.universe() != h.ground_size) throw precondition_error("pre-solution element out of range");
    redetail::GraphBuilder b;
    std::vector<int> elems, sets;
    for (int i = 0; i < h.ground_size; ++i) elems.push_back(b.vertex("e" + std::to_string(i + 1)));
    for (size_t j = 0; j < h.hyperedges.size(); ++j)
        sets.push_back(b.vertex("s" + std::to_string(j + 1)));
    for (size_t j = 0; j < h.hyperedges.size(); ++j)
        for (int e : h.hyperedges[j]) b.edge(elems[e], sets[j]);
    int y = b.vertex("y"), yp = b.vertex("y'");
    b.edge(y, yp);
    for (int e : elems) b.edge(e, y);
    int z1 = b.vertex("z1"), z2 = b.vertex("z2"), z3 = b.vertex("z3"), z4 = b.vertex("z4");
    b.edge(z1, z2);
    b.edge(z2, z3);
    b.edge(z3, z4);
    for (int s : sets) b.edge(z1, s);
    Graph g = b.build();
    IndexSet up(g.vertex_count());
    for (int e : u.elements()) up.add(elems[e]);
    up.add(y);
    up.add(z2);
    up.add(z3);
    return {ExtensionInstance{ProblemId::DS, Payload(g), Candidate(up), 1}, b.names};
}

/// Ext VC -> Ext EDS on bipartite inputs: three new vertices per part; cover
/// vertices map to their pendant-side edges v-x_i; |U'| = |U| + 2.
inline ReducedInstance reduce_extvc_to_exteds(const Graph& g, const IndexSet& u) {
    if (u.universe() != g.vertex_count()) throw precondition_error("pre-solution must be a vertex set");
    auto coloring = g.is_bipartite();
    if (!coloring) throw precondition_error("the reduction needs a bipartite input graph");
    redetail::GraphBuilder b;
    std::vector<int> v_ids;
    for (int v = 0; v < g.vertex_count(); ++v) v_ids.push_back(b.vertex("v" + std::to_string(v + 1)));
    for (auto [x, y] : g.edges()) b.edge(v_ids[x], v_ids[y]);
    int x1 = b.vertex("x1"), y1 = b.vertex("y1"), z1 = b.vertex("z1");
    int x2 = b.vertex("x2"), y2 = b.vertex("y2"), z2 = b.vertex("z2");
    std::vector<int> pendant_edge(g.vertex_count(), -1);
    for (int v = 0; v < g.vertex_count(); ++v)
        pendant_edge[v] = b.edge(v_ids[v], (*coloring)[v] == 0 ? x1 : x2);
    int e_x1y1 = b.edge(x1, y1);
    b.edge(y1, z1);
    int e_x2y2 = b.edge(x2, y2);
    b.edge(y2, z2);
    Graph gp = b.build();
    IndexSet up(gp.edge_count());
    for (int v : u.elements()) up.add(pendant_edge[v]);
    up.add(e_x1y1);
    up.add(e_x2y2);
    return {ExtensionInstance{ProblemId::EDS, Payload(gp), Candidate(up), 1}, b.names};
}

// --------------------------------------------------------------------------
// Instance files: one-line "# ext-<problem>" header naming the target, then the
// graph (with "# vertex i name" comments) or bin packing payload, then the
// pre-solution section.
// --------------------------------------------------------------------------

inline std::string problem_tag(ProblemId p) {
    switch (p) {
        case ProblemId::VC: return "ext-vc";
        case ProblemId::IS: return "ext-is";
        case ProblemId::EC: return "ext-ec";
        case ProblemId::EM: return "ext-em";
        case ProblemId::DS: return "ext-ds";
        case ProblemId::EDS: return "ext-eds";
        case ProblemId::HS: return "ext-hs";
        case ProblemId::BP: return "ext-bp";
        case ProblemId::SAT_TAU: return "ext-tau";
    }
    return "?";
}

inline std::optional<ProblemId> problem_from_tag(const std::string& tag) {
    for (ProblemId p : {ProblemId::VC, ProblemId::IS, ProblemId::EC, ProblemId::EM, ProblemId::DS,
                        ProblemId::EDS, ProblemId::HS, ProblemId::BP, ProblemId::SAT_TAU})
        if (problem_tag(p) == tag) return p;
    return std::nullopt;
}

inline void write_instance_file(std::ostream& os, const ExtensionInstance& inst,
                                const std::vector<std::string>& vertex_names = {}) {
    os << "# " << problem_tag(inst.problem) << '\n';
    if (inst.problem == ProblemId::BP) {
        serialize_bp(os, std::get<BpInstance>(inst.payload), std::get<Partition>(inst.presolution));
        return;
    }
    const Graph& g = std::get<Graph>(inst.payload);
    for (size_t i = 0; i < vertex_names.size(); ++i)
        os << "# vertex " << i + 1 << ' ' << vertex_names[i] << '\n';
    g.serialize(os);
    serialize_presolution(os, g, std::get<IndexSet>(inst.presolution), vertex_based(inst.problem));
}

inline ExtensionInstance parse_instance_file(std::istream& is) {
    std::string line;
    std::optional<ProblemId> pid;
    std::vector<std::string> body;
    while (std::getline(is, line)) {
        if (!pid) {
            std::istringstream ss(line);
            std::string hash, tag;
            if (!(ss >> hash >> tag) || hash != "#" || !(pid = problem_from_tag(tag)))
                throw parse_error("expected a '# ext-<problem>' header line", 1);
            continue;
        }
        body.push_back(line);
    }
    if (!pid) throw parse_error("empty instance file");
    if (*pid == ProblemId::BP) {
        std::string text;
        for (auto& l : body) text += l + "\n";
        std::istringstream ss(text);
        auto [bi, pu] = parse_bp(ss);
        return ExtensionInstance{ProblemId::BP, Payload(bi), Candidate(pu), 1};
    }
    // graph problems: the graph lines come first, the presolution header starts
    // with V or E
    std::string gtext, ptext;
    bool in_presol = false;
    for (auto& l : body) {
        std::istringstream ss(l);
        std::string tok;
        if (!in_presol && (ss >> tok) && (tok == "V" || tok == "E")) in_presol = true;
        (in_presol ? ptext : gtext) += l + "\n";
    }
    std::istringstream gs(gtext), ps(ptext);
    Graph g = parse_graph(gs);
    auto [set, is_vertex] = parse_presolution(ps, g);
    if (is_vertex != vertex_based(*pid)) throw parse_error("pre-solution kind does not match problem");
    return ExtensionInstance{*pid, Payload(g), Candidate(set), 1};
}

} // namespace extkit
