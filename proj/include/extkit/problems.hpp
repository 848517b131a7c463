#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "binpacking.hpp"
#include "cnf.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "hitting_set.hpp"
#include "index_set.hpp"

namespace extkit {

enum class ProblemId { VC, IS, EC, EM, DS, EDS, HS, BP, SAT_TAU };

/// Direction of the instance order. "Up" is towards supersets for SubsetGrowing
/// problems, towards subsets for SupersetShrinking ones, towards finer partitions
/// for PartitionRefining.
enum class OrderDirection { SubsetGrowing, SupersetShrinking, PartitionRefining };

inline OrderDirection order_direction(ProblemId p) {
    switch (p) {
        case ProblemId::IS:
        case ProblemId::EM: return OrderDirection::SupersetShrinking;
        case ProblemId::BP: return OrderDirection::PartitionRefining;
        default: return OrderDirection::SubsetGrowing;
    }
}

inline bool vertex_based(ProblemId p) {
    return p == ProblemId::VC || p == ProblemId::IS || p == ProblemId::DS;
}

/// Feasibility predicates for the graph problems. For EM the parameter r generalizes
/// to r-DCPS (max degree <= r) and for EC to r-EC (min degree >= r); r = 1 recovers
/// the plain problems.
inline bool feasible(ProblemId p, const Graph& g, const IndexSet& cand, int r = 1) {
    switch (p) {
        case ProblemId::VC: {
            if (cand.universe() != g.vertex_count()) throw precondition_error("candidate type mismatch");
            for (auto [u, v] : g.edges())
                if (!cand.contains(u) && !cand.contains(v)) return false;
            return true;
        }
        case ProblemId::IS: {
            if (cand.universe() != g.vertex_count()) throw precondition_error("candidate type mismatch");
            for (auto [u, v] : g.edges())
                if (cand.contains(u) && cand.contains(v)) return false;
            return true;
        }
        case ProblemId::DS: {
            if (cand.universe() != g.vertex_count()) throw precondition_error("candidate type mismatch");
            for (int v = 0; v < g.vertex_count(); ++v) {
                if (cand.contains(v)) continue;
                bool dom = false;
                for (int w : g.neighbors(v))
                    if (cand.contains(w)) { dom = true; break; }
                if (!dom) return false;
            }
            return true;
        }
        case ProblemId::EC: {
            if (cand.universe() != g.edge_count()) throw precondition_error("candidate type mismatch");
            for (int v = 0; v < g.vertex_count(); ++v) {
                int deg = 0;
                for (int k : g.incident_edges(v))
                    if (cand.contains(k)) ++deg;
                if (deg < r) return false;
            }
            return true;
        }
        case ProblemId::EM: {
            if (cand.universe() != g.edge_count()) throw precondition_error("candidate type mismatch");
            for (int v = 0; v < g.vertex_count(); ++v) {
                int deg = 0;
                for (int k : g.incident_edges(v))
                    if (cand.contains(k)) ++deg;
                if (deg > r) return false;
            }
            return true;
        }
        case ProblemId::EDS: {
            if (cand.universe() != g.edge_count()) throw precondition_error("candidate type mismatch");
            for (int k = 0; k < g.edge_count(); ++k) {
                if (cand.contains(k)) continue;
                auto [u, v] = g.edge(k);
                bool dom = false;
                for (int j : g.incident_edges(u))
                    if (cand.contains(j)) { dom = true; break; }
                if (!dom)
                    for (int j : g.incident_edges(v))
                        if (cand.contains(j)) { dom = true; break; }
                if (!dom) return false;
            }
            return true;
        }
        default: throw precondition_error("not a graph problem");
    }
}

inline bool feasible(const HittingSetInstance& h, const IndexSet& cand) {
    if (cand.universe() != h.ground_size) throw precondition_error("candidate type mismatch");
    return h.hits_all(cand);
}

/// Minimality / maximality certificate. For SubsetGrowing problems `witnesses` maps
/// each candidate element to its private structure (edge index for VC, closed
/// neighbor for DS, endpoint for EC, dominated edge for EDS, hyperedge for HS) and
/// `offender` names an element without one when not extremal. For SupersetShrinking
/// problems a failing report instead names one addable element.
struct PrivacyReport {
    bool extremal = false;
    std::vector<std::pair<int, int>> witnesses;
    std::optional<int> offender;
    std::optional<int> addable;
};

inline PrivacyReport extremality_with_privacy(ProblemId p, const Graph& g, const IndexSet& cand,
                                              int r = 1) {
    if (!feasible(p, g, cand, r)) throw precondition_error("candidate is infeasible");
    PrivacyReport rep;
    rep.extremal = true;
    switch (p) {
        case ProblemId::VC: {
            for (int v : cand.elements()) {
                std::optional<int> priv;
                for (int k : g.incident_edges(v)) {
                    auto [a, b] = g.edge(k);
                    int other = a == v ? b : a;
                    if (!cand.contains(other)) { priv = k; break; }
                }
                if (!priv) { rep.extremal = false; rep.offender = v; return rep; }
                rep.witnesses.push_back({v, *priv});
            }
            return rep;
        }
        case ProblemId::DS: {
            for (int v : cand.elements()) {
                std::optional<int> priv;
                for (int w : g.closed_neighborhood(v).elements()) {
                    bool only_v = true;
                    for (int d : g.closed_neighborhood(w).elements())
                        if (cand.contains(d) && d != v) { only_v = false; break; }
                    if (only_v) { priv = w; break; }
                }
                if (!priv) { rep.extremal = false; rep.offender = v; return rep; }
                rep.witnesses.push_back({v, *priv});
            }
            return rep;
        }
        case ProblemId::EC: {
            for (int k : cand.elements()) {
                auto [u, v] = g.edge(k);
                std::optional<int> priv;
                for (int endpoint : {u, v}) {
                    int deg = 0;
                    for (int j : g.incident_edges(endpoint))
                        if (cand.contains(j)) ++deg;
                    if (deg == r) { priv = endpoint; break; } // removing k drops it below r
                }
                if (!priv) { rep.extremal = false; rep.offender = k; return rep; }
                rep.witnesses.push_back({k, *priv});
            }
            return rep;
        }
        case ProblemId::EDS: {
            for (int k : cand.elements()) {
                auto [u, v] = g.edge(k);
                std::optional<int> priv;
                for (int f = 0; f < g.edge_count() && !priv; ++f) {
                    auto [x, y] = g.edge(f);
                    bool adj_k = (f == k) || x == u || x == v || y == u || y == v;
                    if (!adj_k) continue;
                    bool other_dominator = false;
                    for (int j : cand.elements()) {
                        if (j == k) continue;
                        auto [a, b] = g.edge(j);
                        if (j == f || a == x || a == y || b == x || b == y) {
                            other_dominator = true;
                            break;
                        }
                    }
                    if (!other_dominator) priv = f;
                }
                if (!priv) { rep.extremal = false; rep.offender = k; return rep; }
                rep.witnesses.push_back({k, *priv});
            }
            return rep;
        }
        case ProblemId::IS: {
            for (int v = 0; v < g.vertex_count(); ++v) {
                if (cand.contains(v)) continue;
                IndexSet bigger = cand;
                bigger.add(v);
                if (feasible(ProblemId::IS, g, bigger)) {
                    rep.extremal = false;
                    rep.addable = v;
                    return rep;
                }
            }
            return rep;
        }
        case ProblemId::EM: {
            for (int k = 0; k < g.edge_count(); ++k) {
                if (cand.contains(k)) continue;
                IndexSet bigger = cand;
                bigger.add(k);
                if (feasible(ProblemId::EM, g, bigger, r)) {
                    rep.extremal = false;
                    rep.addable = k;
                    return rep;
                }
            }
            return rep;
        }
        default: throw precondition_error("not a graph problem");
    }
}

inline PrivacyReport extremality_with_privacy(const HittingSetInstance& h, const IndexSet& cand) {
    if (!feasible(h, cand)) throw precondition_error("candidate is infeasible");
    PrivacyReport rep;
    rep.extremal = true;
    for (int e : cand.elements()) {
        std::optional<int> priv;
        for (size_t i = 0; i < h.hyperedges.size(); ++i) {
            int hits = 0;
            bool has_e = false;
            for (int x : h.hyperedges[i])
                if (cand.contains(x)) { ++hits; has_e = has_e || x == e; }
            if (hits == 1 && has_e) { priv = (int)i; break; }
        }
        if (!priv) { rep.extremal = false; rep.offender = e; return rep; }
        rep.witnesses.push_back({e, *priv});
    }
    return rep;
}

} // namespace extkit
