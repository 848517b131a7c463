#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "problems.hpp"

namespace extkit {

/// A candidate or pre-solution: an element set (vertices, edges or ground
/// elements), an item partition, or a truth assignment.
using Candidate = std::variant<IndexSet, Partition, std::vector<bool>>;

using Payload = std::variant<Graph, HittingSetInstance, BpInstance, Cnf>;

struct ExtensionInstance {
    ProblemId problem;
    Payload payload;
    Candidate presolution;
    int r = 1; // degree bound; meaningful for EM (r-DCPS) and EC (r-EC) only
};

struct Verdict {
    bool answer = false;
    std::optional<Candidate> witness;
};

struct OracleLimits {
    int vertex_cap = 16;     // graph payloads
    int bp_item_cap = 10;    // bin packing payloads
    int sat_var_cap = 20;    // tautology payloads
    long long enum_guard = 1ll << 24;
};

inline bool feasible(const ExtensionInstance& inst, const Candidate& cand) {
    switch (inst.problem) {
        case ProblemId::HS:
            return feasible(std::get<HittingSetInstance>(inst.payload), std::get<IndexSet>(cand));
        case ProblemId::BP:
            return is_feasible_partition(std::get<BpInstance>(inst.payload), std::get<Partition>(cand));
        case ProblemId::SAT_TAU:
            return true; // sol(F) = presol(F): every assignment is a solution
        default:
            return feasible(inst.problem, std::get<Graph>(inst.payload), std::get<IndexSet>(cand),
                            inst.r);
    }
}

/// m(I, x): cardinality for set problems, block count for partitions, constant 1
/// for the tautology order. Monotone along the instance order, one fixed
/// direction per problem.
inline Rational value(const Candidate& cand) {
    if (std::holds_alternative<IndexSet>(cand)) return Rational(std::get<IndexSet>(cand).count());
    if (std::holds_alternative<Partition>(cand))
        return Rational((std::int64_t)std::get<Partition>(cand).blocks.size());
    return Rational(1);
}

/// y <=_I z in the instance order.
inline bool order_leq(const ExtensionInstance& inst, const Candidate& y, const Candidate& z) {
    switch (order_direction(inst.problem)) {
        case OrderDirection::SubsetGrowing:
            return std::get<IndexSet>(y).subset_of(std::get<IndexSet>(z));
        case OrderDirection::SupersetShrinking:
            return std::get<IndexSet>(z).subset_of(std::get<IndexSet>(y));
        case OrderDirection::PartitionRefining:
            return std::get<Partition>(z).refines(std::get<Partition>(y));
    }
    return false;
}

inline int ground_size(const ExtensionInstance& inst) {
    if (inst.problem == ProblemId::HS) return std::get<HittingSetInstance>(inst.payload).ground_size;
    const Graph& g = std::get<Graph>(inst.payload);
    return vertex_based(inst.problem) ? g.vertex_count() : g.edge_count();
}

inline void check_presolution(const ExtensionInstance& inst) {
    switch (inst.problem) {
        case ProblemId::BP: {
            auto& bi = std::get<BpInstance>(inst.payload);
            if (!std::get<Partition>(inst.presolution).valid_for(bi.item_count()))
                throw precondition_error("pre-solution is not a partition of the items");
            return;
        }
        case ProblemId::SAT_TAU: {
            auto& f = std::get<Cnf>(inst.payload);
            if ((int)std::get<std::vector<bool>>(inst.presolution).size() != f.vars)
                throw precondition_error("assignment length does not match variable count");
            return;
        }
        default:
            if (std::get<IndexSet>(inst.presolution).universe() != ground_size(inst))
                throw precondition_error("pre-solution universe does not match the instance");
    }
}

/// Extremality via single-step moves, justified by upward closure of the solution
/// set: for SubsetGrowing orders a feasible candidate is minimal iff removing any
/// single element breaks feasibility (a feasible strict predecessor S' < S would make
/// every superset of S' feasible, in particular one with a single element removed);
/// dually for SupersetShrinking via single additions, and for partitions via
/// pairwise block merges.
inline bool is_extremal(ProblemId p, const Payload& payload, const Candidate& cand, int r = 1) {
    switch (p) {
        case ProblemId::BP:
            return is_minimal_partition(std::get<BpInstance>(payload), std::get<Partition>(cand));
        case ProblemId::SAT_TAU: {
            // minimal iff no assignment phi != psi with phi <= psi, i.e. no
            // non-satisfying assignment exists while psi satisfies F
            auto& f = std::get<Cnf>(payload);
            auto& psi = std::get<std::vector<bool>>(cand);
            if (!f.satisfied_by(psi)) return true; // nothing lies below a non-solution
            std::vector<bool> phi(f.vars, false);
            for (long long mask = 0; mask < (1ll << f.vars); ++mask) {
                for (int i = 0; i < f.vars; ++i) phi[i] = mask >> i & 1;
                if (phi != psi && !f.satisfied_by(phi)) return false;
            }
            return true;
        }
        case ProblemId::HS: {
            auto& h = std::get<HittingSetInstance>(payload);
            auto& s = std::get<IndexSet>(cand);
            if (!feasible(h, s)) throw precondition_error("candidate is infeasible");
            for (int e : s.elements()) {
                IndexSet smaller = s;
                smaller.remove(e);
                if (feasible(h, smaller)) return false;
            }
            return true;
        }
        default: {
            auto& g = std::get<Graph>(payload);
            auto& s = std::get<IndexSet>(cand);
            if (!feasible(p, g, s, r)) throw precondition_error("candidate is infeasible");
            if (order_direction(p) == OrderDirection::SubsetGrowing) {
                for (int e : s.elements()) {
                    IndexSet smaller = s;
                    smaller.remove(e);
                    if (feasible(p, g, smaller, r)) return false;
                }
                return true;
            }
            for (int e = 0; e < s.universe(); ++e) {
                if (s.contains(e)) continue;
                IndexSet bigger = s;
                bigger.add(e);
                if (feasible(p, g, bigger, r)) return false;
            }
            return true;
        }
    }
}

inline bool is_extremal(const ExtensionInstance& inst, const Candidate& cand) {
    return is_extremal(inst.problem, inst.payload, cand, inst.r);
}

namespace detail {

/// Streams the candidates above `base` (supersets for SubsetGrowing, subsets for
/// SupersetShrinking) in lexicographic order of their sorted element lists: a DFS
/// that emits each set before its extensions and appends elements in ascending
/// order, never skipping past a forced element. The visitor returns false to stop.
/// Throws size_limit_error once more than `enum_guard` candidates were emitted.
inline void enumerate_above(const IndexSet& base, OrderDirection dir, long long enum_guard,
                            const std::function<bool(const IndexSet&)>& visit) {
    bool growing = dir == OrderDirection::SubsetGrowing;
    int n = base.universe();
    IndexSet current(n);
    long long emitted = 0;
    bool stopped = false;

    // growing: every element is available, base elements are mandatory;
    // shrinking: only base elements are available, none mandatory
    auto available = [&](int e) { return growing || base.contains(e); };
    auto forced = [&](int e) { return growing && base.contains(e); };

    std::function<void(int)> gen = [&](int last) {
        if (stopped) return;
        int next_forced = n;
        for (int e = last + 1; e < n; ++e)
            if (forced(e)) { next_forced = e; break; }
        if (next_forced == n) {
            if (++emitted > enum_guard) throw size_limit_error("candidate enumeration too large");
            if (!visit(current)) { stopped = true; return; }
        }
        for (int e = last + 1; e <= next_forced && e < n && !stopped; ++e) {
            if (!available(e)) continue;
            current.add(e);
            gen(e);
            current.remove(e);
        }
    };
    gen(-1);
}

/// All refinements of pi_u in canonical restricted-growth-string order.
inline std::vector<Partition> refinements_of(const Partition& pi_u, int n) {
    std::vector<Partition> out;
    if (n == 0) { out.push_back(Partition{}); return out; }
    std::vector<int> rgs(n, 0);
    while (true) {
        int blocks = 1 + *std::max_element(rgs.begin(), rgs.end());
        std::vector<std::vector<int>> bs(blocks);
        for (int i = 0; i < n; ++i) bs[rgs[i]].push_back(i);
        Partition cand(std::move(bs));
        if (cand.refines(pi_u)) out.push_back(std::move(cand));
        int i = n - 1;
        for (; i > 0; --i) {
            int mx = 0;
            for (int j = 0; j < i; ++j) mx = std::max(mx, rgs[j]);
            if (rgs[i] <= mx) { ++rgs[i]; break; }
            rgs[i] = 0;
        }
        if (i == 0) break;
    }
    return out;
}

inline Verdict decide_by_enumeration(const ExtensionInstance& inst, long long enum_guard) {
    check_presolution(inst);
    if (inst.problem == ProblemId::BP) {
        auto& bi = std::get<BpInstance>(inst.payload);
        for (auto& cand : refinements_of(std::get<Partition>(inst.presolution), bi.item_count())) {
            if (is_feasible_partition(bi, cand) && all_pairs_merge_minimal(bi, cand))
                return {true, Candidate(cand)};
        }
        return {false, std::nullopt};
    }
    if (inst.problem == ProblemId::SAT_TAU) {
        auto& f = std::get<Cnf>(inst.payload);
        auto& psi = std::get<std::vector<bool>>(inst.presolution);
        if (!f.satisfied_by(psi))
            throw precondition_error("pre-solution assignment must satisfy the formula");
        // candidates above psi are psi itself plus satisfying assignments when psi
        // does not satisfy F; here psi satisfies F, so ext != empty iff psi is minimal
        if (is_extremal(inst, inst.presolution)) return {true, inst.presolution};
        return {false, std::nullopt};
    }
    Verdict out;
    enumerate_above(std::get<IndexSet>(inst.presolution), order_direction(inst.problem),
                    enum_guard, [&](const IndexSet& cand) {
                        Candidate c(cand);
                        if (feasible(inst, c) && is_extremal(inst, c)) {
                            out = {true, std::move(c)};
                            return false;
                        }
                        return true;
                    });
    return out;
}

} // namespace detail

/// Ground-truth extension decider by exhaustive enumeration of all candidates above
/// the pre-solution, in a fixed lexicographic order. Guarded by size caps.
inline Verdict decide_extension_oracle(const ExtensionInstance& inst,
                                       const OracleLimits& limits = {}) {
    switch (inst.problem) {
        case ProblemId::BP:
            if (std::get<BpInstance>(inst.payload).item_count() > limits.bp_item_cap)
                throw size_limit_error("oracle cap exceeded: more than " +
                                       std::to_string(limits.bp_item_cap) + " items");
            break;
        case ProblemId::SAT_TAU:
            if (std::get<Cnf>(inst.payload).vars > limits.sat_var_cap)
                throw size_limit_error("oracle cap exceeded: more than " +
                                       std::to_string(limits.sat_var_cap) + " variables");
            break;
        case ProblemId::HS:
            if (std::get<HittingSetInstance>(inst.payload).ground_size > limits.vertex_cap)
                throw size_limit_error("oracle cap exceeded: ground set larger than " +
                                       std::to_string(limits.vertex_cap));
            break;
        default:
            if (std::get<Graph>(inst.payload).vertex_count() > limits.vertex_cap)
                throw size_limit_error("oracle cap exceeded: more than " +
                                       std::to_string(limits.vertex_cap) + " vertices");
    }
    return detail::decide_by_enumeration(inst, limits.enum_guard);
}

/// Dual-parameter FPT decider: lists exactly the candidates above the pre-solution
/// (supersets, O(2^{|X|-|U|}); partition refinements) and tests feasibility plus
/// extremality. Only SubsetGrowing and PartitionRefining orders qualify.
inline Verdict decide_extension_dual_fpt(const ExtensionInstance& inst) {
    auto dir = order_direction(inst.problem);
    if (dir == OrderDirection::SupersetShrinking || inst.problem == ProblemId::SAT_TAU)
        throw unsupported_direction_error(
            "dual enumeration needs a SubsetGrowing or PartitionRefining order");
    return detail::decide_by_enumeration(inst, 1ll << 28);
}

/// Wraps a hitting-set instance for the framework deciders.
inline ExtensionInstance hs_to_instance(const HittingSetInstance& h, const IndexSet& u) {
    if (u.universe() != h.ground_size) throw precondition_error("pre-solution element out of range");
    return ExtensionInstance{ProblemId::HS, Payload(h), Candidate(u), 1};
}

inline OracleLimits limits_from_env() {
    OracleLimits lim;
    if (const char* cap = std::getenv("EXTKIT_CAP")) {
        int v = std::atoi(cap);
        if (v > 0) lim.vertex_cap = v;
    }
    return lim;
}

} // namespace extkit
