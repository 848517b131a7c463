#include <doctest.h>

#include <set>
#include <sstream>

#include "extkit/reductions.hpp"
#include "extkit/treewidth.hpp"
#include "testutil.hpp"

using namespace extkit;

namespace {

// a satisfiable handcrafted (3,B2) instance: n=3, m=4, every variable 2+/2-
const char* kSat3 =
    "p cnf 3 4\n1 2 3 0\n1 2 -3 0\n-1 -2 3 0\n-1 -2 -3 0\n";

Verdict decide_reduced(const ExtensionInstance& inst) {
    const Graph& g = std::get<Graph>(inst.payload);
    NiceTreeDecomposition ntd = to_nice(compute_tree_decomposition(g), g);
    const IndexSet& u = std::get<IndexSet>(inst.presolution);
    switch (inst.problem) {
        case ProblemId::EC: return ext_ec_treewidth(g, u, ntd);
        case ProblemId::EM: return ext_em_treewidth(g, u, ntd);
        case ProblemId::DS: return ext_ds_treewidth(g, u, ntd);
        case ProblemId::EDS: return ext_eds_treewidth(g, u, ntd);
        default: throw std::logic_error("unexpected target");
    }
}

void check_shape(const ReducedInstance& red, ReductionTarget target, int n, int m) {
    const Graph& g = std::get<Graph>(red.instance.payload);
    CHECK(g.is_bipartite().has_value());
    CHECK(g.max_degree() <= 3);
    const IndexSet& u = std::get<IndexSet>(red.instance.presolution);
    switch (target) {
        case ReductionTarget::EXT_EC: {
            CHECK(g.vertex_count() == m + 5 * n);
            CHECK(g.edge_count() == 3 * m + 4 * n);
            CHECK(feasible(ProblemId::EM, g, u, 1)); // the pre-solution is a matching
            break;
        }
        case ReductionTarget::EXT_DS: { // G[U] is an induced matching
            Graph gu = g.induced_subgraph(u);
            CHECK(gu.max_degree() <= 1);
            break;
        }
        case ReductionTarget::EXT_EDS: { // (V,U) is an induced collection of P3
            Graph pu = g.partial_graph(u);
            std::vector<int> comp(pu.vertex_count(), -1);
            int nc = 0;
            for (int v = 0; v < pu.vertex_count(); ++v) {
                if (comp[v] != -1 || pu.degree(v) == 0) continue;
                std::vector<int> stack{v}, members;
                comp[v] = nc;
                while (!stack.empty()) {
                    int x = stack.back();
                    stack.pop_back();
                    members.push_back(x);
                    for (int w : pu.neighbors(x))
                        if (comp[w] == -1) { comp[w] = nc; stack.push_back(w); }
                }
                ++nc;
                CHECK(members.size() == 3); // every component is a path on 3 vertices
                int deg2 = 0;
                for (int x : members) {
                    CHECK(pu.degree(x) <= 2);
                    deg2 += pu.degree(x) == 2;
                }
                CHECK(deg2 == 1);
            }
            // induced: the U-vertices carry no extra edges of G among them
            IndexSet uverts = g.vertices_of(u);
            CHECK(g.induced_subgraph(uverts).edge_count() == u.count());
            break;
        }
        case ReductionTarget::EXT_EM: {
            CHECK(g.vertex_count() == 8 * m + 12 * n);
            CHECK(g.edge_count() == 7 * m + 11 * n + 3 * m);
            break;
        }
    }
}

} // namespace

TEST_CASE("the (3,B2) validator accepts and rejects per constraint") {
    Cnf good = parse_dimacs(kSat3);
    CHECK_NOTHROW(validate_3b2sat(good));

    Cnf short_clause = parse_dimacs("p cnf 3 1\n1 2 0\n");
    CHECK_THROWS_AS(validate_3b2sat(short_clause), precondition_error);

    // variable 1 occurs three times unnegated, once negated
    Cnf unbalanced = parse_dimacs("p cnf 3 4\n1 2 3 0\n1 2 -3 0\n1 -2 3 0\n-1 -2 -3 0\n");
    CHECK_THROWS_AS(validate_3b2sat(unbalanced), precondition_error);

    Cnf repeated = parse_dimacs("p cnf 3 1\n1 -1 2 0\n");
    CHECK_THROWS_AS(validate_3b2sat(repeated), precondition_error);
}

TEST_CASE("the sat oracle is exhaustive and deterministic") {
    Cnf f = parse_dimacs("p cnf 2 2\n1 2 0\n-1 2 0\n");
    auto a = sat_oracle(f);
    REQUIRE(a.has_value());
    CHECK((*a)[1] == true); // y must hold
    CHECK(f.satisfied_by(*a));

    Cnf contradiction = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n");
    CHECK_FALSE(sat_oracle(contradiction).has_value());

    Cnf empty = parse_dimacs("p cnf 0 0\n");
    CHECK(sat_oracle(empty).has_value());

    Cnf big;
    big.vars = 21;
    CHECK_THROWS_AS(sat_oracle(big), size_limit_error);
}

TEST_CASE("the generator emits valid seed-deterministic instances") {
    auto a = gen_3b2sat(3, 7);
    CHECK(a.clause_count() == 4);
    auto b = gen_3b2sat(6, 7);
    CHECK(b.clause_count() == 8);
    auto c = gen_3b2sat(3, 7);
    CHECK(a.formula.clauses == c.formula.clauses);
    CHECK_THROWS_AS(gen_3b2sat(4, 7), precondition_error);
    CHECK_THROWS_AS(gen_3b2sat(0, 7), precondition_error);
}

TEST_CASE("gadget images have the exact shapes the theorems state") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        for (int n : {3, 6}) {
            auto src = gen_3b2sat(n, seed);
            int m = src.clause_count();
            for (auto t : {ReductionTarget::EXT_EC, ReductionTarget::EXT_EM,
                           ReductionTarget::EXT_DS, ReductionTarget::EXT_EDS})
                check_shape(reduce_3b2sat(src, t), t, n, m);
        }
    }
}

TEST_CASE("satisfiability transfers through all four gadgets") {
    // a couple of fixed seeds here; the acceptance suite runs the 50-seed batch
    for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
        auto src = gen_3b2sat(3, seed);
        bool sat = sat_oracle(src.formula).has_value();
        for (auto t : {ReductionTarget::EXT_EC, ReductionTarget::EXT_EM, ReductionTarget::EXT_DS,
                       ReductionTarget::EXT_EDS}) {
            auto red = reduce_3b2sat(src, t);
            CHECK(decide_reduced(red.instance).answer == sat);
        }
    }
    auto known_sat = validate_3b2sat(parse_dimacs(kSat3));
    CHECK(sat_oracle(known_sat.formula).has_value());
    for (auto t : {ReductionTarget::EXT_EC, ReductionTarget::EXT_EM, ReductionTarget::EXT_DS,
                   ReductionTarget::EXT_EDS})
        CHECK(decide_reduced(reduce_3b2sat(known_sat, t).instance).answer);
}

TEST_CASE("hitting set to dominating set keeps verdicts and shifts the parameter by 3") {
    HittingSetInstance h1(2, {{0}, {1}});
    auto r1 = reduce_hs_to_ext_ds(h1, IndexSet(2));
    CHECK(std::get<IndexSet>(r1.instance.presolution).count() == 3); // |U| + 3
    CHECK(decide_extension_oracle(r1.instance).answer == testutil::bf_ext_hs(h1, IndexSet(2)));
    CHECK(decide_extension_oracle(r1.instance).answer);

    HittingSetInstance h2(2, {{0, 1}});
    auto r2 = reduce_hs_to_ext_ds(h2, IndexSet::full(2));
    CHECK(std::get<IndexSet>(r2.instance.presolution).count() == 2 + 3);
    CHECK_FALSE(decide_extension_oracle(r2.instance).answer);
    CHECK_FALSE(testutil::bf_ext_hs(h2, IndexSet::full(2)));

    testutil::Rng rng(61);
    for (int it = 0; it < 60; ++it) {
        int n = 1 + rng.below(3), m = 1 + rng.below(3);
        std::vector<std::vector<int>> sets;
        for (int j = 0; j < m; ++j) {
            std::vector<int> s;
            for (int e = 0; e < n; ++e)
                if (rng.chance(1, 2)) s.push_back(e);
            if (s.empty()) s.push_back(rng.below(n));
            sets.push_back(s);
        }
        HittingSetInstance h(n, sets);
        IndexSet u = testutil::random_subset(rng, n, 35);
        auto red = reduce_hs_to_ext_ds(h, u);
        CHECK(std::get<IndexSet>(red.instance.presolution).count() == u.count() + 3);
        const Graph& g = std::get<Graph>(red.instance.payload);
        CHECK(g.is_bipartite().has_value());
        bool image = g.vertex_count() <= 16
                         ? decide_extension_oracle(red.instance).answer
                         : ext_ds_treewidth(g, std::get<IndexSet>(red.instance.presolution),
                                            to_nice(compute_tree_decomposition(g), g))
                               .answer;
        CHECK(image == testutil::bf_ext_hs(h, u));
    }
}

TEST_CASE("vertex cover to edge dominating set keeps verdicts and shifts by 2") {
    Graph p3 = parse_graph("3 2\n1 2\n2 3\n");
    auto r1 = reduce_extvc_to_exteds(p3, IndexSet::of(3, {1}));
    CHECK(std::get<IndexSet>(r1.instance.presolution).count() == 1 + 2);
    CHECK(decide_extension_oracle(r1.instance).answer);

    Graph k2 = parse_graph("2 1\n1 2\n");
    auto r2 = reduce_extvc_to_exteds(k2, IndexSet::full(2));
    CHECK(std::get<IndexSet>(r2.instance.presolution).count() == 2 + 2);
    CHECK_FALSE(decide_extension_oracle(r2.instance).answer);

    Graph k3 = parse_graph("3 3\n1 2\n2 3\n1 3\n");
    CHECK_THROWS_AS(reduce_extvc_to_exteds(k3, IndexSet(3)), precondition_error);

    testutil::Rng rng(62);
    int done = 0;
    for (int it = 0; it < 300 && done < 60; ++it) {
        int n = 2 + rng.below(4);
        Graph g = testutil::random_graph(rng, n, 40);
        if (!g.is_bipartite()) continue;
        IndexSet u = testutil::random_subset(rng, n, 40);
        auto red = reduce_extvc_to_exteds(g, u);
        CHECK(std::get<IndexSet>(red.instance.presolution).count() == u.count() + 2);
        CHECK(std::get<Graph>(red.instance.payload).is_bipartite().has_value());
        CHECK(decide_extension_oracle(red.instance).answer ==
              testutil::bf_ext_graph(ProblemId::VC, g, u));
        ++done;
    }
    CHECK(done == 60);
}

TEST_CASE("3-partition reduces to Ext BP and the image stays exact") {
    ThreePartitionInstance all3s({3, 3, 3, 3, 3, 3}, 9);
    auto inst = reduce_3partition_to_ext_bp(all3s);
    const BpInstance& bi = std::get<BpInstance>(inst.payload);
    REQUIRE(bi.item_count() == 7);
    CHECK(bi.weights[0] == Rational(2, 3));
    CHECK(bi.weights[1] == Rational(1, 3));
    CHECK(three_partition_brute(all3s));
    CHECK(ext_bp_oracle(bi, std::get<Partition>(inst.presolution)).answer);
    CHECK(ext_bp_dp(bi, std::get<Partition>(inst.presolution)).answer);

    CHECK_THROWS_AS(ThreePartitionInstance({3, 3, 3}, 10), precondition_error); // sum != m*b
    CHECK_THROWS_AS(ThreePartitionInstance({5, 2, 3}, 10), precondition_error); // s = b/2
    CHECK_THROWS_AS(ThreePartitionInstance({3, 3}, 6), precondition_error);
}

TEST_CASE("the bin packing image can be a yes when 3-partition is a no (m >= 2)") {
    // documented divergence of the construction: {4,4,4,4,4,6} with b=13 has no
    // triple partition, but the image admits the minimal refinement
    // {x0 | 12/13 | 8/13 | 6/13} with more than m bins, pairwise unmergeable
    ThreePartitionInstance tp({4, 4, 4, 4, 4, 6}, 13);
    CHECK_FALSE(three_partition_brute(tp));
    auto inst = reduce_3partition_to_ext_bp(tp);
    const BpInstance& bi = std::get<BpInstance>(inst.payload);
    const Partition& pu = std::get<Partition>(inst.presolution);
    CHECK(ext_bp_oracle(bi, pu).answer);
    CHECK(ext_bp_dp(bi, pu).answer);
    Partition counter(std::vector<std::vector<int>>{{0}, {1, 2, 3}, {4, 5}, {6}});
    CHECK(counter.refines(pu));
    CHECK(is_feasible_partition(bi, counter));
    CHECK(all_pairs_merge_minimal(bi, counter));
}

TEST_CASE("the reserved planar targets refuse to run") {
    auto src = gen_3b2sat(3, 1);
    CHECK_THROWS_AS(reduce_3b2sat(src, ReductionTarget::EXT_EC_PLANAR), precondition_error);
}

TEST_CASE("the tautology demo matches its order-theoretic reading") {
    CHECK(ext_tautology_demo(parse_dimacs("p cnf 1 1\n1 -1 0\n")).answer);
    CHECK_FALSE(ext_tautology_demo(parse_dimacs("p cnf 1 1\n1 0\n")).answer);
    Cnf contra = parse_dimacs("p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n");
    CHECK_THROWS_AS(ext_tautology_demo(contra), precondition_error);
}

TEST_CASE("instance files round trip through write and parse") {
    auto src = gen_3b2sat(3, 5);
    auto red = reduce_3b2sat(src, ReductionTarget::EXT_EC);
    std::ostringstream os;
    write_instance_file(os, red.instance, red.vertex_names);
    CHECK(os.str().rfind("# ext-ec\n", 0) == 0);
    std::istringstream in(os.str());
    ExtensionInstance back = parse_instance_file(in);
    CHECK(back.problem == ProblemId::EC);
    const Graph& g0 = std::get<Graph>(red.instance.payload);
    const Graph& g1 = std::get<Graph>(back.payload);
    CHECK(g1.vertex_count() == g0.vertex_count());
    CHECK(g1.edge_count() == g0.edge_count());
    CHECK(std::get<IndexSet>(back.presolution) == std::get<IndexSet>(red.instance.presolution));

    auto bp = reduce_3partition_to_ext_bp(ThreePartitionInstance({3, 3, 3, 3, 3, 3}, 9));
    std::ostringstream os2;
    write_instance_file(os2, bp);
    std::istringstream in2(os2.str());
    ExtensionInstance back2 = parse_instance_file(in2);
    CHECK(back2.problem == ProblemId::BP);
    CHECK(std::get<BpInstance>(back2.payload).weights == std::get<BpInstance>(bp.payload).weights);
}
