#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "extkit/treewidth.hpp"
#include "testutil.hpp"

using namespace extkit;

namespace {

Graph path_graph(int n) {
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i + 1 < n; ++i) es.push_back({i, i + 1});
    return Graph(n, es);
}

void check_nice_invariants(const NiceTreeDecomposition& ntd, const Graph& g) {
    REQUIRE(ntd.root == (int)ntd.nodes.size() - 1);
    CHECK(ntd.nodes[ntd.root].bag.empty());
    for (size_t i = 0; i < ntd.nodes.size(); ++i) {
        const NiceNode& nd = ntd.nodes[i];
        switch (nd.kind) {
            case NodeKind::Leaf:
                CHECK(nd.bag.size() == 1);
                CHECK(nd.bag[0] == nd.vertex);
                break;
            case NodeKind::Introduce: {
                const auto& cb = ntd.nodes[nd.child1].bag;
                CHECK(nd.bag.size() == cb.size() + 1);
                CHECK(std::binary_search(nd.bag.begin(), nd.bag.end(), nd.vertex));
                CHECK_FALSE(std::binary_search(cb.begin(), cb.end(), nd.vertex));
                break;
            }
            case NodeKind::Forget: {
                const auto& cb = ntd.nodes[nd.child1].bag;
                CHECK(nd.bag.size() + 1 == cb.size());
                CHECK(std::binary_search(cb.begin(), cb.end(), nd.vertex));
                break;
            }
            case NodeKind::Join:
                CHECK(ntd.nodes[nd.child1].bag == nd.bag);
                CHECK(ntd.nodes[nd.child2].bag == nd.bag);
                break;
        }
    }
    // the structural pass accepts it: vertices forgotten once, edges processed once
    CHECK_NOTHROW(twdetail::Plan::analyze(g, ntd));
}

std::vector<int> identity_order(int n) {
    std::vector<int> o(n);
    std::iota(o.begin(), o.end(), 0);
    return o;
}

} // namespace

TEST_CASE("min-fill widths on the pinned examples") {
    CHECK(compute_tree_decomposition(path_graph(8)).width() == 1);
    Graph k4 = parse_graph("4 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
    CHECK(compute_tree_decomposition(k4).width() == 3);
    CHECK(compute_tree_decomposition(parse_graph("4 0\n")).width() == 0);
}

TEST_CASE("decompositions are valid and nice conversions keep the invariants") {
    testutil::Rng rng(41);
    for (int it = 0; it < 250; ++it) {
        int n = 1 + rng.below(8);
        Graph g = testutil::random_graph(rng, n, 40);
        TreeDecomposition td = compute_tree_decomposition(g);
        REQUIRE(valid_decomposition(td, g));
        NiceTreeDecomposition ntd = to_nice(td, g);
        check_nice_invariants(ntd, g);
        CHECK(ntd.width == td.width());
        CHECK(nice_node_count(ntd) <= 8 * (td.width() + 1) * (n + 1));

        // a second decomposition source: identity elimination order
        TreeDecomposition td2 = decomposition_from_order(g, identity_order(n));
        REQUIRE(valid_decomposition(td2, g));
        check_nice_invariants(to_nice(td2, g), g);
    }
}

TEST_CASE("to_nice on a single two-vertex bag is Leaf then Introduce") {
    Graph k2 = parse_graph("2 1\n1 2\n");
    TreeDecomposition td;
    td.bags = {{0, 1}};
    td.parent = {-1};
    NiceTreeDecomposition ntd = to_nice(td, k2);
    REQUIRE(ntd.nodes.size() == 4); // Leaf a, Introduce b, then two forgets to the empty root
    CHECK(ntd.nodes[0].kind == NodeKind::Leaf);
    CHECK(ntd.nodes[0].vertex == 0);
    CHECK(ntd.nodes[1].kind == NodeKind::Introduce);
    CHECK(ntd.nodes[1].vertex == 1);
    CHECK(ntd.nodes[2].kind == NodeKind::Forget);
    CHECK(ntd.nodes[3].kind == NodeKind::Forget);
}

TEST_CASE("treewidth DPs decide the pinned examples") {
    Graph p3 = path_graph(3), p4 = path_graph(4);
    Graph k3 = parse_graph("3 3\n1 2\n2 3\n1 3\n");
    Graph star = parse_graph("4 3\n1 2\n1 3\n1 4\n");
    Graph p2 = parse_graph("2 1\n1 2\n");
    auto nice = [](const Graph& g) { return to_nice(compute_tree_decomposition(g), g); };

    CHECK(ext_vc_treewidth(p4, IndexSet::of(4, {1, 2}), nice(p4)).answer);
    CHECK_FALSE(ext_vc_treewidth(k3, IndexSet::full(3), nice(k3)).answer);
    CHECK(ext_vc_treewidth(k3, IndexSet(3), nice(k3)).answer);

    CHECK(ext_em_treewidth(p3, IndexSet::of(2, {0}), nice(p3)).answer);
    CHECK_FALSE(ext_em_treewidth(p3, IndexSet(2), nice(p3)).answer);
    CHECK(ext_em_treewidth(p4, IndexSet::of(3, {1}), nice(p4)).answer);

    CHECK(ext_ec_treewidth(p3, IndexSet::full(2), nice(p3)).answer);
    CHECK_FALSE(ext_ec_treewidth(p4, IndexSet::of(3, {1}), nice(p4)).answer);
    CHECK(ext_ec_treewidth(star, IndexSet(3), nice(star)).answer);

    CHECK(ext_eds_treewidth(p3, IndexSet::of(2, {0}), nice(p3)).answer);
    CHECK(ext_eds_treewidth(p2, IndexSet(1), nice(p2)).answer);
    CHECK(ext_eds_treewidth(p4, IndexSet::of(3, {0, 2}), nice(p4)).answer ==
          testutil::bf_ext_graph(ProblemId::EDS, p4, IndexSet::of(3, {0, 2})));

    CHECK(ext_ds_treewidth(p3, IndexSet::of(3, {1}), nice(p3)).answer);
    CHECK_FALSE(ext_ds_treewidth(p3, IndexSet::full(3), nice(p3)).answer);
    CHECK(ext_ds_treewidth(p3, IndexSet(3), nice(p3)).answer);

    CHECK_THROWS_AS(ext_vc_treewidth(p4, IndexSet(4), nice(p3)), precondition_error);
}

TEST_CASE("treewidth DPs match the brute force exhaustively on small graphs") {
    for (int n = 1; n <= 4; ++n) {
        testutil::for_all_graphs(n, [&](const Graph& g) {
            NiceTreeDecomposition ntd = to_nice(compute_tree_decomposition(g), g);
            for (unsigned long long um = 0; um < (1ull << n); ++um) {
                IndexSet u = testutil::set_from_mask(n, um);
                CHECK(ext_vc_treewidth(g, u, ntd).answer ==
                      testutil::bf_ext_graph(ProblemId::VC, g, u));
                CHECK(ext_ds_treewidth(g, u, ntd).answer ==
                      testutil::bf_ext_graph(ProblemId::DS, g, u));
            }
            int m = g.edge_count();
            for (unsigned long long um = 0; um < (1ull << m); ++um) {
                IndexSet u = testutil::set_from_mask(m, um);
                CHECK(ext_em_treewidth(g, u, ntd).answer ==
                      testutil::bf_ext_graph(ProblemId::EM, g, u));
                CHECK(ext_ec_treewidth(g, u, ntd).answer ==
                      testutil::bf_ext_graph(ProblemId::EC, g, u));
                CHECK(ext_eds_treewidth(g, u, ntd).answer ==
                      testutil::bf_ext_graph(ProblemId::EDS, g, u));
            }
        });
    }
}

TEST_CASE("treewidth DP witnesses are sound on random instances") {
    testutil::Rng rng(42);
    for (int it = 0; it < 250; ++it) {
        int n = 1 + rng.below(8);
        Graph g = testutil::random_graph(rng, n, 40, 14);
        NiceTreeDecomposition ntd = to_nice(compute_tree_decomposition(g), g);
        auto check_one = [&](ProblemId p, Verdict v, const IndexSet& u) {
            ExtensionInstance inst{p, Payload(g), Candidate(u), 1};
            CHECK(v.answer == testutil::bf_ext_graph(p, g, u));
            CHECK(testutil::verdict_sound(inst, v));
        };
        IndexSet uv = testutil::random_subset(rng, n, 30);
        check_one(ProblemId::VC, ext_vc_treewidth(g, uv, ntd), uv);
        check_one(ProblemId::DS, ext_ds_treewidth(g, uv, ntd), uv);
        IndexSet ue = testutil::random_subset(rng, g.edge_count(), 30);
        check_one(ProblemId::EC, ext_ec_treewidth(g, ue, ntd), ue);
        check_one(ProblemId::EDS, ext_eds_treewidth(g, ue, ntd), ue);
        IndexSet ua = testutil::random_subset(rng, g.edge_count(), 70);
        check_one(ProblemId::EM, ext_em_treewidth(g, ua, ntd), ua);
    }
}

TEST_CASE("verdicts are identical across different valid decompositions") {
    testutil::Rng rng(43);
    for (int it = 0; it < 120; ++it) {
        int n = 2 + rng.below(6);
        Graph g = testutil::random_graph(rng, n, 45, 12);
        NiceTreeDecomposition a = to_nice(compute_tree_decomposition(g), g);
        std::vector<int> rev = identity_order(n);
        std::reverse(rev.begin(), rev.end());
        NiceTreeDecomposition b = to_nice(decomposition_from_order(g, rev), g);
        IndexSet uv = testutil::random_subset(rng, n, 35);
        CHECK(ext_vc_treewidth(g, uv, a).answer == ext_vc_treewidth(g, uv, b).answer);
        CHECK(ext_ds_treewidth(g, uv, a).answer == ext_ds_treewidth(g, uv, b).answer);
        IndexSet ue = testutil::random_subset(rng, g.edge_count(), 35);
        CHECK(ext_ec_treewidth(g, ue, a).answer == ext_ec_treewidth(g, ue, b).answer);
        CHECK(ext_eds_treewidth(g, ue, a).answer == ext_eds_treewidth(g, ue, b).answer);
        CHECK(ext_em_treewidth(g, ue, a).answer == ext_em_treewidth(g, ue, b).answer);
    }
}

TEST_CASE("table row counts respect the per-alphabet bound") {
    testutil::Rng rng(44);
    for (int it = 0; it < 60; ++it) {
        int n = 2 + rng.below(6);
        Graph g = testutil::random_graph(rng, n, 45, 12);
        NiceTreeDecomposition ntd = to_nice(compute_tree_decomposition(g), g);
        int bag = ntd.width + 1;
        DpStats s;
        ext_ds_treewidth(g, testutil::random_subset(rng, n, 30), ntd, &s);
        CHECK(s.max_rows <= (std::size_t)std::pow(6, bag)); // DS alphabet has 6 states
        DpStats s2;
        ext_eds_treewidth(g, testutil::random_subset(rng, g.edge_count(), 30), ntd, &s2);
        CHECK(s2.max_rows <= (std::size_t)std::pow(7, bag)); // EDS alphabet has 7 states
    }
}

TEST_CASE("decomposition files round trip and drive the DPs") {
    Graph p4 = path_graph(4);
    TreeDecomposition td = compute_tree_decomposition(p4);
    std::ostringstream os;
    serialize_tree_decomposition(os, td, 4);
    std::istringstream in(os.str());
    TreeDecomposition back = parse_tree_decomposition(in, p4);
    CHECK(valid_decomposition(back, p4));
    CHECK(back.width() == td.width());
    CHECK(ext_vc_treewidth(p4, IndexSet::of(4, {1, 2}), to_nice(back, p4)).answer);

    std::istringstream bad("td 1 2 4\nb 1 1 2\n");
    CHECK_THROWS_AS(parse_tree_decomposition(bad, p4), parse_error); // edge 3-4 uncovered
}

TEST_CASE("a 200-vertex path solves instantly at width 1") {
    Graph p = path_graph(200);
    NiceTreeDecomposition ntd = to_nice(compute_tree_decomposition(p), p);
    CHECK(ntd.width == 1);
    IndexSet u(200);
    u.add(9);
    u.add(100);
    DpStats stats;
    auto v = ext_vc_treewidth(p, u, ntd, &stats);
    CHECK(v.answer);
    CHECK(stats.vc_bound_violations == 0); // width-1 tables stay within 2^|bag|
    ExtensionInstance inst{ProblemId::VC, Payload(p), Candidate(u), 1};
    CHECK(feasible(inst, *v.witness));
    CHECK(is_extremal(inst, *v.witness));
}
