#include <doctest.h>

#include "extkit/problems.hpp"
#include "extkit/framework.hpp"
#include "testutil.hpp"

using namespace extkit;

namespace {
const char* kPath3 = "3 2\n1 2\n2 3\n";
const char* kPath4 = "4 3\n1 2\n2 3\n3 4\n";
} // namespace

TEST_CASE("feasibility predicates on the pinned examples") {
    Graph p3 = parse_graph(kPath3);
    CHECK(feasible(ProblemId::VC, p3, IndexSet::of(3, {1})));
    CHECK_FALSE(feasible(ProblemId::DS, p3, IndexSet::of(3, {0})));
    CHECK(feasible(ProblemId::EDS, p3, IndexSet::of(2, {0})));
    CHECK_THROWS_AS(feasible(ProblemId::VC, p3, IndexSet(5)), precondition_error);
}

TEST_CASE("privacy reports carry genuine private structures") {
    Graph p3 = parse_graph(kPath3);
    Graph p4 = parse_graph(kPath4);

    auto vc = extremality_with_privacy(ProblemId::VC, p3, IndexSet::of(3, {1}));
    CHECK(vc.extremal);
    REQUIRE(vc.witnesses.size() == 1);
    CHECK(vc.witnesses[0].first == 1); // vertex b, private edge ab (lowest index)
    CHECK(vc.witnesses[0].second == 0);

    auto ec = extremality_with_privacy(ProblemId::EC, p4, IndexSet::full(3));
    CHECK_FALSE(ec.extremal);
    CHECK(*ec.offender == 1); // bc has no private endpoint

    auto ds = extremality_with_privacy(ProblemId::DS, p3, IndexSet::of(3, {0, 2}));
    CHECK(ds.extremal);
    REQUIRE(ds.witnesses.size() == 2);
    CHECK(ds.witnesses[0] == std::make_pair(0, 0)); // a is its own private neighbor
    CHECK(ds.witnesses[1] == std::make_pair(2, 2));

    auto em = extremality_with_privacy(ProblemId::EM, p4, IndexSet::of(3, {1}));
    CHECK(em.extremal); // {bc} is maximal in P4
    auto em2 = extremality_with_privacy(ProblemId::EM, p4, IndexSet(3));
    CHECK_FALSE(em2.extremal);
    CHECK(em2.addable.has_value());

    CHECK_THROWS_AS(extremality_with_privacy(ProblemId::EC, p4, IndexSet(3)), precondition_error);
}

TEST_CASE("privacy witnesses are touched by exactly one candidate element") {
    testutil::Rng rng(321);
    for (int it = 0; it < 800; ++it) {
        int n = 2 + rng.below(5);
        Graph g = testutil::random_graph(rng, n, 45);
        for (ProblemId p : {ProblemId::VC, ProblemId::DS, ProblemId::EC, ProblemId::EDS}) {
            int ground = vertex_based(p) ? n : g.edge_count();
            IndexSet cand = testutil::random_subset(rng, ground, 60);
            if (!feasible(p, g, cand)) continue;
            auto rep = extremality_with_privacy(p, g, cand);
            if (!rep.extremal) continue;
            for (auto [elem, wit] : rep.witnesses) {
                switch (p) {
                    case ProblemId::VC: { // private edge: elem is its only cover vertex
                        auto [a, b] = g.edge(wit);
                        CHECK((a == elem || b == elem));
                        int other = a == elem ? b : a;
                        CHECK(cand.contains(elem));
                        CHECK_FALSE(cand.contains(other));
                        break;
                    }
                    case ProblemId::DS: { // private closed neighbor
                        int in_count = 0;
                        for (int d : g.closed_neighborhood(wit).elements())
                            if (cand.contains(d)) ++in_count;
                        CHECK(in_count == 1);
                        CHECK(g.closed_neighborhood(wit).contains(elem));
                        break;
                    }
                    case ProblemId::EC: { // private endpoint: degree exactly 1 in cand
                        int deg = 0;
                        for (int k : g.incident_edges(wit))
                            if (cand.contains(k)) ++deg;
                        CHECK(deg == 1);
                        break;
                    }
                    default: { // EDS: witness edge dominated only by elem
                        auto [x, y] = g.edge(wit);
                        int doms = 0;
                        for (int j : cand.elements()) {
                            auto [a, b] = g.edge(j);
                            if (j == wit || a == x || a == y || b == x || b == y) ++doms;
                        }
                        CHECK(doms == 1);
                        break;
                    }
                }
            }
        }
    }
}

TEST_CASE("privacy-based extremality agrees with the framework everywhere in range") {
    for (int n = 1; n <= 5; ++n) {
        testutil::for_all_graphs(n, [&](const Graph& g) {
            for (ProblemId p : {ProblemId::VC, ProblemId::IS, ProblemId::DS}) {
                for (unsigned long long m = 0; m < (1ull << n); ++m) {
                    IndexSet cand = testutil::set_from_mask(n, m);
                    if (!feasible(p, g, cand)) continue;
                    CHECK(extremality_with_privacy(p, g, cand).extremal ==
                          is_extremal(p, Payload(g), Candidate(cand)));
                }
            }
            for (ProblemId p : {ProblemId::EC, ProblemId::EM, ProblemId::EDS}) {
                for (unsigned long long m = 0; m < (1ull << g.edge_count()); ++m) {
                    IndexSet cand = testutil::set_from_mask(g.edge_count(), m);
                    if (!feasible(p, g, cand)) continue;
                    CHECK(extremality_with_privacy(p, g, cand).extremal ==
                          is_extremal(p, Payload(g), Candidate(cand)));
                }
            }
        });
    }
    // 6-vertex graphs: randomized sweep (the full candidate product is out of reach)
    testutil::Rng rng(606);
    for (int it = 0; it < 1500; ++it) {
        Graph g = testutil::random_graph(rng, 6, 40);
        for (ProblemId p : {ProblemId::VC, ProblemId::IS, ProblemId::DS, ProblemId::EC,
                            ProblemId::EM, ProblemId::EDS}) {
            int ground = vertex_based(p) ? 6 : g.edge_count();
            IndexSet cand = testutil::random_subset(rng, ground, 50);
            if (!feasible(p, g, cand)) continue;
            CHECK(extremality_with_privacy(p, g, cand).extremal ==
                  is_extremal(p, Payload(g), Candidate(cand)));
        }
    }
}

TEST_CASE("Ext VC and Ext IS are dual under complementation") {
    for (int n = 1; n <= 5; ++n) {
        testutil::for_all_graphs(n, [&](const Graph& g) {
            for (unsigned long long m = 0; m < (1ull << n); ++m) {
                IndexSet u = testutil::set_from_mask(n, m);
                ExtensionInstance vc{ProblemId::VC, Payload(g), Candidate(u), 1};
                ExtensionInstance is{ProblemId::IS, Payload(g), Candidate(u.complement()), 1};
                CHECK(decide_extension_oracle(vc).answer == decide_extension_oracle(is).answer);
            }
        });
    }
    testutil::Rng rng(607);
    for (int it = 0; it < 500; ++it) {
        Graph g = testutil::random_graph(rng, 6, 40);
        IndexSet u = testutil::random_subset(rng, 6, 50);
        ExtensionInstance vc{ProblemId::VC, Payload(g), Candidate(u), 1};
        ExtensionInstance is{ProblemId::IS, Payload(g), Candidate(u.complement()), 1};
        CHECK(decide_extension_oracle(vc).answer == decide_extension_oracle(is).answer);
    }
}

TEST_CASE("hitting set parsing, privacy and the pinned examples") {
    HittingSetInstance h = parse_hitting_set("3 2\n2 1 2\n1 3\n");
    CHECK(h.ground_size == 3);
    REQUIRE(h.hyperedges.size() == 2);
    CHECK(h.hyperedges[1] == std::vector<int>{2});
    CHECK_THROWS_AS(parse_hitting_set("2 1\n1 5\n"), parse_error);

    auto rep = extremality_with_privacy(h, IndexSet::of(3, {0, 2}));
    CHECK(rep.extremal);
    for (auto [e, s] : rep.witnesses) {
        int hits = 0;
        for (int x : h.hyperedges[s])
            if (IndexSet::of(3, {0, 2}).contains(x)) ++hits;
        CHECK(hits == 1);
    }

    // redundant element: {1,2} hits both sets, 2 also alone suffices for set 1
    HittingSetInstance h2(2, {{0, 1}});
    auto rep2 = extremality_with_privacy(h2, IndexSet::full(2));
    CHECK_FALSE(rep2.extremal);
}
