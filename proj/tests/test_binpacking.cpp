#include <doctest.h>

#include <sstream>

#include "extkit/binpacking.hpp"
#include "testutil.hpp"

using namespace extkit;

namespace {

BpInstance items(std::initializer_list<Rational> ws) { return BpInstance(std::vector<Rational>(ws)); }

Partition blocks(std::initializer_list<std::vector<int>> bs) {
    return Partition(std::vector<std::vector<int>>(bs));
}

/// Independent refinement enumeration for tiny instances (block assignments).
bool bf_ext_bp(const BpInstance& bi, const Partition& pu) {
    int n = bi.item_count();
    if (n == 0) return true;
    std::vector<int> assign(n, 0);
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == n) {
            int blocks_n = 0;
            for (int a : assign) blocks_n = std::max(blocks_n, a + 1);
            std::vector<std::vector<int>> bs(blocks_n);
            for (int j = 0; j < n; ++j) bs[assign[j]].push_back(j);
            for (auto& b : bs)
                if (b.empty()) return false;
            Partition cand(bs);
            return cand.refines(pu) && is_feasible_partition(bi, cand) &&
                   all_pairs_merge_minimal(bi, cand);
        }
        for (int b = 0; b < n; ++b) {
            assign[i] = b;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

Rational random_weight(testutil::Rng& rng) {
    int q = 2 + rng.below(12);
    int p = 1 + rng.below(q - 1);
    return Rational(p, q);
}

Partition random_partition(testutil::Rng& rng, int n) {
    std::vector<std::vector<int>> bs;
    for (int i = 0; i < n; ++i) {
        if (bs.empty() || rng.chance(1, 2)) bs.push_back({i});
        else bs[rng.below((int)bs.size())].push_back(i);
    }
    return Partition(bs);
}

} // namespace

TEST_CASE("rationals are exact") {
    Rational third(1, 3);
    CHECK(third + third + third == Rational(1));
    CHECK(Rational::parse("0.6") == Rational(3, 5));
    CHECK(Rational::parse("7/21") == Rational(1, 3));
    CHECK(Rational(1, 2) < Rational(2, 3));
    CHECK(Rational(-1, -2) == Rational(1, 2));
    CHECK_THROWS_AS(Rational::parse("abc"), parse_error);
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("weights must lie strictly inside (0,1)") {
    CHECK_THROWS_AS(items({Rational(1)}), precondition_error);
    CHECK_THROWS_AS(items({Rational(0)}), precondition_error);
    CHECK_NOTHROW(items({Rational(1, 2)}));
}

TEST_CASE("feasibility and minimality on the pinned examples") {
    BpInstance two = items({Rational(3, 5), Rational(3, 5)});
    CHECK(is_feasible_partition(two, blocks({{0}, {1}})));
    CHECK_FALSE(is_feasible_partition(two, blocks({{0, 1}})));
    BpInstance thirds = items({Rational(1, 3), Rational(1, 3), Rational(1, 3)});
    CHECK(is_feasible_partition(thirds, blocks({{0, 1, 2}}))); // sums to exactly 1

    CHECK(is_minimal_partition(two, blocks({{0}, {1}}))); // merge weight 6/5 > 1
    BpInstance small = items({Rational(1, 3), Rational(1, 3)});
    CHECK_FALSE(is_minimal_partition(small, blocks({{0}, {1}})));
    CHECK(is_minimal_partition(small, blocks({{0, 1}}))); // single block, by convention
    CHECK_THROWS_AS(is_minimal_partition(two, blocks({{0, 1}})), precondition_error);
}

TEST_CASE("the two-lightest shortcut equals the all-pairs merge check") {
    testutil::Rng rng(51);
    for (int it = 0; it < 600; ++it) {
        int n = 1 + rng.below(7);
        std::vector<Rational> ws;
        for (int i = 0; i < n; ++i) ws.push_back(random_weight(rng));
        BpInstance bi(ws);
        Partition pi = random_partition(rng, n);
        if (!is_feasible_partition(bi, pi)) continue;
        CHECK(is_minimal_partition(bi, pi) == all_pairs_merge_minimal(bi, pi));
    }
}

TEST_CASE("delta candidates on the pinned examples") {
    auto d1 = delta_candidates(items({Rational(3, 5), Rational(3, 5)}));
    REQUIRE(d1.size() == 1);
    CHECK(d1[0] == Rational(2, 5));
    CHECK(delta_candidates(items({Rational(1, 3)})).empty());
    // sorted ascending, exact, includes 0 exactly when a subset sums to 1
    auto d2 = delta_candidates(items({Rational(1, 2), Rational(1, 2), Rational(2, 3)}));
    CHECK(std::is_sorted(d2.begin(), d2.end()));
    CHECK(d2.front() == Rational(0));
}

TEST_CASE("oracle decides the pinned examples") {
    BpInstance one = items({Rational(2, 5), Rational(2, 5)});
    auto v = ext_bp_oracle(one, blocks({{0, 1}}));
    CHECK(v.answer);
    CHECK(*v.witness == blocks({{0, 1}})); // the coarsest refinement is minimal

    BpInstance sevens = items({Rational(7, 10), Rational(7, 10), Rational(7, 10)});
    CHECK(ext_bp_oracle(sevens, blocks({{0, 1}, {2}})).answer); // forced split is minimal

    BpInstance tiny = items({Rational(1, 5), Rational(1, 5)});
    CHECK_FALSE(ext_bp_oracle(tiny, blocks({{0}, {1}})).answer);

    CHECK_THROWS_AS(ext_bp_oracle(BpInstance(std::vector<Rational>(11, Rational(1, 2))),
                                  Partition::singletons(11)),
                    size_limit_error);
}

TEST_CASE("the subset DP equals the oracle and its witnesses are sound") {
    testutil::Rng rng(52);
    int compared = 0;
    for (int it = 0; it < 400; ++it) {
        int n = 1 + rng.below(8);
        std::vector<Rational> ws;
        for (int i = 0; i < n; ++i) ws.push_back(random_weight(rng));
        BpInstance bi(ws);
        Partition pu = random_partition(rng, n);
        auto dp = ext_bp_dp(bi, pu);
        auto oracle = ext_bp_oracle(bi, pu);
        CHECK(dp.answer == oracle.answer);
        ++compared;
        if (dp.answer) {
            CHECK(dp.witness->refines(pu));
            CHECK(is_feasible_partition(bi, *dp.witness));
            CHECK(is_minimal_partition(bi, *dp.witness));
        }
        if (n <= 5) CHECK(dp.answer == bf_ext_bp(bi, pu));
    }
    CHECK(compared == 400);
}

TEST_CASE("bp files round trip") {
    BpInstance bi = items({Rational(2, 3), Rational(1, 3), Rational(3, 10)});
    Partition pu = blocks({{0}, {1, 2}});
    std::ostringstream os;
    serialize_bp(os, bi, pu);
    std::istringstream in(os.str());
    auto [bi2, pu2] = parse_bp(in);
    CHECK(bi2.item_count() == 3);
    CHECK(bi2.weights[0] == Rational(2, 3));
    CHECK(pu2 == pu);
    std::istringstream bad("2\n1/2 1/2\n1\n");
    CHECK_THROWS_AS(parse_bp(bad), parse_error); // item 2 not covered
}
