#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace extkit {

/// Bin packing items with exact rational weights in (0,1).
struct BpInstance {
    std::vector<Rational> weights;

    BpInstance() = default;
    explicit BpInstance(std::vector<Rational> w) : weights(std::move(w)) {
        for (auto& x : weights)
            if (x <= Rational(0) || x >= Rational(1))
                throw precondition_error("item weight must lie strictly between 0 and 1");
    }
    int item_count() const { return (int)weights.size(); }
};

/// Partition of items 0..n-1 in canonical form: blocks sorted internally and
/// ordered by least element.
struct Partition {
    std::vector<std::vector<int>> blocks;

    Partition() = default;
    explicit Partition(std::vector<std::vector<int>> b) : blocks(std::move(b)) { canonicalize(); }

    static Partition singletons(int n) {
        std::vector<std::vector<int>> b;
        for (int i = 0; i < n; ++i) b.push_back({i});
        return Partition(std::move(b));
    }

    void canonicalize() {
        for (auto& b : blocks) std::sort(b.begin(), b.end());
        std::sort(blocks.begin(), blocks.end());
    }
    bool valid_for(int n) const {
        std::vector<int> hits(n, 0);
        for (auto& b : blocks) {
            if (b.empty()) return false;
            for (int i : b) {
                if (i < 0 || i >= n) return false;
                ++hits[i];
            }
        }
        for (int h : hits)
            if (h != 1) return false;
        return true;
    }
    /// True when every block of this partition is contained in a block of `coarse`.
    bool refines(const Partition& coarse) const {
        for (auto& b : blocks) {
            bool inside = false;
            for (auto& c : coarse.blocks) {
                if (std::includes(c.begin(), c.end(), b.begin(), b.end())) { inside = true; break; }
            }
            if (!inside) return false;
        }
        return true;
    }
    friend bool operator==(const Partition& a, const Partition& b) { return a.blocks == b.blocks; }
    friend bool operator<(const Partition& a, const Partition& b) { return a.blocks < b.blocks; }
};

inline Rational block_weight(const BpInstance& bi, const std::vector<int>& block) {
    Rational w(0);
    for (int i : block) w += bi.weights[i];
    return w;
}

inline bool is_feasible_partition(const BpInstance& bi, const Partition& pi) {
    if (!pi.valid_for(bi.item_count())) throw precondition_error("not a partition of the items");
    for (auto& b : pi.blocks)
        if (block_weight(bi, b) > Rational(1)) return false;
    return true;
}

/// Definitional minimality: no two blocks can be merged while staying feasible.
inline bool all_pairs_merge_minimal(const BpInstance& bi, const Partition& pi) {
    for (size_t i = 0; i < pi.blocks.size(); ++i)
        for (size_t j = i + 1; j < pi.blocks.size(); ++j)
            if (block_weight(bi, pi.blocks[i]) + block_weight(bi, pi.blocks[j]) <= Rational(1))
                return false;
    return true;
}

/// Two-smallest-bins shortcut; single-block partitions are minimal by convention.
inline bool is_minimal_partition(const BpInstance& bi, const Partition& pi) {
    if (!is_feasible_partition(bi, pi)) throw precondition_error("infeasible partition");
    if (pi.blocks.size() <= 1) return true;
    std::vector<Rational> ws;
    for (auto& b : pi.blocks) ws.push_back(block_weight(bi, b));
    std::sort(ws.begin(), ws.end());
    return ws[0] + ws[1] > Rational(1);
}

/// Candidate thresholds: D = { 1 - sigma : sigma a subset sum, 1/2 < sigma <= 1 },
/// sorted ascending. Contains 0 exactly when some subset sums to 1.
inline std::vector<Rational> delta_candidates(const BpInstance& bi) {
    std::set<Rational> sums{Rational(0)};
    for (auto& w : bi.weights) {
        std::set<Rational> next = sums;
        for (auto& s : sums) {
            Rational t = s + w;
            if (t <= Rational(1)) next.insert(t); // larger sums can never realize a delta
        }
        sums.swap(next);
    }
    std::vector<Rational> out;
    for (auto& s : sums)
        if (s > Rational(1, 2) && s <= Rational(1)) out.push_back(Rational(1) - s);
    std::sort(out.begin(), out.end());
    return out;
}

struct BpVerdict {
    bool answer = false;
    std::optional<Partition> witness;
};

/// Exhaustive ground truth: first feasible minimal refinement of pi_U in canonical
/// restricted-growth-string order.
inline BpVerdict ext_bp_oracle(const BpInstance& bi, const Partition& pi_u, int item_cap = 10) {
    int n = bi.item_count();
    if (!pi_u.valid_for(n)) throw precondition_error("pre-solution is not a partition");
    if (n > item_cap) throw size_limit_error("bin packing oracle supports at most " +
                                             std::to_string(item_cap) + " items");
    if (n == 0) return {true, Partition{}};
    std::vector<int> rgs(n, 0);
    while (true) {
        int blocks = 1 + *std::max_element(rgs.begin(), rgs.end());
        std::vector<std::vector<int>> bs(blocks);
        for (int i = 0; i < n; ++i) bs[rgs[i]].push_back(i);
        Partition cand(std::move(bs));
        if (cand.refines(pi_u) && is_feasible_partition(bi, cand) &&
            all_pairs_merge_minimal(bi, cand))
            return {true, cand};
        // next restricted growth string
        int i = n - 1;
        for (; i > 0; --i) {
            int mx = 0;
            for (int j = 0; j < i; ++j) mx = std::max(mx, rgs[j]);
            if (rgs[i] <= mx) { ++rgs[i]; break; }
            rgs[i] = 0;
        }
        if (i == 0) break;
    }
    return {false, std::nullopt};
}

namespace detail {

/// Per-delta reachability table over (packed set Y, open bin L), both bitmasks.
/// Weights are pre-scaled to a common integer denominator.
struct DeltaDp {
    int n;
    std::vector<std::int64_t> w; // numerators over `den`
    std::int64_t den;
    std::vector<int> block_of;   // pi_U block id per item

    std::int64_t mask_weight(std::uint32_t m) const {
        std::int64_t s = 0;
        for (int i = 0; i < n; ++i)
            if (m >> i & 1) s += w[i];
        return s;
    }
    bool same_block(std::uint32_t m, int item) const {
        for (int i = 0; i < n; ++i)
            if ((m >> i & 1) && block_of[i] != block_of[item]) return false;
        return true;
    }

    bool same_block_fast(std::uint32_t l, int item) const {
        if (l == 0) return true;
        return block_of[__builtin_ctz(l)] == block_of[item];
    }

    /// Runs the table for one delta (numerator over den); returns the reachable map
    /// Y -> open bins, for witness reconstruction. Reached (Y,L) keys live in a flat
    /// bit array when n permits (the O*(3^n)-space regime), else in a sorted set.
    bool run(std::int64_t delta, std::map<std::uint32_t, std::vector<std::uint32_t>>& reach,
             std::uint32_t& final_open) const {
        std::int64_t close_at = den - delta; // 1 - delta
        reach.clear();
        reach[0] = {0};
        std::vector<std::vector<std::uint32_t>> by_size(n + 1);
        by_size[0].push_back(0);
        const bool flat = n <= 14;
        std::vector<std::uint64_t> seen_bits;
        if (flat) seen_bits.assign(((std::size_t(1) << (2 * n)) + 63) / 64, 0);
        std::set<std::uint64_t> seen_set;
        auto key = [&](std::uint32_t y, std::uint32_t l) {
            return ((std::uint64_t)y << n) | l;
        };
        auto mark = [&](std::uint64_t k) {
            if (flat) {
                std::uint64_t bit = std::uint64_t(1) << (k & 63);
                if (seen_bits[k >> 6] & bit) return false;
                seen_bits[k >> 6] |= bit;
                return true;
            }
            return seen_set.insert(k).second;
        };
        mark(0);
        for (int size = 0; size < n; ++size) {
            for (std::uint32_t y : by_size[size]) {
                for (std::uint32_t l : reach[y]) {
                    std::int64_t wl = mask_weight(l);
                    bool can_close = wl >= close_at;
                    for (int it = 0; it < n; ++it) {
                        if (y >> it & 1) continue;
                        std::uint32_t y2 = y | (1u << it);
                        // grow the open bin
                        if (wl + w[it] <= den && same_block_fast(l, it)) {
                            std::uint32_t l2 = l | (1u << it);
                            if (mark(key(y2, l2))) {
                                if (reach.find(y2) == reach.end()) by_size[size + 1].push_back(y2);
                                reach[y2].push_back(l2);
                            }
                        }
                        // close the open bin, start a fresh one with this item
                        if (can_close) {
                            std::uint32_t l2 = 1u << it;
                            if (mark(key(y2, l2))) {
                                if (reach.find(y2) == reach.end()) by_size[size + 1].push_back(y2);
                                reach[y2].push_back(l2);
                            }
                        }
                    }
                }
            }
        }
        std::uint32_t all = n == 32 ? 0xffffffffu : (1u << n) - 1;
        auto it = reach.find(all);
        if (it == reach.end()) return false;
        std::vector<std::uint32_t> finals = it->second;
        std::sort(finals.begin(), finals.end());
        for (std::uint32_t l : finals) {
            if (mask_weight(l) > delta) { final_open = l; return true; }
        }
        return false;
    }

    /// Rebuilds one witness partition from a successful run.
    std::vector<std::uint32_t> reconstruct(
        std::int64_t delta, const std::map<std::uint32_t, std::vector<std::uint32_t>>& reach,
        std::uint32_t final_open) const {
        std::int64_t close_at = den - delta;
        std::vector<std::uint32_t> bins;
        std::uint32_t y = n == 32 ? 0xffffffffu : (1u << n) - 1, l = final_open;
        std::uint32_t pending = l;
        while (y) {
            bool stepped = false;
            // undo a grow step: remove an item from the open bin
            for (int it = 0; it < n && !stepped; ++it) {
                if (!(l >> it & 1)) continue;
                std::uint32_t l2 = l & ~(1u << it), y2 = y & ~(1u << it);
                if (l2 == 0) continue; // that would be the bin's first item; handled below
                auto f = reach.find(y2);
                if (f != reach.end() &&
                    std::find(f->second.begin(), f->second.end(), l2) != f->second.end()) {
                    y = y2; l = l2; stepped = true;
                }
            }
            if (stepped) continue;
            // undo the open bin's first item: previous open bin was closed here
            int it = 0;
            while (!(l >> it & 1)) ++it;
            std::uint32_t y2 = y & ~(1u << it);
            bins.push_back(pending);
            if (y2 == 0) break;
            auto f = reach.find(y2);
            std::vector<std::uint32_t> prevs = f->second;
            std::sort(prevs.begin(), prevs.end());
            bool found = false;
            for (std::uint32_t l2 : prevs) {
                if (mask_weight(l2) >= close_at) { y = y2; l = l2; pending = l2; found = true; break; }
            }
            if (!found) throw std::logic_error("bin packing DP backtrack failed");
        }
        if (y == 0 && pending && (bins.empty() || bins.back() != pending)) bins.push_back(pending);
        return bins;
    }
};

} // namespace detail

/// Subset DP for Ext BP: iterates delta over delta_candidates and runs the
/// reachability table per delta; first success yields a witness.
inline BpVerdict ext_bp_dp(const BpInstance& bi, const Partition& pi_u) {
    int n = bi.item_count();
    if (!pi_u.valid_for(n)) throw precondition_error("pre-solution is not a partition");
    if (n == 0) return {true, Partition{}};
    if (n > 30) throw size_limit_error("ext_bp_dp supports at most 30 items");

    // the coarsest refinement of {X} is {X} itself; minimal by convention when feasible
    if (pi_u.blocks.size() == 1) {
        if (block_weight(bi, pi_u.blocks[0]) <= Rational(1)) return {true, pi_u};
    }

    detail::DeltaDp dp;
    dp.n = n;
    std::int64_t den = 1;
    for (auto& w : bi.weights) {
        std::int64_t g = std::gcd(den, w.den());
        if (den / g > (std::int64_t(1) << 40) / w.den())
            throw size_limit_error("weight denominators too large for the subset DP");
        den = den / g * w.den();
    }
    dp.den = den;
    for (auto& w : bi.weights) dp.w.push_back(w.num() * (den / w.den()));
    dp.block_of.assign(n, -1);
    for (size_t b = 0; b < pi_u.blocks.size(); ++b)
        for (int i : pi_u.blocks[b]) dp.block_of[i] = (int)b;

    for (auto& dr : delta_candidates(bi)) {
        std::int64_t delta = dr.num() * (den / dr.den());
        std::map<std::uint32_t, std::vector<std::uint32_t>> reach;
        std::uint32_t final_open = 0;
        if (!dp.run(delta, reach, final_open)) continue;
        auto bins = dp.reconstruct(delta, reach, final_open);
        std::vector<std::vector<int>> blocks;
        for (std::uint32_t m : bins) {
            std::vector<int> b;
            for (int i = 0; i < n; ++i)
                if (m >> i & 1) b.push_back(i);
            blocks.push_back(std::move(b));
        }
        return {true, Partition(std::move(blocks))};
    }
    return {false, std::nullopt};
}

/// BP file: line 1 "n"; line 2 with n rationals ("p/q" or exact decimals); then one
/// line per pre-solution block listing 1-based item indices; blocks partition 1..n.
inline std::pair<BpInstance, Partition> parse_bp(std::istream& is) {
    std::string line;
    int lineno = 0, n = -1;
    std::vector<Rational> ws;
    std::vector<std::vector<int>> blocks;
    while (std::getline(is, line)) {
        ++lineno;
        bool blank = true;
        for (char c : line)
            if (c == '#') { blank = true; break; } else if (!isspace((unsigned char)c)) { blank = false; break; }
        if (blank) continue;
        std::istringstream ss(line);
        if (n < 0) {
            if (!(ss >> n) || n < 0) throw parse_error("expected item count", lineno);
            continue;
        }
        if ((int)ws.size() < n || n == 0) {
            if (n == 0 && ws.empty()) { ws.resize(0); }
            std::string tok;
            while (ss >> tok) ws.push_back(Rational::parse(tok));
            if ((int)ws.size() != n) throw parse_error("expected exactly n weights", lineno);
            continue;
        }
        std::vector<int> b;
        int i;
        while (ss >> i) {
            if (i < 1 || i > n) throw parse_error("item index out of range", lineno);
            b.push_back(i - 1);
        }
        if (b.empty()) throw parse_error("empty block line", lineno);
        blocks.push_back(std::move(b));
    }
    if (n < 0) throw parse_error("empty bin packing file");
    BpInstance bi{std::vector<Rational>(ws)};
    Partition pu(std::move(blocks));
    if (!pu.valid_for(n)) throw parse_error("blocks do not partition the items");
    return {bi, pu};
}

inline void serialize_bp(std::ostream& os, const BpInstance& bi, const Partition& pi_u) {
    os << bi.item_count() << '\n';
    for (int i = 0; i < bi.item_count(); ++i)
        os << (i ? " " : "") << bi.weights[i].str();
    os << '\n';
    for (auto& b : pi_u.blocks) {
        for (size_t i = 0; i < b.size(); ++i) os << (i ? " " : "") << b[i] + 1;
        os << '\n';
    }
}

} // namespace extkit
