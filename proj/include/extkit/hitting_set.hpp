#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "errors.hpp"
#include "index_set.hpp"

namespace extkit {

/// Hitting set instance: ground elements 0..ground_size-1 and hyperedges S_1..S_m.
struct HittingSetInstance {
    int ground_size = 0;
    std::vector<std::vector<int>> hyperedges;

    HittingSetInstance() = default;
    HittingSetInstance(int n, std::vector<std::vector<int>> edges)
        : ground_size(n), hyperedges(std::move(edges)) {
        for (auto& s : hyperedges) {
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            if (s.empty()) throw precondition_error("empty hyperedge");
            for (int e : s)
                if (e < 0 || e >= n) throw precondition_error("hyperedge element out of range");
        }
    }

    bool hits_all(const IndexSet& h) const {
        for (auto& s : hyperedges) {
            bool hit = false;
            for (int e : s)
                if (h.contains(e)) { hit = true; break; }
            if (!hit) return false;
        }
        return true;
    }
};

/// Hitting-set file: "n m" then m lines "k e1 ... ek" (1-based elements).
inline HittingSetInstance parse_hitting_set(std::istream& is) {
    std::string line;
    int lineno = 0, n = -1, m = -1;
    std::vector<std::vector<int>> edges;
    while (std::getline(is, line)) {
        ++lineno;
        bool blank = true;
        for (char c : line)
            if (c == '#') { blank = true; break; } else if (!isspace((unsigned char)c)) { blank = false; break; }
        if (blank) continue;
        std::istringstream ss(line);
        if (n < 0) {
            if (!(ss >> n >> m) || n < 0 || m < 0) throw parse_error("expected header 'n m'", lineno);
            continue;
        }
        int k;
        if (!(ss >> k) || k < 1) throw parse_error("expected 'k e1 ... ek'", lineno);
        std::vector<int> s;
        for (int i = 0; i < k; ++i) {
            int e;
            if (!(ss >> e)) throw parse_error("fewer elements than declared", lineno);
            if (e < 1 || e > n) throw parse_error("element out of range", lineno);
            s.push_back(e - 1);
        }
        edges.push_back(std::move(s));
    }
    if (n < 0) throw parse_error("empty hitting-set file");
    if ((int)edges.size() != m) throw parse_error("hyperedge count does not match header");
    return HittingSetInstance(n, std::move(edges));
}

inline HittingSetInstance parse_hitting_set(const std::string& text) {
    std::istringstream ss(text);
    return parse_hitting_set(ss);
}

inline void serialize_hitting_set(std::ostream& os, const HittingSetInstance& h) {
    os << h.ground_size << ' ' << h.hyperedges.size() << '\n';
    for (auto& s : h.hyperedges) {
        os << s.size();
        for (int e : s) os << ' ' << e + 1;
        os << '\n';
    }
}

} // namespace extkit
