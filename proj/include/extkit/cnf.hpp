#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace extkit {

/// CNF formula. A literal is +v / -v with 1-based variable v, DIMACS style.
struct Cnf {
    int vars = 0;
    std::vector<std::vector<int>> clauses;

    bool clause_satisfied(const std::vector<int>& clause, const std::vector<bool>& assign) const {
        for (int lit : clause) {
            int v = lit > 0 ? lit : -lit;
            bool val = assign[v - 1];
            if (lit > 0 ? val : !val) return true;
        }
        return false;
    }
    bool satisfied_by(const std::vector<bool>& assign) const {
        for (auto& c : clauses)
            if (!clause_satisfied(c, assign)) return false;
        return true;
    }
};

/// DIMACS: "p cnf <vars> <clauses>" then clauses as 0-terminated literal lists.
/// 'c' comment lines ignored.
inline Cnf parse_dimacs(std::istream& is) {
    Cnf f;
    std::string line;
    int lineno = 0, declared = -1;
    std::vector<int> current;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ss(line);
        if (declared < 0) {
            std::string p, fmt;
            if (!(ss >> p >> fmt >> f.vars >> declared) || p != "p" || fmt != "cnf" ||
                f.vars < 0 || declared < 0)
                throw parse_error("expected 'p cnf <vars> <clauses>'", lineno);
            continue;
        }
        int lit;
        while (ss >> lit) {
            if (lit == 0) {
                f.clauses.push_back(current);
                current.clear();
            } else {
                int v = lit > 0 ? lit : -lit;
                if (v > f.vars) throw parse_error("literal out of range", lineno);
                current.push_back(lit);
            }
        }
    }
    if (declared < 0) throw parse_error("empty CNF file");
    if (!current.empty()) throw parse_error("unterminated clause");
    if ((int)f.clauses.size() != declared) throw parse_error("clause count does not match header");
    return f;
}

inline Cnf parse_dimacs(const std::string& text) {
    std::istringstream ss(text);
    return parse_dimacs(ss);
}

inline void serialize_dimacs(std::ostream& os, const Cnf& f) {
    os << "p cnf " << f.vars << ' ' << f.clauses.size() << '\n';
    for (auto& c : f.clauses) {
        for (int lit : c) os << lit << ' ';
        os << "0\n";
    }
}

} // namespace extkit
