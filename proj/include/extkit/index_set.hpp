#pragma once

#include <cstdint>
#include <vector>

namespace extkit {

/// Fixed-universe bitset over element indices 0..n-1. Vertex sets, edge sets and
/// hitting-set element sets are all IndexSets; the universe size travels with the set.
class IndexSet {
public:
    IndexSet() : n_(0) {}
    explicit IndexSet(int universe) : n_(universe), words_((universe + 63) / 64, 0) {}

    static IndexSet of(int universe, std::initializer_list<int> elems) {
        IndexSet s(universe);
        for (int e : elems) s.add(e);
        return s;
    }
    static IndexSet full(int universe) {
        IndexSet s(universe);
        for (int i = 0; i < universe; ++i) s.add(i);
        return s;
    }

    int universe() const { return n_; }
    bool contains(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void add(int i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void remove(int i) { words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }

    int count() const {
        int c = 0;
        for (auto w : words_) c += __builtin_popcountll(w);
        return c;
    }
    bool empty() const {
        for (auto w : words_) if (w) return false;
        return true;
    }
    bool subset_of(const IndexSet& o) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }
    IndexSet unioned(const IndexSet& o) const {
        IndexSet r(n_);
        for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | o.words_[i];
        return r;
    }
    IndexSet intersect(const IndexSet& o) const {
        IndexSet r(n_);
        for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
        return r;
    }
    IndexSet minus(const IndexSet& o) const {
        IndexSet r(n_);
        for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & ~o.words_[i];
        return r;
    }
    IndexSet complement() const { return full(n_).minus(*this); }

    std::vector<int> elements() const {
        std::vector<int> out;
        for (int i = 0; i < n_; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

    friend bool operator==(const IndexSet& a, const IndexSet& b) {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }
    friend bool operator!=(const IndexSet& a, const IndexSet& b) { return !(a == b); }
    /// Lexicographic by sorted element list; used for reproducible enumeration orders.
    friend bool operator<(const IndexSet& a, const IndexSet& b) {
        return a.elements() < b.elements();
    }

private:
    int n_;
    std::vector<std::uint64_t> words_;
};

} // namespace extkit
