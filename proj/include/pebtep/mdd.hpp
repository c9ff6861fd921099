#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

namespace pebtep {

// Quasi-reduced multi-valued decision diagrams over tuples in [domain]^vars.
// Every non-empty node at level L has one child per value, leading to level
// L+1; an edge to kEmpty may skip levels. Nodes are hash-consed, so equal
// sets have equal ids.
class Mdd {
public:
    using Id = std::uint32_t;
    static constexpr Id kEmpty = 0;

    Mdd(int vars, int domain);

    int vars() const { return vars_; }
    int domain() const { return domain_; }

    Id full() const { return full_[0]; }
    // Tuples whose listed coordinates satisfy pred (vars strictly ascending,
    // pred sees their values in the same order).
    Id predicate(std::span<const int> vars, const std::function<bool(std::span<const int>)>& pred);
    Id singleton(std::span<const int> tuple);
    // Set of the given tuples (any order, duplicates allowed).
    Id from_tuples(std::vector<std::vector<int>> tuples);

    Id unite(Id a, Id b);
    Id intersect(Id a, Id b);
    Id subtract(Id a, Id b);

    // Saturates at UINT64_MAX.
    std::uint64_t count(Id a);
    bool contains(Id a, std::span<const int> tuple) const;
    // Values taken by coordinate var over the set, ascending.
    std::vector<int> projection(Id a, int var) const;
    // Smallest tuple in lexicographic order; empty vector for the empty set.
    std::vector<int> first(Id a) const;
    // Visits tuples in lexicographic order until visit returns false.
    void for_each(Id a, const std::function<bool(std::span<const int>)>& visit) const;

    std::size_t node_count() const { return level_.size(); }

private:
    Id make(int level, std::span<const Id> children);
    Id child(Id a, int v) const { return children_[static_cast<std::size_t>(a) * domain_ + v]; }
    int level(Id a) const { return level_[a]; }

    struct SpanHash {
        std::size_t operator()(const std::vector<Id>& v) const noexcept;
    };

    int vars_;
    int domain_;
    std::vector<int> level_;       // per id; kEmpty has level -1
    std::vector<Id> children_;     // domain_ entries per id
    std::vector<Id> full_;         // full_[L]: all tuples of levels L..vars-1
    std::unordered_map<std::vector<Id>, Id, SpanHash> unique_;  // key: children + level
    std::unordered_map<std::uint64_t, Id> union_memo_, inter_memo_, minus_memo_;
    std::vector<std::uint64_t> count_memo_;
};

}  // namespace pebtep
