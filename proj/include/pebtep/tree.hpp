#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace pebtep {

// Complete binary tree of height h in heap numbering: root 1, children of i
// are 2i and 2i+1, leaves are 2^(h-1) .. 2^h - 1.
class TreeShape {
public:
    explicit TreeShape(int height);

    int height() const { return height_; }
    int node_count() const { return (1 << height_) - 1; }
    // N = 2^h - 2.
    int non_root_count() const { return node_count() - 1; }
    int first_leaf() const { return 1 << (height_ - 1); }
    int leaf_count() const { return 1 << (height_ - 1); }

    bool contains(int node) const { return node >= 1 && node <= node_count(); }
    bool is_leaf(int node) const { return node >= first_leaf() && node <= node_count(); }
    bool is_internal(int node) const { return node >= 1 && node < first_leaf(); }

    friend bool operator==(const TreeShape&, const TreeShape&) = default;

private:
    int height_;
};

struct NodeRelations {
    std::optional<int> parent;
    std::optional<int> left;
    std::optional<int> right;
    std::optional<int> sibling;
};

NodeRelations node_relations(const TreeShape& shape, int node);

enum class ProblemVariant { FT, BT };

std::string_view to_string(ProblemVariant v);
ProblemVariant parse_problem_variant(std::string_view s);

inline constexpr int kMaxAlphabet = 1 << 16;

// One instance of FT(h,2,k) or BT(h,2,k). Tables are dense k*k, row-major in
// the first argument. BT differs only in that f_1 must map into {0,1}.
class TepInstance {
public:
    TepInstance(TreeShape shape, int k, ProblemVariant variant);

    const TreeShape& shape() const { return shape_; }
    int height() const { return shape_.height(); }
    int k() const { return k_; }
    ProblemVariant variant() const { return variant_; }

    int leaf(int node) const { return leaves_[node - shape_.first_leaf()]; }
    int func(int node, int x, int y) const { return tables_[node][x * k_ + y]; }

    void set_leaf(int node, int value);
    void set_func(int node, int x, int y, int value);
    void fill_func(int node, int value);

    // Value returned by a leaf query (internal == false) or table query.
    std::span<const int> table(int node) const { return tables_[node]; }
    std::span<const int> leaves() const { return leaves_; }

    // Throws InvalidArgument when a value lies outside its range.
    void validate() const;

    friend bool operator==(const TepInstance&, const TepInstance&) = default;

private:
    TreeShape shape_;
    int k_;
    ProblemVariant variant_;
    std::vector<int> leaves_;
    std::vector<std::vector<int>> tables_;  // indexed by node; slot 0 unused
};

// v_i for every node; index 0 unused.
struct NodeValues {
    std::vector<int> values;

    int operator[](int node) const { return values[node]; }
    int root() const { return values[1]; }
    // (v_2, ..., v_{N+1}).
    std::vector<int> non_root_tuple() const { return {values.begin() + 2, values.end()}; }

    friend bool operator==(const NodeValues&, const NodeValues&) = default;
};

NodeValues evaluate(const TepInstance& instance);

// --- the hard input family E -------------------------------------------

// |E| = k^N; throws BudgetExceeded when it does not fit in 64 bits.
std::uint64_t count_hard_inputs(int h, int k);

// The member of E whose non-root node values are (v_2, ..., v_{N+1}).
TepInstance hard_input(int h, int k, std::span<const int> non_root_values);

// Lexicographic position -> member of E (node 2 is the most significant digit).
std::vector<int> hard_input_values_at(int h, int k, std::uint64_t index);
TepInstance hard_input_at(int h, int k, std::uint64_t index);

// Visits every member of E in lexicographic order.
void for_each_hard_input(int h, int k, const std::function<void(const TepInstance&)>& visit);

// Uniform member of E.
TepInstance random_hard_input(int h, int k, std::mt19937_64& rng);

// --- all instances -------------------------------------------------------

// Number of instances of FT/BT(h,2,k); nullopt when above 2^63.
std::optional<std::uint64_t> count_instances(int h, int k, ProblemVariant variant);

// Instances are ordered as a mixed-radix number whose digits are, most
// significant first: the entries of f_1 (row-major), then f_2, ...,
// f_{2^(h-1)-1}, then the leaf values in heap order.
TepInstance instance_at(int h, int k, ProblemVariant variant, std::uint64_t index);

// Visits every instance; throws BudgetExceeded when the count exceeds cap.
void enumerate_all_instances(int h, int k, ProblemVariant variant, std::uint64_t cap,
                             const std::function<void(const TepInstance&)>& visit);

TepInstance random_instance(int h, int k, ProblemVariant variant, std::mt19937_64& rng);

}  // namespace pebtep
