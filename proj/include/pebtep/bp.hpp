#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pebtep/tree.hpp"

namespace pebtep {

enum class StateKind { Leaf, Func, Guess, Final, Accept };

std::string_view to_string(StateKind k);
StateKind parse_state_kind(std::string_view s);

struct StateLabel {
    StateKind kind = StateKind::Guess;
    int node = 0;   // Leaf, Func
    int x = 0;      // Func
    int y = 0;      // Func
    int value = 0;  // Final

    static StateLabel leaf(int node) { return {StateKind::Leaf, node, 0, 0, 0}; }
    static StateLabel func(int node, int x, int y) { return {StateKind::Func, node, x, y, 0}; }
    static StateLabel guess() { return {StateKind::Guess, 0, 0, 0, 0}; }
    static StateLabel final_value(int v) { return {StateKind::Final, 0, 0, 0, v}; }
    static StateLabel accept() { return {StateKind::Accept, 0, 0, 0, 0}; }

    bool is_query() const { return kind == StateKind::Leaf || kind == StateKind::Func; }
    bool is_terminal() const { return kind == StateKind::Final || kind == StateKind::Accept; }
    // Tree node this state queries, or 0.
    int queried_node() const { return is_query() ? node : 0; }

    friend bool operator==(const StateLabel&, const StateLabel&) = default;
};

inline constexpr std::uint32_t kWholeValue = 0xffffffffu;

// What a compiled state knows about one node: the bits selected by the
// masks are fixed to the corresponding bits of `value`. A mask equal to
// kWholeValue fixes the whole value.
struct TagEntry {
    int node = 0;
    int value = 0;
    std::uint32_t black_mask = 0;
    std::uint32_t white_mask = 0;
    friend bool operator==(const TagEntry&, const TagEntry&) = default;
};

struct StateTag {
    int layer = 0;
    std::vector<TagEntry> entries;  // sorted by node
    friend bool operator==(const StateTag&, const StateTag&) = default;
};

struct BpState {
    int id = 0;
    StateLabel label;
    std::optional<StateTag> tag;
};

struct BpEdge {
    int from = 0;    // state index
    int to = 0;      // state index
    int label = -1;  // -1: unlabelled
};

enum class BpVariant { Deterministic, Nondeterministic };

std::string_view to_string(BpVariant v);
BpVariant parse_bp_variant(std::string_view s);

// A k-way branching program over FT/BT(h,2,k) instances. Build with
// add_state/add_edge/set_start, then finalize(), which validates the
// structure and freezes the adjacency. Only acyclic programs are accepted.
class BranchingProgram {
public:
    BranchingProgram(int h, int k, ProblemVariant problem, BpVariant variant);

    int height() const { return h_; }
    int k() const { return k_; }
    ProblemVariant problem() const { return problem_; }
    BpVariant variant() const { return variant_; }
    // Final states carry values in [output_arity); k unless set.
    int output_arity() const { return output_arity_; }
    void set_output_arity(int n);

    // Returns the new state's index; the id defaults to the index.
    int add_state(StateLabel label, std::optional<StateTag> tag = std::nullopt, std::optional<int> id = std::nullopt);
    void add_edge(int from, int to, int label = -1);
    void set_start(int index) { start_ = index; }

    // Validates and builds adjacency/topological order. Throws InvalidArgument.
    void finalize();
    bool finalized() const { return finalized_; }

    int state_count() const { return static_cast<int>(states_.size()); }
    const BpState& state(int index) const { return states_[index]; }
    const std::vector<BpState>& states() const { return states_; }
    const std::vector<BpEdge>& edges() const { return edges_; }
    const BpEdge& edge(int index) const { return edges_[index]; }
    std::span<const int> out_edges(int state) const;
    std::span<const int> in_edges(int state) const;
    int start() const { return start_; }
    // Index of the accepting state, or -1 when there is none.
    int accept() const { return accept_; }
    const std::vector<int>& topo_order() const { return topo_; }
    int index_of_id(int id) const;

    // Number of non-final, non-accepting states.
    int size() const;

private:
    int h_;
    int k_;
    ProblemVariant problem_;
    BpVariant variant_;
    int output_arity_;
    std::vector<BpState> states_;
    std::vector<BpEdge> edges_;
    int start_ = -1;
    int accept_ = -1;
    bool finalized_ = false;
    std::vector<int> out_offsets_, out_list_;
    std::vector<int> in_offsets_, in_list_;
    std::vector<int> topo_;
};

inline int size(const BranchingProgram& bp) { return bp.size(); }

// Answer to the state's query on `instance`.
int query_value(const StateLabel& label, const TepInstance& instance);

// Whether following edge e is consistent with the instance.
bool edge_consistent(const BranchingProgram& bp, int edge, const TepInstance& instance);

struct ComputationPath {
    std::vector<int> states;  // indices, starting at bp.start()
    std::vector<int> edges;   // edges[i] leads from states[i] to states[i+1]
    friend bool operator==(const ComputationPath&, const ComputationPath&) = default;
};

struct RunResult {
    bool accepted = false;  // reached the accepting state
    std::optional<int> output;  // value of the final state reached, if any
    ComputationPath path;
};

// Follows the unique consistent path of a deterministic program. Throws
// PreconditionFailed on a nondeterministic program or a dead end.
RunResult run_deterministic(const BranchingProgram& bp, const TepInstance& instance);

// States reachable from start along consistent edges.
std::vector<char> forward_reachable(const BranchingProgram& bp, const TepInstance& instance);
// States from which the accepting state is reachable along consistent edges.
std::vector<char> backward_reachable(const BranchingProgram& bp, const TepInstance& instance);

// Nondeterministic acceptance: an accepting consistent path exists.
bool accepts(const BranchingProgram& bp, const TepInstance& instance);

// Values of final states reachable on consistent paths (FT semantics: the
// program solves the instance iff this is exactly {v_1}).
std::set<int> reachable_outputs(const BranchingProgram& bp, const TepInstance& instance);

// Whether the program's verdict on the instance matches evaluate(): BT
// programs must accept exactly when v_1 = 1; FT programs must reach
// exactly the final state v_1.
bool solves(const BranchingProgram& bp, const TepInstance& instance);

struct PathEnumeration {
    std::vector<ComputationPath> paths;
    bool truncated = false;
};

// All accepting consistent paths, in lexicographic order of edge indices,
// stopping after `cap` paths.
PathEnumeration enumerate_accepting_paths(const BranchingProgram& bp, const TepInstance& instance,
                                          std::size_t cap);

// Lexicographically first accepting consistent path.
std::optional<ComputationPath> designated_path(const BranchingProgram& bp, const TepInstance& instance);

// Re-checks a path edge by edge against the instance.
bool path_consistent(const BranchingProgram& bp, const TepInstance& instance, const ComputationPath& path);

}  // namespace pebtep
