#include "pebtep/bp.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "pebtep/error.hpp"

namespace pebtep {

std::string_view to_string(StateKind k) {
    switch (k) {
        case StateKind::Leaf: return "leaf";
        case StateKind::Func: return "func";
        case StateKind::Guess: return "guess";
        case StateKind::Final: return "final";
        case StateKind::Accept: return "accept";
    }
    return "?";
}

StateKind parse_state_kind(std::string_view s) {
    if (s == "leaf") return StateKind::Leaf;
    if (s == "func") return StateKind::Func;
    if (s == "guess") return StateKind::Guess;
    if (s == "final") return StateKind::Final;
    if (s == "accept") return StateKind::Accept;
    throw ParseError("unknown state kind '" + std::string(s) + "'");
}

std::string_view to_string(BpVariant v) {
    return v == BpVariant::Deterministic ? "deterministic" : "nondeterministic";
}

BpVariant parse_bp_variant(std::string_view s) {
    if (s == "deterministic") return BpVariant::Deterministic;
    if (s == "nondeterministic") return BpVariant::Nondeterministic;
    throw ParseError("unknown branching program variant '" + std::string(s) + "'");
}

BranchingProgram::BranchingProgram(int h, int k, ProblemVariant problem, BpVariant variant)
    : h_(h), k_(k), problem_(problem), variant_(variant), output_arity_(k) {
    TreeShape check(h);
    if (k < 2 || k > kMaxAlphabet) throw InvalidArgument("alphabet size k must be in [2, 65536]");
}

void BranchingProgram::set_output_arity(int n) {
    if (n < 1) throw InvalidArgument("output arity must be positive");
    output_arity_ = n;
    finalized_ = false;
}

int BranchingProgram::add_state(StateLabel label, std::optional<StateTag> tag, std::optional<int> id) {
    int index = state_count();
    states_.push_back({id.value_or(index), label, std::move(tag)});
    finalized_ = false;
    return index;
}

void BranchingProgram::add_edge(int from, int to, int label) {
    edges_.push_back({from, to, label});
    finalized_ = false;
}

std::span<const int> BranchingProgram::out_edges(int state) const {
    return {out_list_.data() + out_offsets_[state], out_list_.data() + out_offsets_[state + 1]};
}

std::span<const int> BranchingProgram::in_edges(int state) const {
    return {in_list_.data() + in_offsets_[state], in_list_.data() + in_offsets_[state + 1]};
}

int BranchingProgram::index_of_id(int id) const {
    for (int i = 0; i < state_count(); ++i)
        if (states_[i].id == id) return i;
    throw InvalidArgument("no state with id " + std::to_string(id));
}

int BranchingProgram::size() const {
    return static_cast<int>(std::count_if(states_.begin(), states_.end(),
                                          [](const BpState& s) { return !s.label.is_terminal(); }));
}

void BranchingProgram::finalize() {
    const int n = state_count();
    auto fail = [](const std::string& why) { throw InvalidArgument("malformed branching program: " + why); };
    if (start_ < 0 || start_ >= n) fail("missing or invalid start state");

    TreeShape shape(h_);
    std::unordered_map<int, int> ids;
    accept_ = -1;
    for (int i = 0; i < n; ++i) {
        const auto& s = states_[i];
        if (!ids.emplace(s.id, i).second) fail("duplicate state id " + std::to_string(s.id));
        const auto& l = s.label;
        switch (l.kind) {
            case StateKind::Leaf:
                if (!shape.is_leaf(l.node)) fail("state " + std::to_string(s.id) + " queries non-leaf as leaf");
                break;
            case StateKind::Func:
                if (!shape.is_internal(l.node)) fail("state " + std::to_string(s.id) + " queries a leaf as function");
                if (l.x < 0 || l.x >= k_ || l.y < 0 || l.y >= k_) fail("function query arguments out of [k]");
                break;
            case StateKind::Guess:
                if (variant_ == BpVariant::Deterministic) fail("guess state in a deterministic program");
                break;
            case StateKind::Final:
                if (l.value < 0 || l.value >= output_arity_) fail("final value out of range");
                break;
            case StateKind::Accept:
                if (accept_ >= 0) fail("more than one accepting state");
                accept_ = i;
                break;
        }
    }

    // Adjacency in edge-index order.
    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    for (const auto& e : edges_) {
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) fail("edge endpoint out of range");
        ++out_offsets_[e.from + 1];
        ++in_offsets_[e.to + 1];
    }
    for (int i = 0; i < n; ++i) {
        out_offsets_[i + 1] += out_offsets_[i];
        in_offsets_[i + 1] += in_offsets_[i];
    }
    out_list_.assign(edges_.size(), 0);
    in_list_.assign(edges_.size(), 0);
    {
        auto out_fill = out_offsets_, in_fill = in_offsets_;
        for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
            out_list_[out_fill[edges_[e].from]++] = e;
            in_list_[in_fill[edges_[e].to]++] = e;
        }
    }

    for (int i = 0; i < n; ++i) {
        const auto& l = states_[i].label;
        auto outs = out_edges(i);
        if (l.is_terminal() && !outs.empty()) fail("terminal state " + std::to_string(states_[i].id) + " has out-edges");
        const bool root_query = l.kind == StateKind::Func && l.node == 1 && problem_ == ProblemVariant::BT;
        const int arity = root_query ? 2 : k_;
        for (int e : outs) {
            int lab = edges_[e].label;
            if (l.is_query() && (lab < 0 || lab >= arity))
                fail("query state " + std::to_string(states_[i].id) + " has an edge label outside its range");
        }
        if (variant_ == BpVariant::Deterministic && l.is_query()) {
            std::vector<int> seen(arity, 0);
            for (int e : outs) ++seen[edges_[e].label];
            if (static_cast<int>(outs.size()) != arity ||
                std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
                fail("deterministic query state " + std::to_string(states_[i].id) +
                     " needs exactly one edge per outcome");
        }
    }

    // Kahn's algorithm; ties resolved by index for a reproducible order.
    std::vector<int> indeg(n, 0);
    for (const auto& e : edges_) ++indeg[e.to];
    std::vector<int> ready;
    for (int i = n - 1; i >= 0; --i)
        if (indeg[i] == 0) ready.push_back(i);
    topo_.clear();
    while (!ready.empty()) {
        int s = ready.back();
        ready.pop_back();
        topo_.push_back(s);
        for (int e : out_edges(s))
            if (--indeg[edges_[e].to] == 0) ready.push_back(edges_[e].to);
    }
    if (static_cast<int>(topo_.size()) != n) fail("state graph has a cycle");
    finalized_ = true;
}

int query_value(const StateLabel& label, const TepInstance& instance) {
    if (label.kind == StateKind::Leaf) return instance.leaf(label.node);
    return instance.func(label.node, label.x, label.y);
}

bool edge_consistent(const BranchingProgram& bp, int edge, const TepInstance& instance) {
    const auto& e = bp.edge(edge);
    const auto& label = bp.state(e.from).label;
    if (!label.is_query()) return true;
    return e.label == query_value(label, instance);
}

namespace {

void require_match(const BranchingProgram& bp, const TepInstance& instance) {
    if (!bp.finalized()) throw PreconditionFailed("branching program is not finalized");
    if (bp.height() != instance.height() || bp.k() != instance.k())
        throw PreconditionFailed("instance parameters do not match the branching program");
}

}  // namespace

RunResult run_deterministic(const BranchingProgram& bp, const TepInstance& instance) {
    require_match(bp, instance);
    if (bp.variant() != BpVariant::Deterministic) throw PreconditionFailed("program is not deterministic");
    RunResult r;
    int cur = bp.start();
    r.path.states.push_back(cur);
    while (true) {
        const auto& label = bp.state(cur).label;
        if (label.kind == StateKind::Accept) {
            r.accepted = true;
            return r;
        }
        if (label.kind == StateKind::Final) {
            r.output = label.value;
            return r;
        }
        const int v = query_value(label, instance);
        int next_edge = -1;
        for (int e : bp.out_edges(cur))
            if (bp.edge(e).label == v) next_edge = e;
        if (next_edge < 0)
            throw PreconditionFailed("dead end at state " + std::to_string(bp.state(cur).id));
        r.path.edges.push_back(next_edge);
        cur = bp.edge(next_edge).to;
        r.path.states.push_back(cur);
    }
}

std::vector<char> forward_reachable(const BranchingProgram& bp, const TepInstance& instance) {
    require_match(bp, instance);
    std::vector<char> reach(bp.state_count(), 0);
    reach[bp.start()] = 1;
    for (int s : bp.topo_order()) {
        if (!reach[s]) continue;
        const auto& label = bp.state(s).label;
        const int v = label.is_query() ? query_value(label, instance) : -1;
        for (int e : bp.out_edges(s)) {
            const auto& edge = bp.edge(e);
            if (!label.is_query() || edge.label == v) reach[edge.to] = 1;
        }
    }
    return reach;
}

std::vector<char> backward_reachable(const BranchingProgram& bp, const TepInstance& instance) {
    require_match(bp, instance);
    std::vector<char> co(bp.state_count(), 0);
    if (bp.accept() < 0) return co;
    co[bp.accept()] = 1;
    const auto& topo = bp.topo_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        const int s = *it;
        const auto& label = bp.state(s).label;
        const int v = label.is_query() ? query_value(label, instance) : -1;
        for (int e : bp.out_edges(s)) {
            const auto& edge = bp.edge(e);
            if (co[edge.to] && (!label.is_query() || edge.label == v)) {
                co[s] = 1;
                break;
            }
        }
    }
    return co;
}

bool accepts(const BranchingProgram& bp, const TepInstance& instance) {
    if (bp.accept() < 0) return false;
    return forward_reachable(bp, instance)[bp.accept()] != 0;
}

std::set<int> reachable_outputs(const BranchingProgram& bp, const TepInstance& instance) {
    auto reach = forward_reachable(bp, instance);
    std::set<int> out;
    for (int s = 0; s < bp.state_count(); ++s)
        if (reach[s] && bp.state(s).label.kind == StateKind::Final) out.insert(bp.state(s).label.value);
    return out;
}

bool solves(const BranchingProgram& bp, const TepInstance& instance) {
    const int root = evaluate(instance).root();
    if (bp.problem() == ProblemVariant::BT) return accepts(bp, instance) == (root == 1);
    return reachable_outputs(bp, instance) == std::set<int>{root};
}

PathEnumeration enumerate_accepting_paths(const BranchingProgram& bp, const TepInstance& instance,
                                          std::size_t cap) {
    PathEnumeration out;
    auto co = backward_reachable(bp, instance);
    if (!co[bp.start()]) return out;
    ComputationPath cur;
    cur.states.push_back(bp.start());
    // Iterative DFS; frames hold the position within the out-edge list.
    std::vector<std::size_t> pos{0};
    while (!pos.empty()) {
        const int s = cur.states.back();
        if (s == bp.accept()) {
            if (out.paths.size() == cap) {
                out.truncated = true;
                return out;
            }
            out.paths.push_back(cur);
            pos.pop_back();
            cur.states.pop_back();
            if (!cur.edges.empty()) cur.edges.pop_back();
            continue;
        }
        auto outs = bp.out_edges(s);
        bool descended = false;
        while (pos.back() < outs.size()) {
            const int e = outs[pos.back()++];
            const int to = bp.edge(e).to;
            if (co[to] && edge_consistent(bp, e, instance)) {
                cur.edges.push_back(e);
                cur.states.push_back(to);
                pos.push_back(0);
                descended = true;
                break;
            }
        }
        if (!descended) {
            pos.pop_back();
            cur.states.pop_back();
            if (!cur.edges.empty()) cur.edges.pop_back();
        }
    }
    return out;
}

std::optional<ComputationPath> designated_path(const BranchingProgram& bp, const TepInstance& instance) {
    auto co = backward_reachable(bp, instance);
    if (bp.accept() < 0 || !co[bp.start()]) return std::nullopt;
    ComputationPath p;
    int cur = bp.start();
    p.states.push_back(cur);
    while (cur != bp.accept()) {
        int chosen = -1;
        for (int e : bp.out_edges(cur)) {
            if (co[bp.edge(e).to] && edge_consistent(bp, e, instance)) {
                chosen = e;
                break;
            }
        }
        p.edges.push_back(chosen);
        cur = bp.edge(chosen).to;
        p.states.push_back(cur);
    }
    return p;
}

bool path_consistent(const BranchingProgram& bp, const TepInstance& instance, const ComputationPath& path) {
    if (path.states.empty() || path.states.front() != bp.start()) return false;
    if (path.edges.size() + 1 != path.states.size()) return false;
    for (std::size_t i = 0; i < path.edges.size(); ++i) {
        const auto& e = bp.edge(path.edges[i]);
        if (e.from != path.states[i] || e.to != path.states[i + 1]) return false;
        if (!edge_consistent(bp, path.edges[i], instance)) return false;
    }
    return true;
}

}  // namespace pebtep
