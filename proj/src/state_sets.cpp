#include <algorithm>
#include <map>
#include <random>
#include <thread>
#include <tuple>

#include "pebtep/analyze.hpp"
#include "pebtep/error.hpp"

namespace pebtep {

std::string_view to_string(SweepKind s) {
    switch (s) {
        case SweepKind::E: return "E";
        case SweepKind::AllInstances: return "all";
        case SweepKind::Sample: return "sample";
    }
    return "?";
}

SweepKind parse_sweep_kind(std::string_view s) {
    if (s == "E" || s == "e") return SweepKind::E;
    if (s == "all") return SweepKind::AllInstances;
    if (s == "sample") return SweepKind::Sample;
    throw ParseError("unknown sweep '" + std::string(s) + "' (expected E, all or sample)");
}

namespace {

// Inputs accepted by the program: BT reaches Accept, FT reaches Final(v_1).
std::vector<char> backward_to_output(const BranchingProgram& bp, const TepInstance& I, int root_value) {
    if (bp.problem() == ProblemVariant::BT) return backward_reachable(bp, I);
    std::vector<char> co(bp.state_count(), 0);
    const auto& topo = bp.topo_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        const int s = *it;
        const auto& label = bp.state(s).label;
        if (label.kind == StateKind::Final) {
            co[s] = label.value == root_value;
            continue;
        }
        for (int e : bp.out_edges(s))
            if (co[bp.edge(e).to] && edge_consistent(bp, e, I)) {
                co[s] = 1;
                break;
            }
    }
    return co;
}

StateSets e_sweep(const BranchingProgram& bp, const SweepSpec& spec) {
    const TreeShape shape(bp.height());
    const int n = shape.non_root_count();
    const int D = spec.domain ? spec.domain : bp.k();
    if (D < 2 || D > bp.k()) throw InvalidArgument("sweep domain must lie in [2, k]");
    StateSets out;
    out.sweep = SweepKind::E;
    out.domain = D;
    out.mdd = std::make_shared<Mdd>(n, D);
    Mdd& m = *out.mdd;
    out.sweep_size = m.count(m.full());

    std::map<std::tuple<int, int, int, int, int>, Mdd::Id> cache;
    auto predicate = [&](int edge) -> Mdd::Id {
        const auto& e = bp.edge(edge);
        const auto& l = bp.state(e.from).label;
        if (!l.is_query()) return m.full();
        const int lab = e.label;
        auto key = std::make_tuple(static_cast<int>(l.kind), l.node, l.x, l.y, lab);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        Mdd::Id id;
        if (l.kind == StateKind::Leaf) {
            int var = l.node - 2;
            id = m.predicate(std::span<const int>(&var, 1), [&](std::span<const int> v) { return v[0] == lab; });
        } else if (l.node == 1) {
            id = lab == 1 ? m.full() : Mdd::kEmpty;  // f_1 is constantly 1 on E
        } else {
            const int j = l.node, x = l.x, y = l.y;
            const int vars[3] = {j - 2, 2 * j - 2, 2 * j - 1};
            id = m.predicate(vars, [&](std::span<const int> v) {
                const bool match = v[1] == x && v[2] == y;
                return match ? v[0] == lab : lab == 0;
            });
        }
        cache.emplace(key, id);
        return id;
    };

    const int S = bp.state_count();
    out.F.assign(S, Mdd::kEmpty);
    out.A.assign(S, Mdd::kEmpty);
    out.F[bp.start()] = m.full();
    for (int s : bp.topo_order()) {
        if (out.F[s] == Mdd::kEmpty) continue;
        for (int e : bp.out_edges(s)) {
            const int to = bp.edge(e).to;
            out.F[to] = m.unite(out.F[to], m.intersect(out.F[s], predicate(e)));
        }
    }
    std::vector<Mdd::Id> back(S, Mdd::kEmpty);
    const auto& topo = bp.topo_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        const int s = *it;
        const auto& l = bp.state(s).label;
        if (l.kind == StateKind::Accept || (l.kind == StateKind::Final && bp.problem() == ProblemVariant::FT && l.value == 1)) {
            back[s] = m.full();
            continue;
        }
        for (int e : bp.out_edges(s)) back[s] = m.unite(back[s], m.intersect(predicate(e), back[bp.edge(e).to]));
    }
    for (int s = 0; s < S; ++s) out.A[s] = m.intersect(out.F[s], back[s]);
    return out;
}

StateSets explicit_sweep(const BranchingProgram& bp, const SweepSpec& spec) {
    const TreeShape shape(bp.height());
    const int n = shape.non_root_count();
    const int k = bp.k();
    std::uint64_t total;
    if (spec.kind == SweepKind::AllInstances) {
        auto c = count_instances(bp.height(), k, bp.problem());
        if (!c || *c > spec.cap) throw BudgetExceeded("instance count exceeds the sweep budget");
        total = *c;
    } else {
        if (spec.samples > spec.cap) throw BudgetExceeded("sample count exceeds the sweep budget");
        total = spec.samples;
    }
    const int S = bp.state_count();
    const int jobs = std::max(1, spec.jobs);
    struct Chunk {
        std::vector<std::vector<std::vector<int>>> F, A;
    };
    std::vector<Chunk> chunks(jobs);
    auto work = [&](int j) {
        Chunk& c = chunks[j];
        c.F.assign(S, {});
        c.A.assign(S, {});
        const std::uint64_t lo = total * j / jobs, hi = total * (j + 1) / jobs;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            TepInstance I = [&] {
                if (spec.kind == SweepKind::AllInstances) return instance_at(bp.height(), k, bp.problem(), idx);
                return sampled_instance(bp.height(), k, bp.problem(), spec.seed, idx);
            }();
            const auto vals = evaluate(I);
            const auto tuple = vals.non_root_tuple();
            const auto fw = forward_reachable(bp, I);
            const auto bw = backward_to_output(bp, I, vals.root());
            for (int s = 0; s < S; ++s) {
                if (!fw[s]) continue;
                c.F[s].push_back(tuple);
                if (bw[s]) c.A[s].push_back(tuple);
            }
        }
    };
    std::vector<std::thread> threads;
    for (int j = 1; j < jobs; ++j) threads.emplace_back(work, j);
    work(0);
    for (auto& t : threads) t.join();

    StateSets out;
    out.sweep = spec.kind;
    out.sweep_size = total;
    out.seed = spec.kind == SweepKind::Sample ? spec.seed : 0;
    out.domain = k;
    out.mdd = std::make_shared<Mdd>(n, k);
    out.F.assign(S, Mdd::kEmpty);
    out.A.assign(S, Mdd::kEmpty);
    for (int s = 0; s < S; ++s) {
        std::vector<std::vector<int>> f, a;
        for (auto& c : chunks) {
            f.insert(f.end(), std::make_move_iterator(c.F[s].begin()), std::make_move_iterator(c.F[s].end()));
            a.insert(a.end(), std::make_move_iterator(c.A[s].begin()), std::make_move_iterator(c.A[s].end()));
            c.F[s].clear();
            c.A[s].clear();
        }
        out.F[s] = out.mdd->from_tuples(std::move(f));
        out.A[s] = out.mdd->from_tuples(std::move(a));
    }
    return out;
}

}  // namespace

StateSets compute_state_sets(const BranchingProgram& bp, const SweepSpec& spec) {
    if (!bp.finalized()) throw PreconditionFailed("branching program is not finalized");
    if (spec.kind == SweepKind::E) return e_sweep(bp, spec);
    return explicit_sweep(bp, spec);
}

}  // namespace pebtep
