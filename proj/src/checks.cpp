#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>

#include "pebtep/analyze.hpp"
#include "pebtep/error.hpp"

namespace pebtep {

ThriftyReport check_thrifty(const BranchingProgram& bp, const StateSets& sets, std::size_t max_witnesses) {
    ThriftyReport r;
    r.sweep = sets.sweep;
    r.inputs = sets.sweep_size;
    Mdd& m = *sets.mdd;
    for (int s = 0; s < bp.state_count(); ++s) {
        const auto& l = bp.state(s).label;
        if (l.kind != StateKind::Func || sets.A[s] == Mdd::kEmpty) continue;
        const int j = l.node, x = l.x, y = l.y;
        const int vars[2] = {2 * j - 2, 2 * j - 1};
        auto wrong = m.predicate(vars, [&](std::span<const int> v) { return v[0] != x || v[1] != y; });
        auto bad = m.intersect(sets.A[s], wrong);
        if (bad == Mdd::kEmpty) continue;
        r.pass = false;
        if (r.violations.size() >= max_witnesses) continue;
        ThriftyViolation v;
        v.state_id = bp.state(s).id;
        v.values = m.first(bad);
        if (sets.sweep == SweepKind::E && sets.domain == bp.k()) {
            auto I = hard_input(bp.height(), bp.k(), v.values);
            if (auto p = accepting_path_through(bp, I, s)) v.path = *p;
        }
        r.violations.push_back(std::move(v));
    }
    return r;
}

ReadOnceReport check_syntactic_read_once(const BranchingProgram& bp) {
    if (!bp.finalized()) throw PreconditionFailed("branching program is not finalized");
    ReadOnceReport r;
    const int n = bp.state_count();
    std::vector<char> fw(n, 0), co(n, 0);
    fw[bp.start()] = 1;
    for (int s : bp.topo_order())
        if (fw[s])
            for (int e : bp.out_edges(s)) fw[bp.edge(e).to] = 1;
    const auto& topo = bp.topo_order();
    auto is_target = [&](int s) {
        const auto& l = bp.state(s).label;
        return l.kind == StateKind::Accept || (bp.problem() == ProblemVariant::FT && l.kind == StateKind::Final);
    };
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        int s = *it;
        co[s] = is_target(s);
        for (int e : bp.out_edges(s))
            if (co[bp.edge(e).to]) co[s] = 1;
    }
    // Per tree node: which of its query states are reachable (strictly) from
    // each state, as a bitset over that node's query states.
    std::map<int, std::vector<int>> by_node;
    for (int s = 0; s < n; ++s)
        if (int node = bp.state(s).label.queried_node(); node) by_node[node].push_back(s);
    for (const auto& [node, qs] : by_node) {
        if (qs.size() < 2) continue;
        const std::size_t words = (qs.size() + 63) / 64;
        std::vector<int> slot(n, -1);
        for (std::size_t j = 0; j < qs.size(); ++j) slot[qs[j]] = static_cast<int>(j);
        std::vector<std::uint64_t> below(static_cast<std::size_t>(n) * words, 0);
        for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
            const int s = *it;
            auto* row = &below[static_cast<std::size_t>(s) * words];
            for (int e : bp.out_edges(s)) {
                const int t = bp.edge(e).to;
                const auto* trow = &below[static_cast<std::size_t>(t) * words];
                for (std::size_t w = 0; w < words; ++w) row[w] |= trow[w];
                if (slot[t] >= 0) row[slot[t] / 64] |= std::uint64_t{1} << (slot[t] % 64);
            }
        }
        for (int a : qs) {
            if (!fw[a]) continue;
            const auto* row = &below[static_cast<std::size_t>(a) * words];
            for (int b : qs) {
                if (!co[b] || !(row[slot[b] / 64] >> (slot[b] % 64) & 1)) continue;
                r.pass = false;
                r.node = node;
                r.first_state_id = bp.state(a).id;
                r.second_state_id = bp.state(b).id;
                return r;
            }
        }
    }
    return r;
}

bool is_bitwise_product(const std::vector<int>& values, const Encoding& phi) {
    if (values.empty()) return true;
    std::uint64_t product = 1;
    for (int b = 0; b < phi.bits; ++b) {
        bool seen[2] = {false, false};
        for (int v : values) seen[(phi.code[v] >> b) & 1] = true;
        product *= static_cast<std::uint64_t>(seen[0]) + static_cast<std::uint64_t>(seen[1]);
    }
    std::vector<int> distinct(values);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    return product == distinct.size();
}

namespace {

struct SetFacts {
    std::uint64_t size = 0;
    std::uint64_t product = 1;
    std::vector<std::vector<int>> proj;  // by var
};

bool check_under(const BranchingProgram& bp, const StateSets& sets, const std::vector<std::array<SetFacts, 2>>& facts,
                 const Encoding& phi, BitwiseReport* fail) {
    const int n = sets.mdd->vars();
    for (int s = 0; s < bp.state_count(); ++s) {
        for (int which = 0; which < 2; ++which) {
            const auto& f = facts[s][which];
            if (f.size == 0) continue;
            if (f.size != f.product) {
                if (fail) {
                    fail->pass = false;
                    fail->state_id = bp.state(s).id;
                    fail->set = which ? 'A' : 'F';
                    fail->node = 0;
                    fail->set_size = f.size;
                    fail->product_size = f.product;
                }
                return false;
            }
            for (int v = 0; v < n; ++v) {
                if (is_bitwise_product(f.proj[v], phi)) continue;
                if (fail) {
                    fail->pass = false;
                    fail->state_id = bp.state(s).id;
                    fail->set = which ? 'A' : 'F';
                    fail->node = v + 2;
                    fail->set_size = f.proj[v].size();
                    fail->product_size = 0;
                }
                return false;
            }
        }
    }
    return true;
}

}  // namespace

BitwiseReport check_bitwise_independence(const BranchingProgram& bp, const StateSets& sets, const Encoding& phi,
                                         EncodingMode mode) {
    const int D = sets.domain;
    if (!std::has_single_bit(static_cast<unsigned>(D)))
        throw PreconditionFailed("bitwise independence needs a power-of-two domain; restrict the sweep");
    if (phi.k() != D) throw InvalidArgument("encoding size does not match the sweep domain");
    phi.validate();
    BitwiseReport r;
    r.sweep = sets.sweep;
    r.encoding = phi;
    Mdd& m = *sets.mdd;
    const int n = m.vars();
    std::vector<std::array<SetFacts, 2>> facts(bp.state_count());
    for (int s = 0; s < bp.state_count(); ++s) {
        for (int which = 0; which < 2; ++which) {
            auto id = which ? sets.A[s] : sets.F[s];
            auto& f = facts[s][which];
            f.size = m.count(id);
            if (!f.size) continue;
            f.proj.resize(n);
            for (int v = 0; v < n; ++v) {
                f.proj[v] = m.projection(id, v);
                f.product = f.product > UINT64_MAX / f.proj[v].size() ? UINT64_MAX : f.product * f.proj[v].size();
            }
        }
    }
    // The product-of-projections condition does not depend on phi.
    if (mode == EncodingMode::Search && phi.bits <= 2) {
        std::vector<int> perm(D);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            Encoding cand{phi.bits, perm};
            if (check_under(bp, sets, facts, cand, nullptr)) {
                r.encoding = cand;
                return r;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        check_under(bp, sets, facts, phi, &r);
        return r;
    }
    if (mode == EncodingMode::Search) r.warning = "encoding search skipped for more than 2 bits; checked the given encoding only";
    check_under(bp, sets, facts, phi, &r);
    return r;
}

}  // namespace pebtep
