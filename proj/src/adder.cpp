#include <algorithm>
#include <map>

#include "pebtep/analyze.hpp"
#include "pebtep/error.hpp"

namespace pebtep {

AdderReport adder_census(const BranchingProgram& bp, int pairs, int k) {
    if (pairs != 1 && pairs != 2) throw InvalidArgument("adder census supports one or two pairs");
    const int h = pairs == 1 ? 2 : 3;
    if (bp.height() != h || bp.k() != k || bp.variant() != BpVariant::Deterministic)
        throw PreconditionFailed("adder census needs a deterministic program over the matching tree");
    AdderReport r;
    r.pairs = pairs;
    r.k = k;
    const TreeShape shape(h);
    const int inputs = pairs * 2;
    std::uint64_t total = 1;
    for (int j = 0; j < inputs; ++j) total *= static_cast<std::uint64_t>(k);
    std::map<int, std::uint64_t> fe;
    TepInstance I(shape, k, ProblemVariant::FT);
    std::vector<int> x(inputs, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rest = idx;
        for (int j = inputs - 1; j >= 0; --j) {
            x[j] = static_cast<int>(rest % k);
            rest /= k;
        }
        for (int j = 0; j < inputs; ++j) I.set_leaf(shape.first_leaf() + j, x[j]);
        const int want = pairs == 1 ? (x[0] + x[1]) % k : ((x[0] + x[1]) % k) * k + (x[2] + x[3]) % k;
        auto run = run_deterministic(bp, I);
        if (!run.output || *run.output != want || run.path.edges.empty())
            throw PreconditionFailed("program does not compute the modular sum");
        ++fe[run.path.edges.back()];
    }
    r.last_edges = fe.size();
    for (auto [e, c] : fe) r.max_fe = std::max(r.max_fe, c);
    r.fe_limit = pairs == 1 ? 1 : static_cast<std::uint64_t>(k);
    r.edge_lower_bound = total / r.fe_limit;
    r.fe_ok = r.max_fe <= r.fe_limit && r.last_edges >= r.edge_lower_bound;
    r.states = bp.size();
    r.state_lower_bound = pairs == 1 ? static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(k) * k;
    r.states_ok = static_cast<std::uint64_t>(r.states) >= r.state_lower_bound;
    return r;
}

AdderSearchResult search_small_adders(int k, int max_states) {
    if (k < 2 || max_states < 1 || max_states > 4) throw InvalidArgument("adder search supports 1 to 4 states");
    AdderSearchResult r;
    r.k = k;
    r.max_states = max_states;
    for (int n = 1; n <= max_states; ++n) {
        // Each state reads u or v; edge targets are later states (0..n-1) or
        // outputs (encoded n..n+k-1).
        std::vector<int> reads(n), target(static_cast<std::size_t>(n) * k);
        std::uint64_t correct = 0;
        for (int mask = 0; mask < (1 << n); ++mask) {
            for (int q = 0; q < n; ++q) reads[q] = (mask >> q) & 1;
            std::fill(target.begin(), target.end(), 0);
            auto first_target = [&](int q) { return q + 1; };
            for (int q = 0; q < n; ++q)
                for (int v = 0; v < k; ++v) target[q * k + v] = first_target(q);
            while (true) {
                ++r.programs;
                bool ok = true;
                for (int u = 0; u < k && ok; ++u)
                    for (int v = 0; v < k && ok; ++v) {
                        int cur = 0;
                        while (cur < n) cur = target[cur * k + (reads[cur] ? v : u)];
                        ok = cur - n == (u + v) % k;
                    }
                correct += ok;
                // Odometer over targets; digit (q,v) ranges over q+1 .. n+k-1.
                int d = n * k - 1;
                while (d >= 0) {
                    const int q = d / k;
                    if (++target[d] < n + k) break;
                    target[d] = first_target(q);
                    --d;
                }
                if (d < 0) break;
            }
        }
        r.correct_by_states[n] = correct;
        if (correct && !r.min_states) r.min_states = n;
    }
    return r;
}

}  // namespace pebtep
