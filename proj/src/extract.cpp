#include <algorithm>
#include <bit>
#include <random>
#include <set>
#include <thread>

#include "pebtep/analyze.hpp"
#include "pebtep/error.hpp"

namespace pebtep {

namespace {

int queried_at(const BranchingProgram& bp, const ComputationPath& path, std::size_t p) {
    return bp.state(path.states[p]).label.queried_node();
}

void require_accepting(const BranchingProgram& bp, const TepInstance& I, const ComputationPath& path) {
    if (!path_consistent(bp, I, path) || path.states.back() != bp.accept())
        throw PreconditionFailed("path is not an accepting computation path of the instance");
}

// Configurations with a root step spliced in after position root_pos, as
// a sequence of moves.
PebbleSequence as_sequence(const TreeShape& shape, PebbleVariant variant, int denominator,
                           const std::vector<PebbleConfig>& configs, std::size_t root_pos) {
    std::vector<PebbleConfig> all;
    for (std::size_t p = 0; p < configs.size(); ++p) {
        all.push_back(configs[p]);
        if (p == root_pos && p + 1 < configs.size()) {
            PebbleConfig root = configs[p + 1];
            root.set_black(1, 1);
            all.push_back(root);
        }
    }
    PebbleSequence seq{shape, variant, denominator, {}};
    for (std::size_t p = 0; p + 1 < all.size(); ++p) {
        auto mv = moves_between(all[p], all[p + 1]);
        seq.moves.insert(seq.moves.end(), mv.begin(), mv.end());
    }
    return seq;
}

}  // namespace

std::vector<PebbleConfig> whole_configs_along(const BranchingProgram& bp, const ComputationPath& path) {
    const TreeShape shape(bp.height());
    const int n = shape.node_count();
    const int m = static_cast<int>(path.states.size());
    std::vector<int> last_occ(n + 1, -1);
    for (int p = 0; p < m; ++p)
        if (int q = queried_at(bp, path, p)) last_occ[q] = p;
    std::vector<int> last_before(n + 1, -1);  // last query strictly before p
    std::vector<PebbleConfig> out;
    out.reserve(m);
    for (int p = 0; p < m; ++p) {
        if (p > 0)
            if (int q = queried_at(bp, path, p - 1)) last_before[q] = p - 1;
        PebbleConfig c(shape);
        for (int i = 2; i <= n; ++i) {
            const int par = i / 2;
            const bool black = last_before[i] >= 0 && last_occ[par] >= p && last_before[par] < last_before[i];
            const bool white = last_before[par] >= 0 && last_occ[i] >= p && last_before[i] < last_before[par];
            if (black) c.set_black(i, 1);
            if (white) c.set_white(i, 1);
        }
        out.push_back(std::move(c));
    }
    return out;
}

PathPebbling extract_rontbp_pebbling(const BranchingProgram& bp, const TepInstance& instance,
                                     const ComputationPath& path) {
    require_accepting(bp, instance, path);
    const TreeShape shape(bp.height());
    std::vector<int> seen(shape.node_count() + 1, 0);
    std::size_t root_pos = 0;
    for (std::size_t p = 0; p < path.states.size(); ++p)
        if (int q = queried_at(bp, path, p)) {
            if (++seen[q] > 1) throw PreconditionFailed("path queries node " + std::to_string(q) + " twice");
            if (q == 1) root_pos = p;
        }
    for (int i = 1; i <= shape.node_count(); ++i)
        if (!seen[i]) throw PreconditionFailed("path never queries node " + std::to_string(i));
    PathPebbling out;
    out.configs = whole_configs_along(bp, path);
    out.sequence = as_sequence(shape, PebbleVariant::WholeBW, 1, out.configs, root_pos);
    return out;
}

std::optional<ComputationPath> accepting_path_through(const BranchingProgram& bp, const TepInstance& instance,
                                                      int state) {
    auto fw = forward_reachable(bp, instance);
    auto co = backward_reachable(bp, instance);
    if (!fw[state] || !co[state]) return std::nullopt;
    ComputationPath head;
    int cur = state;
    head.states.push_back(cur);
    while (cur != bp.start()) {
        int chosen = -1;
        for (int e : bp.in_edges(cur))
            if (fw[bp.edge(e).from] && edge_consistent(bp, e, instance)) {
                chosen = e;
                break;
            }
        head.edges.push_back(chosen);
        cur = bp.edge(chosen).from;
        head.states.push_back(cur);
    }
    std::reverse(head.states.begin(), head.states.end());
    std::reverse(head.edges.begin(), head.edges.end());
    cur = state;
    while (cur != bp.accept()) {
        int chosen = -1;
        for (int e : bp.out_edges(cur))
            if (co[bp.edge(e).to] && edge_consistent(bp, e, instance)) {
                chosen = e;
                break;
            }
        head.edges.push_back(chosen);
        cur = bp.edge(chosen).to;
        head.states.push_back(cur);
    }
    return head;
}

FindInputResult find_inputs(const BranchingProgram& bp, int state, const PebbleConfig& config,
                            const std::map<int, int>& unpebbled, std::uint64_t step_cap) {
    const TreeShape shape(bp.height());
    const int n = shape.node_count();
    std::vector<int> val(n + 1, -1);
    std::vector<char> pebbled(n + 1, 0), white(n + 1, 0);
    for (int i = 2; i <= n; ++i) {
        pebbled[i] = config.is_pebbled(i);
        white[i] = !config.white(i).is_zero();
        auto it = unpebbled.find(i);
        if (pebbled[i] != (it == unpebbled.end()))
            throw InvalidArgument("unpebbled values must cover exactly the nodes without pebbles");
        if (it != unpebbled.end()) {
            if (it->second < 0 || it->second >= bp.k()) throw InvalidArgument("node value outside [k]");
            val[i] = it->second;
        }
    }
    val[1] = 1;  // f_1 is constantly 1 on E

    std::set<std::vector<int>> found;
    std::vector<std::vector<int>> order;
    std::uint64_t steps = 0;
    // Explores every path from `state`, fixing pebbled values as they are
    // revealed: black children by the arguments of their parent's query,
    // white nodes (and, defensively, anything unset) by the edge taken.
    std::function<void(int)> explore = [&](int cur) {
        if (++steps > step_cap) throw BudgetExceeded("FindPebbled exceeded its step budget");
        const auto& l = bp.state(cur).label;
        if (l.kind == StateKind::Accept || (l.kind == StateKind::Final && l.value == 1 &&
                                            bp.problem() == ProblemVariant::FT)) {
            std::vector<int> cand;
            for (int i = 2; i <= n; ++i)
                if (pebbled[i]) {
                    if (val[i] < 0) return;
                    cand.push_back(val[i]);
                }
            if (found.insert(cand).second) order.push_back(cand);
            return;
        }
        if (l.kind == StateKind::Final) return;
        if (l.kind == StateKind::Guess) {
            for (int e : bp.out_edges(cur)) explore(bp.edge(e).to);
            return;
        }
        std::vector<int> undo;
        auto bind = [&](int node, int v) {
            if (val[node] < 0) {
                val[node] = v;
                undo.push_back(node);
                return true;
            }
            return val[node] == v;
        };
        const int i = l.node;
        bool ok = true;
        if (l.kind == StateKind::Func) ok = bind(2 * i, l.x) && bind(2 * i + 1, l.y);
        if (ok) {
            for (int e : bp.out_edges(cur)) {
                const int lab = bp.edge(e).label;
                if (val[i] >= 0) {
                    if (lab == val[i]) explore(bp.edge(e).to);
                } else {
                    val[i] = lab;
                    explore(bp.edge(e).to);
                    val[i] = -1;
                }
            }
        }
        for (int node : undo) val[node] = -1;
    };
    explore(state);

    FindInputResult r;
    r.candidates = order;
    std::set<std::vector<int>> seen;
    for (const auto& cand : order) {
        std::vector<int> full(n - 1);
        std::size_t c = 0;
        for (int i = 2; i <= n; ++i) full[i - 2] = pebbled[i] ? cand[c++] : val[i];
        if (!seen.insert(full).second) continue;
        auto I = hard_input(bp.height(), bp.k(), full);
        if (forward_reachable(bp, I)[state] && backward_reachable(bp, I)[state]) r.matches.push_back(std::move(I));
    }
    return r;
}

TepInstance find_input(const BranchingProgram& bp, int state, const PebbleConfig& config,
                       const std::map<int, int>& unpebbled) {
    auto r = find_inputs(bp, state, config, unpebbled);
    if (r.matches.empty()) throw PreconditionFailed("no input in E is consistent with the given values");
    return r.matches.front();
}

// --- fractional ------------------------------------------------------------------

Rational StateValues::total_non_root() const {
    Rational t;
    for (std::size_t i = 2; i < black.size(); ++i) t += black[i] + white[i];
    return t;
}

std::vector<StateValues> state_pebble_values(const BranchingProgram& bp, const StateSets& sets) {
    const int D = sets.domain;
    if (!std::has_single_bit(static_cast<unsigned>(D)))
        throw PreconditionFailed("pebble values from state sets need a power-of-two domain");
    const int ell = std::countr_zero(static_cast<unsigned>(D));
    const TreeShape shape(bp.height());
    const int n = shape.node_count();
    std::vector<StateValues> out(bp.state_count());
    for (int s = 0; s < bp.state_count(); ++s) {
        auto& sv = out[s];
        sv.black.assign(n + 1, Rational(0));
        sv.white.assign(n + 1, Rational(0));
        if (sets.A[s] == Mdd::kEmpty) continue;
        sv.defined = true;
        for (int i = 2; i <= n; ++i) {
            const auto mf = sets.proj_F(s, i).size(), ma = sets.proj_A(s, i).size();
            if (!std::has_single_bit(mf) || !std::has_single_bit(ma)) {
                sv.defined = false;
                continue;
            }
            const int lf = std::countr_zero(mf), la = std::countr_zero(ma);
            sv.black[i] = Rational(1) - Rational(lf, ell);
            sv.white[i] = Rational(lf - la, ell);
        }
    }
    return out;
}

CriticalPebbling critical_pebbling(const BranchingProgram& bp, const std::vector<StateValues>& values,
                                   const ComputationPath& path) {
    const TreeShape shape(bp.height());
    const int n = shape.node_count();
    const int m = static_cast<int>(path.states.size());
    CriticalPebbling cp;
    cp.path = path;
    std::vector<std::vector<int>> at(n + 1);  // query positions per node
    for (int p = 0; p < m; ++p)
        if (int q = queried_at(bp, path, p)) at[q].push_back(p);
    if (at[1].empty()) {
        cp.issues.push_back("path never queries the root");
        return cp;
    }
    std::vector<std::vector<int>> crit(n + 1);
    crit[1] = {at[1].back()};
    struct Interval {
        int node, from, to;  // positions, inclusive; `to` may be refined later
        bool black;
        Rational amount;
        int anchor;  // critical position of the node itself
    };
    std::vector<Interval> intervals;
    for (int j = 2; j <= n; ++j) {
        for (int sp : crit[j / 2]) {
            const auto& sv = values[path.states[sp]];
            if (!sv.defined) {
                cp.issues.push_back("values undefined at state " + std::to_string(bp.state(path.states[sp]).id));
                continue;
            }
            if (sv.black[j] > Rational(0)) {
                auto it = std::lower_bound(at[j].begin(), at[j].end(), sp);
                if (it == at[j].begin()) {
                    cp.issues.push_back("no query of node " + std::to_string(j) + " before position " + std::to_string(sp));
                } else {
                    const int s = *std::prev(it);
                    crit[j].push_back(s);
                    intervals.push_back({j, s, sp, true, sv.black[j], s});
                }
            }
            if (sv.white[j] > Rational(0)) {
                auto it = std::upper_bound(at[j].begin(), at[j].end(), sp);
                if (it == at[j].end()) {
                    cp.issues.push_back("no query of node " + std::to_string(j) + " after position " + std::to_string(sp));
                } else {
                    crit[j].push_back(*it);
                    intervals.push_back({j, sp, *it, false, sv.white[j], *it});
                }
            }
        }
        std::sort(crit[j].begin(), crit[j].end());
        crit[j].erase(std::unique(crit[j].begin(), crit[j].end()), crit[j].end());
    }
    std::set<int> all{0, m - 1};
    for (int j = 1; j <= n; ++j) all.insert(crit[j].begin(), crit[j].end());
    cp.critical.assign(all.begin(), all.end());
    auto next_crit = [&](int p) {
        auto it = all.upper_bound(p);
        return it == all.end() ? m : *it;
    };
    // Black: from the critical state after the node's own query up to the
    // parent's critical state. White: from the parent's critical state up to
    // the node's verifying query.
    for (auto& iv : intervals)
        if (iv.black) iv.from = next_crit(iv.anchor);
    for (int c : cp.critical) {
        PebbleConfig cfg(shape);
        for (const auto& iv : intervals) {
            if (c < iv.from || c > iv.to) continue;
            if (iv.black)
                cfg.set_black(iv.node, std::max(cfg.black(iv.node), iv.amount));
            else
                cfg.set_white(iv.node, std::max(cfg.white(iv.node), iv.amount));
        }
        cp.configs.push_back(std::move(cfg));
    }
    const std::size_t root_idx =
        static_cast<std::size_t>(std::find(cp.critical.begin(), cp.critical.end(), crit[1][0]) - cp.critical.begin());
    int den = 1;
    for (const auto& iv : intervals) den = std::max<int>(den, static_cast<int>(iv.amount.den()));
    try {
        cp.sequence = as_sequence(shape, PebbleVariant::FractionalBW, den, cp.configs, root_idx);
    } catch (const IllegalMove& e) {
        cp.sequence = PebbleSequence{shape, PebbleVariant::FractionalBW, den, {}};
        cp.issues.push_back(e.what());
    }
    return cp;
}

const ClaimResult& FractionalExtraction::claim(std::string_view name) const {
    for (const auto& c : claims)
        if (c.name == name) return c;
    throw InvalidArgument("unknown claim '" + std::string(name) + "'");
}

bool FractionalExtraction::all_pass() const {
    return std::all_of(claims.begin(), claims.end(), [](const ClaimResult& c) { return c.pass; });
}

namespace {

struct ClaimTally {
    std::uint64_t checked = 0, violations = 0;
    std::uint64_t first_index = UINT64_MAX;
    std::string witness;

    void record(bool ok, std::uint64_t index, const std::function<std::string()>& describe) {
        ++checked;
        if (ok) return;
        ++violations;
        if (index < first_index) {
            first_index = index;
            witness = describe();
        }
    }
    void merge(const ClaimTally& o) {
        checked += o.checked;
        violations += o.violations;
        if (o.first_index < first_index) {
            first_index = o.first_index;
            witness = o.witness;
        }
    }
    ClaimResult result(std::string name) const { return {std::move(name), violations == 0, checked, violations, witness}; }
};

std::string describe_values(const std::vector<int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

}  // namespace

FractionalExtraction extract_bintbp_pebbling(const BranchingProgram& bp, const StateSets& sets,
                                             const ExtractionOptions& opts) {
    if (sets.sweep != SweepKind::E || sets.domain != bp.k())
        throw PreconditionFailed("fractional extraction needs unrestricted E state sets");
    FractionalExtraction out;
    {
        auto thrifty = check_thrifty(bp, sets, 1);
        auto bitwise = check_bitwise_independence(bp, sets, Encoding::identity(bp.k()));
        if (!thrifty.pass || !bitwise.pass) {
            out.preconditions_met = false;
            out.precondition_note = std::string(thrifty.pass ? "" : "not thrifty; ") +
                                    (bitwise.pass ? "" : "not bitwise independent at state " +
                                                             std::to_string(bitwise.state_id) + " (" + bitwise.set +
                                                             (bitwise.node ? ", node " + std::to_string(bitwise.node) : "") + ")");
            if (!opts.waive_preconditions) throw PreconditionFailed("extraction preconditions fail: " + out.precondition_note);
        }
    }
    const TreeShape shape(bp.height());
    const int n = shape.node_count();
    const int N = shape.non_root_count();
    const int ell = std::countr_zero(static_cast<unsigned>(bp.k()));
    out.per_state = state_pebble_values(bp, sets);

    ClaimTally powers, rng, sum, start, acc, inputs;
    for (int s = 0; s < bp.state_count(); ++s) {
        if (sets.A[s] == Mdd::kEmpty) continue;
        const auto& sv = out.per_state[s];
        const std::string id = std::to_string(bp.state(s).id);
        powers.record(sv.defined, s, [&] { return "state " + id + " has a projection size that is not a power of two"; });
        if (!sv.defined) continue;
        for (int i = 2; i <= n; ++i) {
            const auto &b = sv.black[i], &w = sv.white[i];
            rng.record(b >= Rational(0) && b <= Rational(1) && w >= Rational(0) && w <= Rational(1), s,
                       [&] { return "state " + id + " node " + std::to_string(i) + ": b=" + b.str() + " w=" + w.str(); });
            sum.record(b + w <= Rational(1), s,
                       [&] { return "state " + id + " node " + std::to_string(i) + ": b+w=" + (b + w).str(); });
        }
        const Rational p = sv.total_non_root();
        const Rational bits = (Rational(N) - p) * Rational(ell);
        const std::uint64_t count = sets.count_A(s);
        const bool ok = bits.is_integer() && bits.num() >= 0 && bits.num() < 64 &&
                        count == (std::uint64_t{1} << bits.num());
        inputs.record(ok, s, [&] {
            return "state " + id + ": pebbles " + p.str() + ", |A_s| = " + std::to_string(count);
        });
    }
    auto empty_at = [&](int s) {
        const auto& sv = out.per_state[s];
        return sv.defined && sv.total_non_root().is_zero();
    };
    start.record(empty_at(bp.start()), 0, [] { return "start state is not empty"; });
    if (bp.accept() >= 0) acc.record(empty_at(bp.accept()), 0, [] { return "accepting state is not empty"; });

    // Per-input claims along designated paths.
    const std::uint64_t e_size = count_hard_inputs(bp.height(), bp.k());
    const bool exhaustive = e_size <= opts.exhaustive_limit;
    const std::uint64_t total = exhaustive ? e_size : opts.samples;
    const int jobs = std::max(1, opts.jobs);
    struct Tallies {
        ClaimTally children, incdec, underest, underest_critical, valid;
        std::vector<std::pair<std::uint64_t, CriticalPebbling>> kept;
    };
    std::vector<Tallies> parts(jobs);
    auto work = [&](int j) {
        auto& t = parts[j];
        const std::uint64_t lo = total * j / jobs, hi = total * (j + 1) / jobs;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            std::vector<int> vals;
            if (exhaustive) {
                vals = hard_input_values_at(bp.height(), bp.k(), idx);
            } else {
                std::mt19937_64 g(opts.seed * 0x9E3779B97F4A7C15ull + idx);
                vals = evaluate(random_hard_input(bp.height(), bp.k(), g)).non_root_tuple();
            }
            const auto I = hard_input(bp.height(), bp.k(), vals);
            auto path = designated_path(bp, I);
            auto where = [&] { return "input " + describe_values(vals); };
            if (!path) {
                t.valid.record(false, idx, [&] { return where() + " has no accepting path"; });
                continue;
            }
            auto cp = critical_pebbling(bp, out.per_state, *path);
            // at a critical state querying j both children are full
            for (int c : cp.critical) {
                const auto& l = bp.state(path->states[c]).label;
                if (l.kind != StateKind::Func) continue;
                const auto& sv = out.per_state[path->states[c]];
                for (int ch : {2 * l.node, 2 * l.node + 1}) {
                    if (ch > n) continue;
                    t.children.record(sv.defined && sv.black[ch] + sv.white[ch] == Rational(1), idx, [&] {
                        return where() + ": child " + std::to_string(ch) + " not full at state " +
                               std::to_string(bp.state(path->states[c]).id);
                    });
                }
            }
            // black increases / white decreases only with full children
            for (std::size_t c = 1; c < cp.configs.size(); ++c) {
                const auto &prev = cp.configs[c - 1], &cur = cp.configs[c];
                for (int j2 = 2; j2 <= n; ++j2) {
                    if (!(cur.black(j2) > prev.black(j2)) && !(cur.white(j2) < prev.white(j2))) continue;
                    if (shape.is_leaf(j2)) continue;
                    t.incdec.record(prev.is_full(2 * j2) && prev.is_full(2 * j2 + 1), idx, [&] {
                        return where() + ": node " + std::to_string(j2) + " changes at critical position " +
                               std::to_string(cp.critical[c]) + " without full children";
                    });
                }
            }
            // critical values never exceed the per-state values
            std::size_t ci = 0;
            for (std::size_t p = 0; p < path->states.size(); ++p) {
                while (ci + 1 < cp.critical.size() && cp.critical[ci + 1] <= static_cast<int>(p)) ++ci;
                if (cp.configs.empty()) break;
                const auto& cfg = cp.configs[ci];
                const auto& sv = out.per_state[path->states[p]];
                const bool is_crit = cp.critical[ci] == static_cast<int>(p);
                for (int i = 2; i <= n; ++i) {
                    const bool ok = sv.defined && cfg.black(i) <= sv.black[i] && cfg.white(i) <= sv.white[i];
                    auto describe = [&] {
                        return where() + ": node " + std::to_string(i) + " at state " +
                               std::to_string(bp.state(path->states[p]).id) + " critical (" + cfg.black(i).str() + "," +
                               cfg.white(i).str() + ") vs state (" + sv.black[i].str() + "," + sv.white[i].str() + ")";
                    };
                    t.underest.record(ok, idx, describe);
                    if (is_crit) t.underest_critical.record(ok, idx, describe);
                }
            }
            auto rep = check_sequence(cp.sequence);
            const bool valid = cp.issues.empty() && rep.valid;
            t.valid.record(valid, idx, [&] {
                return where() + ": " + (cp.issues.empty() ? rep.error : cp.issues.front());
            });
            if (idx < opts.keep_paths) t.kept.emplace_back(idx, std::move(cp));
        }
    };
    std::vector<std::thread> threads;
    for (int j = 1; j < jobs; ++j) threads.emplace_back(work, j);
    work(0);
    for (auto& th : threads) th.join();
    Tallies all;
    for (auto& p : parts) {
        all.children.merge(p.children);
        all.incdec.merge(p.incdec);
        all.underest.merge(p.underest);
        all.underest_critical.merge(p.underest_critical);
        all.valid.merge(p.valid);
        for (auto& k : p.kept) out.samples.push_back(std::move(k.second));
    }
    out.inputs_checked = total;
    out.claims = {powers.result("powers-of-two"),       rng.result("value-range"),
                  sum.result("total"),             start.result("start-empty"),
                  acc.result("accept-empty"),             inputs.result("bucket-size"),
                  all.children.result("children-full"), all.incdec.result("full-children-on-change"),
                  all.underest.result("underestimate"), all.underest_critical.result("underestimate-critical"),
                  all.valid.result("valid-pebbling")};
    return out;
}

}  // namespace pebtep
