#include "pebtep/compile.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "pebtep/error.hpp"

namespace pebtep {

Encoding Encoding::identity(int k) {
    if (k < 2 || !std::has_single_bit(static_cast<unsigned>(k)))
        throw PreconditionFailed("alphabet size " + std::to_string(k) + " is not a power of two");
    Encoding e;
    e.bits = std::countr_zero(static_cast<unsigned>(k));
    e.code.resize(k);
    for (int v = 0; v < k; ++v) e.code[v] = v;
    return e;
}

std::vector<int> Encoding::decode_table() const {
    std::vector<int> inv(code.size(), -1);
    for (int v = 0; v < k(); ++v) {
        int c = code[v];
        if (c < 0 || c >= k() || inv[c] >= 0) throw InvalidArgument("encoding is not a bijection on [k]");
        inv[c] = v;
    }
    return inv;
}

void Encoding::validate() const {
    if (k() < 2 || !std::has_single_bit(static_cast<unsigned>(k())) || (1 << bits) != k())
        throw InvalidArgument("encoding must map [2^l] to l-bit strings");
    decode_table();
}

namespace {

// Node values are strings of `len` digits in base `radix`; position 0 is the
// most significant. Whole-pebble compilation uses one digit in base k,
// fractional compilation uses bits.
struct Digits {
    int radix;
    int len;
    std::vector<int> weight;  // weight[p] = radix^(len-1-p)

    Digits(int r, int l) : radix(r), len(l), weight(l) {
        int w = 1;
        for (int p = l - 1; p >= 0; --p) {
            weight[p] = w;
            w *= r;
        }
    }
    int digit(int v, int p) const { return (v / weight[p]) % radix; }
    int set_digit(int v, int p, int d) const { return v + (d - digit(v, p)) * weight[p]; }
};

struct Know {
    std::uint32_t black = 0;
    std::uint32_t white = 0;
    std::uint32_t all() const { return black | white; }
};

struct Layer {
    std::vector<int> nodes;  // ascending
    std::vector<Know> know;  // indexed by node
    std::vector<std::uint64_t> sub;  // radix^popcount per listed node
    std::uint64_t count = 1;
    int offset = 0;
};

std::vector<int> positions(std::uint32_t mask) {
    std::vector<int> out;
    for (int p = 0; mask; ++p, mask >>= 1)
        if (mask & 1u) out.push_back(p);
    return out;
}

std::uint32_t take_lowest_free(std::uint32_t used, int n, int len) {
    std::uint32_t got = 0;
    for (int p = 0; p < len && n > 0; ++p)
        if (!(used & (1u << p))) {
            got |= 1u << p;
            --n;
        }
    if (n > 0) throw PreconditionFailed("pebble value exceeds the available digits");
    return got;
}

std::uint32_t drop_highest(std::uint32_t mask, int n) {
    for (; n > 0; --n) {
        if (!mask) throw PreconditionFailed("forgetting more digits than are known");
        mask &= ~(std::uint32_t{1} << (31 - std::countl_zero(mask)));
    }
    return mask;
}

class LayeredCompiler {
public:
    LayeredCompiler(const PebbleSequence& seq, int k, Digits digits, std::vector<int> code, BpVariant variant,
                    const CompileOptions& opts)
        : seq_(seq), shape_(seq.shape), k_(k), d_(std::move(digits)), code_(std::move(code)),
          variant_(variant), opts_(opts) {
        decode_.assign(k_, 0);
        for (int v = 0; v < k_; ++v) decode_[code_[v]] = v;
    }

    BranchingProgram build() {
        plan_layers();
        emit_states();
        if (!opts_.keep_guess_states) eliminate_guesses();
        return assemble();
    }

private:
    bool ft() const { return opts_.problem == ProblemVariant::FT; }
    bool tracked(int node) const { return node != 1 || ft(); }

    int units(const Rational& amount) const {
        Rational u = amount * Rational(d_.len);
        if (!u.is_integer())
            throw PreconditionFailed("pebble amount " + amount.str() + " is not a multiple of 1/" +
                                     std::to_string(d_.len));
        return static_cast<int>(u.num());
    }

    void plan_layers() {
        const int n = shape_.node_count();
        std::vector<Know> know(n + 1);
        auto push_layer = [&] {
            Layer L;
            L.know = know;
            for (int i = 1; i <= n; ++i) {
                int c = std::popcount(know[i].all());
                if (c == 0) continue;
                std::uint64_t s = 1;
                for (int j = 0; j < c; ++j) s *= static_cast<std::uint64_t>(d_.radix);
                L.nodes.push_back(i);
                L.sub.push_back(s);
                if (L.count > opts_.state_cap / s) throw BudgetExceeded("layer size exceeds the state cap");
                L.count *= s;
            }
            layers_.push_back(std::move(L));
        };
        push_layer();
        for (const auto& m : seq_.moves) {
            const int i = m.node;
            switch (m.kind) {
                case MoveKind::PlaceBlack:
                    if (i == 1 && m.amount != Rational(1))
                        throw PreconditionFailed("root placements must be whole");
                    if (tracked(i)) {
                        know[i].black |= take_lowest_free(know[i].all(), units(m.amount), d_.len);
                    }
                    if (m.child) know[m.child->node].black = drop_highest(know[m.child->node].black, units(m.child->amount));
                    break;
                case MoveKind::IncreaseWhite:
                    if (i == 1) throw PreconditionFailed("white pebbles on the root are not supported");
                    know[i].white |= take_lowest_free(know[i].all(), units(m.amount), d_.len);
                    break;
                case MoveKind::RemoveWhite:
                    know[i].white = 0;
                    break;
                case MoveKind::DecreaseBlack:
                    if (i == 1) break;  // the root value is kept (FT) or never stored (BT)
                    know[i].black = drop_highest(know[i].black, units(m.amount));
                    break;
            }
            push_layer();
        }
        std::uint64_t total = 0;
        for (auto& L : layers_) {
            L.offset = static_cast<int>(total);
            total += L.count;
            if (total > opts_.state_cap) throw BudgetExceeded("compiled program exceeds the state cap");
        }
        const Layer& last = layers_.back();
        if (ft()) {
            if (last.nodes != std::vector<int>{1} || last.know[1].all() != (1u << d_.len) - 1)
                throw PreconditionFailed("strategy does not end with only the root pebbled");
        } else if (!last.nodes.empty()) {
            throw PreconditionFailed("strategy does not end with an empty configuration");
        }
    }

    void decode_rank(const Layer& L, std::uint64_t rank, std::vector<int>& vals) const {
        std::fill(vals.begin(), vals.end(), 0);
        for (int j = static_cast<int>(L.nodes.size()) - 1; j >= 0; --j) {
            std::uint64_t s = rank % L.sub[j];
            rank /= L.sub[j];
            const int node = L.nodes[j];
            auto pos = positions(L.know[node].all());
            int v = 0;
            for (int q = static_cast<int>(pos.size()) - 1; q >= 0; --q) {
                v = d_.set_digit(v, pos[q], static_cast<int>(s % d_.radix));
                s /= d_.radix;
            }
            vals[node] = v;
        }
    }

    std::uint64_t encode_rank(const Layer& L, const std::vector<int>& vals) const {
        std::uint64_t rank = 0;
        for (std::size_t j = 0; j < L.nodes.size(); ++j) {
            const int node = L.nodes[j];
            std::uint64_t s = 0;
            for (int p : positions(L.know[node].all())) s = s * d_.radix + d_.digit(vals[node], p);
            rank = rank * L.sub[j] + s;
        }
        return rank;
    }

    StateTag make_tag(int t, const std::vector<int>& vals) const {
        const Layer& L = layers_[t];
        StateTag tag{t, {}};
        for (int node : L.nodes) {
            TagEntry e{node, vals[node], 0, 0};
            const Know& kn = L.know[node];
            if (d_.len == 1) {
                (kn.black ? e.black_mask : e.white_mask) = kWholeValue;
            } else {
                for (int p : positions(kn.black)) e.black_mask |= 1u << (d_.len - 1 - p);
                for (int p : positions(kn.white)) e.white_mask |= 1u << (d_.len - 1 - p);
            }
            tag.entries.push_back(e);
        }
        return tag;
    }

    bool full(const Layer& L, int node) const { return L.know[node].all() == (1u << d_.len) - 1; }

    void emit_states() {
        const int T = static_cast<int>(seq_.moves.size());
        const int total = layers_.back().offset + static_cast<int>(layers_.back().count);
        const bool sink = variant_ == BpVariant::Deterministic && !ft();
        labels_.resize(total + (sink ? 1 : 0));
        tags_.resize(labels_.size());
        out_.resize(labels_.size());
        if (sink) {
            sink_ = total;
            labels_[sink_] = StateLabel::final_value(0);
        }
        std::vector<int> vals(shape_.node_count() + 1), next(vals.size());
        for (int t = 0; t <= T; ++t) {
            const Layer& L = layers_[t];
            for (std::uint64_t r = 0; r < L.count; ++r) {
                const int s = L.offset + static_cast<int>(r);
                decode_rank(L, r, vals);
                tags_[s] = make_tag(t, vals);
                if (t == T) {
                    labels_[s] = ft() ? StateLabel::final_value(decode_[vals[1]]) : StateLabel::accept();
                    continue;
                }
                emit_transition(t, s, vals, next);
            }
        }
    }

    void emit_transition(int t, int s, const std::vector<int>& vals, std::vector<int>& next) {
        const PebbleMove& m = seq_.moves[t];
        const Layer& L = layers_[t];
        const Layer& N = layers_[t + 1];
        const int i = m.node;
        auto edge_to = [&](const std::vector<int>& v, int label) {
            out_[s].push_back({N.offset + static_cast<int>(encode_rank(N, v)), label});
        };
        if (m.kind == MoveKind::IncreaseWhite || m.kind == MoveKind::DecreaseBlack) {
            labels_[s] = StateLabel::guess();
            next = vals;
            if (m.kind == MoveKind::DecreaseBlack) {
                edge_to(next, -1);
                return;
            }
            auto fresh = positions(N.know[i].all() & ~L.know[i].all());
            std::uint64_t combos = 1;
            for (std::size_t j = 0; j < fresh.size(); ++j) combos *= d_.radix;
            for (std::uint64_t g = 0; g < combos; ++g) {
                std::uint64_t rest = g;
                for (int q = static_cast<int>(fresh.size()) - 1; q >= 0; --q) {
                    next[i] = d_.set_digit(next[i], fresh[q], static_cast<int>(rest % d_.radix));
                    rest /= d_.radix;
                }
                edge_to(next, -1);
            }
            return;
        }
        // Query: place black (possibly sliding from a child) or remove white.
        if (shape_.is_leaf(i)) {
            labels_[s] = StateLabel::leaf(i);
        } else {
            if (!full(L, 2 * i) || !full(L, 2 * i + 1))
                throw PreconditionFailed("children of node " + std::to_string(i) + " are not fully known");
            labels_[s] = StateLabel::func(i, decode_[vals[2 * i]], decode_[vals[2 * i + 1]]);
        }
        const bool bt_root = i == 1 && !ft();
        const int outcomes = bt_root ? 2 : k_;
        const auto known = positions(L.know[i].all());
        for (int v = 0; v < outcomes; ++v) {
            if (bt_root) {
                if (v == 1) {
                    edge_to(vals, 1);
                } else if (sink_ >= 0) {
                    out_[s].push_back({sink_, 0});
                }
                continue;
            }
            const int c = code_[v];
            bool consistent = std::all_of(known.begin(), known.end(),
                                          [&](int p) { return d_.digit(c, p) == d_.digit(vals[i], p); });
            if (!consistent) continue;
            next = vals;
            next[i] = c;
            edge_to(next, v);
        }
    }

    void eliminate_guesses() {
        const int n = static_cast<int>(labels_.size());
        std::vector<char> elim(n, 0);
        for (int s = 0; s < n; ++s) elim[s] = labels_[s].kind == StateKind::Guess && s != 0;
        for (int s = n - 1; s >= 0; --s) {
            bool any = std::any_of(out_[s].begin(), out_[s].end(), [&](auto& e) { return elim[e.first]; });
            if (!any) continue;
            std::vector<std::pair<int, int>> expanded;
            for (auto [to, label] : out_[s]) {
                if (!elim[to]) {
                    expanded.push_back({to, label});
                    continue;
                }
                for (auto [to2, unused] : out_[to]) expanded.push_back({to2, label});
            }
            out_[s] = std::move(expanded);
        }
        removed_ = elim;
    }

    BranchingProgram assemble() {
        const int n = static_cast<int>(labels_.size());
        removed_.resize(n, 0);
        std::vector<char> reach(n, 0);
        reach[0] = 1;
        for (int s = 0; s < n; ++s) {  // layered: edges always go to larger indices
            if (!reach[s] || removed_[s]) continue;
            for (auto [to, label] : out_[s]) reach[to] = 1;
        }
        std::vector<char> keep(n, 0);
        for (int s = 0; s < n; ++s) keep[s] = reach[s] && !removed_[s];
        if (variant_ == BpVariant::Nondeterministic) {
            std::vector<char> co(n, 0);
            for (int s = n - 1; s >= 0; --s) {
                if (!keep[s]) continue;
                if (labels_[s].is_terminal()) {
                    co[s] = 1;
                    continue;
                }
                for (auto [to, label] : out_[s])
                    if (co[to]) co[s] = 1;
            }
            for (int s = 0; s < n; ++s) keep[s] = keep[s] && (co[s] || s == 0);
        }
        const bool has_guess = opts_.keep_guess_states;
        BranchingProgram bp(shape_.height(), k_, opts_.problem,
                            has_guess ? BpVariant::Nondeterministic : variant_);
        std::vector<int> index(n, -1);
        for (int s = 0; s < n; ++s)
            if (keep[s]) index[s] = bp.add_state(labels_[s], tags_[s]);
        for (int s = 0; s < n; ++s) {
            if (!keep[s]) continue;
            for (auto [to, label] : out_[s])
                if (keep[to]) bp.add_edge(index[s], index[to], label);
        }
        bp.set_start(index[0]);
        bp.finalize();
        return bp;
    }

    const PebbleSequence& seq_;
    TreeShape shape_;
    int k_;
    Digits d_;
    std::vector<int> code_, decode_;
    BpVariant variant_;
    CompileOptions opts_;
    std::vector<Layer> layers_;
    std::vector<StateLabel> labels_;
    std::vector<std::optional<StateTag>> tags_;
    std::vector<std::vector<std::pair<int, int>>> out_;
    std::vector<char> removed_;
    int sink_ = -1;
};

void check_common(const PebbleSequence& seq, int h, int k) {
    if (seq.shape.height() != h) throw InvalidArgument("strategy height does not match h");
    if (k < 2 || k > kMaxAlphabet) throw InvalidArgument("alphabet size k must be in [2, 65536]");
    auto report = check_sequence(seq);
    if (!report.valid) throw PreconditionFailed("strategy is not a valid pebbling: " + report.error);
}

std::vector<int> identity_code(int k) {
    std::vector<int> c(k);
    for (int v = 0; v < k; ++v) c[v] = v;
    return c;
}

}  // namespace

BranchingProgram compile_wbw_to_ntbp(const PebbleSequence& seq, int h, int k, const CompileOptions& opts) {
    check_common(seq, h, k);
    if (seq.variant == PebbleVariant::FractionalBW)
        for (const auto& c : seq.configs())
            for (int i = 1; i <= seq.shape.node_count(); ++i)
                if (!c.black(i).is_integer() || !c.white(i).is_integer())
                    throw PreconditionFailed("strategy uses fractional pebbles");
    if (!is_read_once(seq)) throw PreconditionFailed("strategy is not read-once");
    return LayeredCompiler(seq, k, Digits(k, 1), identity_code(k), BpVariant::Nondeterministic, opts).build();
}

BranchingProgram compile_black_to_dtbp(const PebbleSequence& seq, int h, int k, const CompileOptions& opts) {
    check_common(seq, h, k);
    if (seq.variant != PebbleVariant::Black) throw PreconditionFailed("strategy is not a black pebbling");
    return LayeredCompiler(seq, k, Digits(k, 1), identity_code(k), BpVariant::Deterministic, opts).build();
}

BranchingProgram compile_fractional_to_bintbp(const PebbleSequence& seq, int h, int k, const Encoding& phi,
                                              const CompileOptions& opts) {
    if (k < 2 || !std::has_single_bit(static_cast<unsigned>(k)))
        throw PreconditionFailed("alphabet size " + std::to_string(k) + " is not a power of two");
    check_common(seq, h, k);
    phi.validate();
    if (phi.k() != k) throw InvalidArgument("encoding size does not match k");
    return LayeredCompiler(seq, k, Digits(2, phi.bits), phi.code, BpVariant::Nondeterministic, opts).build();
}

}  // namespace pebtep
