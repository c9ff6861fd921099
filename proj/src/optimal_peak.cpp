#include <deque>
#include <string>
#include <unordered_set>
#include <vector>

#include "pebtep/error.hpp"
#include "pebtep/pebbling.hpp"

namespace pebtep {

namespace {

// Configurations with values in multiples of 1/d, encoded as a base-m number
// with one digit per node in heap order (digit of node 1 least significant).
// A digit enumerates the pairs (b, w) with b + w <= d in units of 1/d.
class ConfigSpace {
public:
    ConfigSpace(int h, PebbleVariant variant, int d) : shape_(h), variant_(variant), d_(d) {
        for (int b = 0; b <= d; ++b)
            for (int w = 0; b + w <= d; ++w) {
                pairs_.push_back({b, w});
            }
        digit_index_.assign((d + 1) * (d + 1), -1);
        for (int i = 0; i < static_cast<int>(pairs_.size()); ++i)
            digit_index_[pairs_[i].b * (d + 1) + pairs_[i].w] = i;
        radix_ = pairs_.size();
        pow_.assign(shape_.node_count() + 2, 1);
        for (int i = 2; i <= shape_.node_count() + 1; ++i) pow_[i] = pow_[i - 1] * radix_;
    }

    // m^n, or nullopt past 2^63.
    std::optional<std::uint64_t> size() const {
        unsigned __int128 s = 1;
        for (int i = 0; i < shape_.node_count(); ++i) {
            s *= radix_;
            if (s > (static_cast<unsigned __int128>(1) << 63)) return std::nullopt;
        }
        return static_cast<std::uint64_t>(s);
    }

    struct Pair {
        int b, w;
    };

    void decode(std::uint64_t code, std::vector<Pair>& out) const {
        out.resize(shape_.node_count() + 1);
        for (int i = 1; i <= shape_.node_count(); ++i) {
            out[i] = pairs_[code % radix_];
            code /= radix_;
        }
    }

    std::uint64_t with(std::uint64_t code, int node, const Pair& old, const Pair& now) const {
        auto digit = [&](const Pair& p) { return static_cast<std::uint64_t>(digit_index_[p.b * (d_ + 1) + p.w]); };
        return code - digit(old) * pow_[node] + digit(now) * pow_[node];
    }

    // Calls visit(successor code, successor total) for every legal move from
    // `code` whose successor total is <= budget (all in units of 1/d).
    template <typename Visit>
    void successors(std::uint64_t code, int total, int budget, std::vector<Pair>& cfg, Visit&& visit) const {
        decode(code, cfg);
        const int n = shape_.node_count();
        const bool whites = variant_ != PebbleVariant::Black;
        for (int i = 1; i <= n; ++i) {
            const Pair cur = cfg[i];
            const int room = d_ - cur.b - cur.w;
            const bool leaf = shape_.is_leaf(i);
            const bool full = leaf || (cfg[2 * i].b + cfg[2 * i].w == d_ && cfg[2 * i + 1].b + cfg[2 * i + 1].w == d_);
            for (int a = 1; a <= cur.b; ++a) visit(with(code, i, cur, {cur.b - a, cur.w}), total - a);
            if (whites)
                for (int a = 1; a <= room && total + a <= budget; ++a)
                    visit(with(code, i, cur, {cur.b, cur.w + a}), total + a);
            if (!full) continue;
            if (cur.w > 0) visit(with(code, i, cur, {cur.b, 0}), total - cur.w);
            for (int a = 1; a <= room; ++a) {
                const Pair placed{cur.b + a, cur.w};
                const std::uint64_t base = with(code, i, cur, placed);
                if (total + a <= budget) visit(base, total + a);
                if (leaf) continue;
                for (int c : {2 * i, 2 * i + 1}) {
                    const Pair child = cfg[c];
                    for (int ca = 1; ca <= child.b; ++ca)
                        if (total + a - ca <= budget)
                            visit(with(base, c, child, {child.b - ca, child.w}), total + a - ca);
                }
            }
        }
    }

    int root_black(std::uint64_t code) const { return pairs_[code % radix_].b; }
    int denominator() const { return d_; }

    int total(std::uint64_t code) const {
        int t = 0;
        for (int i = 1; i <= shape_.node_count(); ++i) {
            const auto& p = pairs_[code % radix_];
            t += p.b + p.w;
            code /= radix_;
        }
        return t;
    }

private:
    TreeShape shape_;
    PebbleVariant variant_;
    int d_;
    std::vector<Pair> pairs_;
    std::vector<int> digit_index_;
    std::uint64_t radix_ = 1;
    std::vector<std::uint64_t> pow_;
};

// Is there a pebbling whose configurations never exceed `budget` units?
bool feasible(const ConfigSpace& space, int budget) {
    std::vector<ConfigSpace::Pair> scratch;
    // Phase 1: everything reachable from the empty configuration.
    std::unordered_set<std::uint64_t> seen{0};
    std::deque<std::uint64_t> queue{0};
    std::vector<std::uint64_t> root_full;
    while (!queue.empty()) {
        const auto code = queue.front();
        queue.pop_front();
        if (space.root_black(code) == space.denominator()) root_full.push_back(code);
        space.successors(code, space.total(code), budget, scratch, [&](std::uint64_t next, int) {
            if (seen.insert(next).second) queue.push_back(next);
        });
    }
    if (root_full.empty()) return false;
    // Phase 2: from any root-pebbled configuration back to empty.
    std::unordered_set<std::uint64_t> seen2(root_full.begin(), root_full.end());
    queue.assign(root_full.begin(), root_full.end());
    while (!queue.empty()) {
        const auto code = queue.front();
        queue.pop_front();
        if (code == 0) return true;
        space.successors(code, space.total(code), budget, scratch, [&](std::uint64_t next, int) {
            if (seen2.insert(next).second) queue.push_back(next);
        });
    }
    return false;
}

}  // namespace

Rational optimal_peak(int h, PebbleVariant variant, int denominator, std::uint64_t cap) {
    if (denominator < 1) throw InvalidArgument("denominator must be positive");
    if (variant != PebbleVariant::FractionalBW && denominator != 1)
        throw InvalidArgument("black and whole black-white pebbling use denominator 1");
    ConfigSpace space(h, variant, denominator);
    auto size = space.size();
    if (!size || *size > cap)
        throw BudgetExceeded("configuration space of height " + std::to_string(h) + " at denominator " +
                             std::to_string(denominator) + " exceeds cap " + std::to_string(cap));
    // The black strategy always succeeds with h pebbles; the root alone needs one.
    int lo = denominator, hi = h * denominator;
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        if (feasible(space, mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return Rational(lo, denominator);
}

}  // namespace pebtep
