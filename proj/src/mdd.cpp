#include "pebtep/mdd.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "pebtep/error.hpp"

namespace pebtep {

namespace {
constexpr Mdd::Id kTrue = 1;

std::uint64_t pair_key(Mdd::Id a, Mdd::Id b) { return (std::uint64_t{a} << 32) | b; }
}  // namespace

std::size_t Mdd::SpanHash::operator()(const std::vector<Id>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Id x : v) {
        h ^= x;
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
}

Mdd::Mdd(int vars, int domain) : vars_(vars), domain_(domain) {
    if (vars < 1 || domain < 1 || domain > (1 << 16)) throw InvalidArgument("bad decision diagram dimensions");
    level_ = {-1, vars};
    children_.assign(2 * static_cast<std::size_t>(domain), kEmpty);
    full_.assign(vars + 1, kTrue);
    std::vector<Id> kids(domain);
    for (int L = vars - 1; L >= 0; --L) {
        std::fill(kids.begin(), kids.end(), full_[L + 1]);
        full_[L] = make(L, kids);
    }
}

Mdd::Id Mdd::make(int level, std::span<const Id> kids) {
    if (std::all_of(kids.begin(), kids.end(), [](Id c) { return c == kEmpty; })) return kEmpty;
    std::vector<Id> key(kids.begin(), kids.end());
    key.push_back(static_cast<Id>(level));
    auto it = unique_.find(key);
    if (it != unique_.end()) return it->second;
    if (level_.size() >= std::numeric_limits<Id>::max() - 1) throw BudgetExceeded("decision diagram too large");
    Id id = static_cast<Id>(level_.size());
    level_.push_back(level);
    children_.insert(children_.end(), kids.begin(), kids.end());
    unique_.emplace(std::move(key), id);
    return id;
}

Mdd::Id Mdd::predicate(std::span<const int> vars, const std::function<bool(std::span<const int>)>& pred) {
    for (std::size_t j = 0; j < vars.size(); ++j)
        if (vars[j] < 0 || vars[j] >= vars_ || (j && vars[j] <= vars[j - 1]))
            throw InvalidArgument("predicate variables must be ascending and in range");
    std::vector<int> vals(vars.size());
    std::function<Id(int, std::size_t)> build = [&](int level, std::size_t idx) -> Id {
        if (idx == vars.size()) return pred(vals) ? full_[level] : kEmpty;
        std::vector<Id> kids(domain_);
        if (vars[idx] == level) {
            for (int v = 0; v < domain_; ++v) {
                vals[idx] = v;
                kids[v] = build(level + 1, idx + 1);
            }
        } else {
            std::fill(kids.begin(), kids.end(), build(level + 1, idx));
        }
        return make(level, kids);
    };
    return build(0, 0);
}

Mdd::Id Mdd::singleton(std::span<const int> tuple) {
    if (static_cast<int>(tuple.size()) != vars_) throw InvalidArgument("tuple length mismatch");
    Id cur = kTrue;
    std::vector<Id> kids(domain_);
    for (int L = vars_ - 1; L >= 0; --L) {
        if (tuple[L] < 0 || tuple[L] >= domain_) return kEmpty;
        std::fill(kids.begin(), kids.end(), kEmpty);
        kids[tuple[L]] = cur;
        cur = make(L, kids);
    }
    return cur;
}

Mdd::Id Mdd::from_tuples(std::vector<std::vector<int>> tuples) {
    for (const auto& t : tuples) {
        if (static_cast<int>(t.size()) != vars_) throw InvalidArgument("tuple length mismatch");
        for (int v : t)
            if (v < 0 || v >= domain_) throw InvalidArgument("tuple value outside the domain");
    }
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    std::function<Id(int, std::size_t, std::size_t)> build = [&](int level, std::size_t lo, std::size_t hi) -> Id {
        if (lo == hi) return kEmpty;
        if (level == vars_) return kTrue;
        std::vector<Id> kids(domain_, kEmpty);
        std::size_t i = lo;
        while (i < hi) {
            std::size_t j = i;
            const int v = tuples[i][level];
            while (j < hi && tuples[j][level] == v) ++j;
            kids[v] = build(level + 1, i, j);
            i = j;
        }
        return make(level, kids);
    };
    return build(0, 0, tuples.size());
}

Mdd::Id Mdd::unite(Id a, Id b) {
    if (a == kEmpty) return b;
    if (b == kEmpty || a == b) return a;
    if (a > b) std::swap(a, b);
    auto key = pair_key(a, b);
    if (auto it = union_memo_.find(key); it != union_memo_.end()) return it->second;
    std::vector<Id> kids(domain_);
    for (int v = 0; v < domain_; ++v) kids[v] = unite(child(a, v), child(b, v));
    Id r = make(level(a), kids);
    union_memo_.emplace(key, r);
    return r;
}

Mdd::Id Mdd::intersect(Id a, Id b) {
    if (a == kEmpty || b == kEmpty) return kEmpty;
    if (a == b) return a;
    if (a > b) std::swap(a, b);
    auto key = pair_key(a, b);
    if (auto it = inter_memo_.find(key); it != inter_memo_.end()) return it->second;
    std::vector<Id> kids(domain_);
    for (int v = 0; v < domain_; ++v) kids[v] = intersect(child(a, v), child(b, v));
    Id r = make(level(a), kids);
    inter_memo_.emplace(key, r);
    return r;
}

Mdd::Id Mdd::subtract(Id a, Id b) {
    if (a == kEmpty || a == b) return kEmpty;
    if (b == kEmpty) return a;
    auto key = pair_key(a, b);
    if (auto it = minus_memo_.find(key); it != minus_memo_.end()) return it->second;
    std::vector<Id> kids(domain_);
    for (int v = 0; v < domain_; ++v) kids[v] = subtract(child(a, v), child(b, v));
    Id r = make(level(a), kids);
    minus_memo_.emplace(key, r);
    return r;
}

std::uint64_t Mdd::count(Id a) {
    if (a == kEmpty) return 0;
    if (a == kTrue) return 1;
    constexpr auto kUnset = std::numeric_limits<std::uint64_t>::max() - 1;
    if (count_memo_.size() < level_.size()) count_memo_.resize(level_.size(), kUnset);
    if (count_memo_[a] != kUnset) return count_memo_[a];
    std::uint64_t total = 0;
    for (int v = 0; v < domain_; ++v) {
        std::uint64_t c = count(child(a, v));
        total = (c > std::numeric_limits<std::uint64_t>::max() - total) ? std::numeric_limits<std::uint64_t>::max()
                                                                         : total + c;
    }
    if (count_memo_.size() < level_.size()) count_memo_.resize(level_.size(), kUnset);
    count_memo_[a] = total;
    return total;
}

bool Mdd::contains(Id a, std::span<const int> tuple) const {
    for (int L = 0; L < vars_ && a != kEmpty; ++L) {
        if (tuple[L] < 0 || tuple[L] >= domain_) return false;
        a = child(a, tuple[L]);
    }
    return a == kTrue;
}

std::vector<int> Mdd::projection(Id a, int var) const {
    if (a == kEmpty) return {};
    std::vector<Id> frontier{a};
    for (int L = 0; L < var; ++L) {
        std::unordered_set<Id> next;
        for (Id n : frontier)
            for (int v = 0; v < domain_; ++v)
                if (Id c = child(n, v); c != kEmpty) next.insert(c);
        frontier.assign(next.begin(), next.end());
    }
    std::vector<char> seen(domain_, 0);
    for (Id n : frontier)
        for (int v = 0; v < domain_; ++v)
            if (child(n, v) != kEmpty) seen[v] = 1;
    std::vector<int> out;
    for (int v = 0; v < domain_; ++v)
        if (seen[v]) out.push_back(v);
    return out;
}

std::vector<int> Mdd::first(Id a) const {
    if (a == kEmpty) return {};
    std::vector<int> t(vars_);
    for (int L = 0; L < vars_; ++L) {
        int v = 0;
        while (child(a, v) == kEmpty) ++v;
        t[L] = v;
        a = child(a, v);
    }
    return t;
}

void Mdd::for_each(Id a, const std::function<bool(std::span<const int>)>& visit) const {
    if (a == kEmpty) return;
    std::vector<int> t(vars_);
    std::function<bool(Id, int)> rec = [&](Id n, int L) -> bool {
        if (L == vars_) return visit(t);
        for (int v = 0; v < domain_; ++v) {
            Id c = child(n, v);
            if (c == kEmpty) continue;
            t[L] = v;
            if (!rec(c, L + 1)) return false;
        }
        return true;
    };
    rec(a, 0);
}

}  // namespace pebtep
