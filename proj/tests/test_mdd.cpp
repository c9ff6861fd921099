#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "pebtep/mdd.hpp"

using namespace pebtep;

using Tuple = std::vector<int>;

namespace {

std::set<Tuple> members(Mdd& m, Mdd::Id a) {
    std::set<Tuple> out;
    m.for_each(a, [&](std::span<const int> t) {
        out.insert(Tuple(t.begin(), t.end()));
        return true;
    });
    return out;
}

std::set<Tuple> random_set(std::mt19937_64& rng, int vars, int dom, int n) {
    std::uniform_int_distribution<int> d(0, dom - 1);
    std::set<Tuple> s;
    for (int i = 0; i < n; ++i) {
        Tuple t(vars);
        for (auto& v : t) v = d(rng);
        s.insert(t);
    }
    return s;
}

}  // namespace

TEST_CASE("full and empty") {
    Mdd m(3, 4);
    CHECK(m.count(m.full()) == 64);
    CHECK(m.count(Mdd::kEmpty) == 0);
    CHECK(m.projection(m.full(), 1) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("set algebra matches std::set") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 50; ++round) {
        Mdd m(4, 3);
        auto A = random_set(rng, 4, 3, 30), B = random_set(rng, 4, 3, 30);
        auto a = m.from_tuples({A.begin(), A.end()}), b = m.from_tuples({B.begin(), B.end()});
        CHECK(members(m, a) == A);
        CHECK(m.count(a) == A.size());
        std::set<Tuple> U, I, D;
        std::set_union(A.begin(), A.end(), B.begin(), B.end(), std::inserter(U, U.end()));
        std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::inserter(I, I.end()));
        std::set_difference(A.begin(), A.end(), B.begin(), B.end(), std::inserter(D, D.end()));
        CHECK(members(m, m.unite(a, b)) == U);
        CHECK(members(m, m.intersect(a, b)) == I);
        CHECK(members(m, m.subtract(a, b)) == D);
        // canonical: equal sets share an id
        CHECK(m.unite(a, b) == m.unite(b, a));
        CHECK(m.subtract(a, a) == Mdd::kEmpty);
        for (const auto& t : A) CHECK(m.contains(a, t));
    }
}

TEST_CASE("predicate") {
    Mdd m(3, 2);
    std::vector<int> vars{0, 2};
    auto eq = m.predicate(vars, [](std::span<const int> v) { return v[0] == v[1]; });
    CHECK(m.count(eq) == 4);
    for (const auto& t : members(m, eq)) CHECK(t[0] == t[2]);
    auto one = m.singleton(Tuple{1, 0, 1});
    CHECK(m.first(one) == Tuple{1, 0, 1});
    CHECK(m.projection(one, 0) == std::vector<int>{1});
}
