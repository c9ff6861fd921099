#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "pebtep/error.hpp"
#include "pebtep/tree.hpp"

using namespace pebtep;

TEST_CASE("heap relations") {
    TreeShape t(3);
    auto r1 = node_relations(t, 1);
    CHECK(r1.left == 2);
    CHECK(r1.right == 3);
    CHECK_FALSE(r1.parent);
    auto r3 = node_relations(t, 3);
    CHECK(r3.parent == 1);
    CHECK(r3.left == 6);
    CHECK(r3.right == 7);
    CHECK(r3.sibling == 2);
    auto r7 = node_relations(t, 7);
    CHECK(r7.parent == 3);
    CHECK_FALSE(r7.left);
    CHECK(r7.sibling == 6);
    CHECK(t.is_leaf(4));
    CHECK(t.non_root_count() == 6);
}

TEST_CASE("evaluate") {
    TepInstance xor2(TreeShape(2), 2, ProblemVariant::BT);
    xor2.set_leaf(2, 0);
    xor2.set_leaf(3, 1);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) xor2.set_func(1, x, y, x ^ y);
    CHECK(evaluate(xor2).root() == 1);

    TepInstance zero(TreeShape(3), 2, ProblemVariant::BT);
    for (int i = 1; i < 4; ++i) zero.fill_func(i, 0);
    CHECK(evaluate(zero).root() == 0);
}

TEST_CASE("BT root range is enforced") {
    TepInstance I(TreeShape(2), 3, ProblemVariant::BT);
    I.set_func(1, 0, 0, 2);
    CHECK_THROWS_AS(I.validate(), InvalidArgument);
    TepInstance F(TreeShape(2), 3, ProblemVariant::FT);
    F.set_func(1, 0, 0, 2);
    CHECK_NOTHROW(F.validate());
}

TEST_CASE("hard inputs") {
    CHECK(count_hard_inputs(2, 2) == 4);
    CHECK(count_hard_inputs(3, 2) == 64);
    CHECK(count_hard_inputs(2, 3) == 9);
    int n = 0;
    std::set<std::vector<int>> tuples;
    for_each_hard_input(2, 3, [&](const TepInstance& I) {
        ++n;
        auto v = evaluate(I);
        CHECK(v.root() == 1);
        tuples.insert(v.non_root_tuple());
    });
    CHECK(n == 9);
    CHECK(tuples.size() == 9);
    // lexicographic with node 2 most significant
    CHECK(hard_input_values_at(3, 2, 1) == std::vector<int>{0, 0, 0, 0, 0, 1});
    CHECK(hard_input_values_at(3, 2, 32) == std::vector<int>{1, 0, 0, 0, 0, 0});
}

TEST_CASE("hard input structure") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        auto I = random_hard_input(3, 4, rng);
        auto v = evaluate(I);
        for (int node = 2; node < 4; ++node)
            for (int x = 0; x < 4; ++x)
                for (int y = 0; y < 4; ++y) {
                    bool match = x == v[2 * node] && y == v[2 * node + 1];
                    CHECK(I.func(node, x, y) == (match ? v[node] : 0));
                }
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y) CHECK(I.func(1, x, y) == 1);
    }
}

TEST_CASE("instance counts") {
    CHECK(count_instances(2, 2, ProblemVariant::BT) == 64u);
    CHECK(count_instances(2, 2, ProblemVariant::FT) == 64u);
    CHECK(count_instances(3, 2, ProblemVariant::BT) == 65536u);
    int n = 0;
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    enumerate_all_instances(2, 2, ProblemVariant::BT, 1000, [&](const TepInstance& I) {
        ++n;
        seen.insert({std::vector<int>(I.leaves().begin(), I.leaves().end()),
                     std::vector<int>(I.table(1).begin(), I.table(1).end())});
    });
    CHECK(n == 64);
    CHECK(seen.size() == 64);
    CHECK_THROWS_AS(enumerate_all_instances(4, 4, ProblemVariant::BT, 1000, [](const TepInstance&) {}),
                    BudgetExceeded);
}
