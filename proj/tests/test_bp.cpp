#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pebtep/bp.hpp"
#include "pebtep/error.hpp"

using namespace pebtep;

namespace {

// Reads l2, l3 then f_1(l2, l3): correct for BT(2,2,k).
BranchingProgram direct_h2(int k) {
    BranchingProgram bp(2, k, ProblemVariant::BT, BpVariant::Deterministic);
    int s0 = bp.add_state(StateLabel::leaf(2));
    std::vector<int> mid, last;
    for (int x = 0; x < k; ++x) mid.push_back(bp.add_state(StateLabel::leaf(3)));
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y) last.push_back(bp.add_state(StateLabel::func(1, x, y)));
    int acc = bp.add_state(StateLabel::accept());
    int rej = bp.add_state(StateLabel::final_value(0));
    for (int x = 0; x < k; ++x) {
        bp.add_edge(s0, mid[x], x);
        for (int y = 0; y < k; ++y) bp.add_edge(mid[x], last[x * k + y], y);
    }
    for (int s : last) {
        bp.add_edge(s, rej, 0);
        bp.add_edge(s, acc, 1);
    }
    bp.set_start(s0);
    bp.finalize();
    return bp;
}

}  // namespace

TEST_CASE("direct program agrees with evaluate on all BT(2,2,2)") {
    auto bp = direct_h2(2);
    CHECK(bp.size() == 7);
    int n = 0;
    enumerate_all_instances(2, 2, ProblemVariant::BT, 1000, [&](const TepInstance& I) {
        ++n;
        CHECK(accepts(bp, I) == (evaluate(I).root() == 1));
        CHECK(run_deterministic(bp, I).accepted == accepts(bp, I));
        CHECK(solves(bp, I));
    });
    CHECK(n == 64);
}

TEST_CASE("deterministic programs have at most one path") {
    auto bp = direct_h2(2);
    for_each_hard_input(2, 2, [&](const TepInstance& I) {
        auto en = enumerate_accepting_paths(bp, I, 10);
        CHECK(en.paths.size() == 1);
        CHECK(path_consistent(bp, I, en.paths[0]));
        CHECK(designated_path(bp, I) == en.paths[0]);
    });
}

TEST_CASE("parallel guess edges give two paths") {
    BranchingProgram bp(2, 2, ProblemVariant::BT, BpVariant::Nondeterministic);
    int g = bp.add_state(StateLabel::guess());
    int a = bp.add_state(StateLabel::func(1, 0, 0));
    int b = bp.add_state(StateLabel::func(1, 0, 0));
    int acc = bp.add_state(StateLabel::accept());
    bp.add_edge(g, a);
    bp.add_edge(g, b);
    bp.add_edge(a, acc, 1);
    bp.add_edge(b, acc, 1);
    bp.set_start(g);
    bp.finalize();
    TepInstance I(TreeShape(2), 2, ProblemVariant::BT);
    I.fill_func(1, 1);
    CHECK(enumerate_accepting_paths(bp, I, 10).paths.size() == 2);
    I.fill_func(1, 0);
    CHECK_FALSE(accepts(bp, I));
}

TEST_CASE("unreachable accept never accepts") {
    BranchingProgram bp(2, 2, ProblemVariant::BT, BpVariant::Nondeterministic);
    int s = bp.add_state(StateLabel::leaf(2));
    int f = bp.add_state(StateLabel::final_value(0));
    bp.add_state(StateLabel::accept());
    bp.add_edge(s, f, 0);
    bp.add_edge(s, f, 1);
    bp.set_start(s);
    bp.finalize();
    enumerate_all_instances(2, 2, ProblemVariant::BT, 100, [&](const TepInstance& I) { CHECK_FALSE(accepts(bp, I)); });
}

TEST_CASE("finalize rejects malformed programs") {
    SUBCASE("cycle") {
        BranchingProgram bp(2, 2, ProblemVariant::BT, BpVariant::Nondeterministic);
        int a = bp.add_state(StateLabel::leaf(2));
        int b = bp.add_state(StateLabel::leaf(3));
        bp.add_edge(a, b, 0);
        bp.add_edge(b, a, 0);
        bp.set_start(a);
        CHECK_THROWS_AS(bp.finalize(), InvalidArgument);
    }
    SUBCASE("deterministic state missing an outcome") {
        BranchingProgram bp(2, 2, ProblemVariant::BT, BpVariant::Deterministic);
        int a = bp.add_state(StateLabel::leaf(2));
        int acc = bp.add_state(StateLabel::accept());
        bp.add_edge(a, acc, 0);
        bp.set_start(a);
        CHECK_THROWS_AS(bp.finalize(), InvalidArgument);
    }
    SUBCASE("edge out of a terminal") {
        BranchingProgram bp(2, 2, ProblemVariant::BT, BpVariant::Nondeterministic);
        int acc = bp.add_state(StateLabel::accept());
        int a = bp.add_state(StateLabel::leaf(2));
        bp.add_edge(acc, a);
        bp.set_start(a);
        CHECK_THROWS_AS(bp.finalize(), InvalidArgument);
    }
    SUBCASE("query of a missing node") {
        BranchingProgram bp(2, 2, ProblemVariant::BT, BpVariant::Nondeterministic);
        int a = bp.add_state(StateLabel::leaf(5));
        bp.set_start(a);
        CHECK_THROWS_AS(bp.finalize(), InvalidArgument);
    }
}

TEST_CASE("size counts non-terminal states") {
    BranchingProgram bp(2, 2, ProblemVariant::BT, BpVariant::Nondeterministic);
    int a = bp.add_state(StateLabel::func(1, 0, 0));
    int acc = bp.add_state(StateLabel::accept());
    bp.add_edge(a, acc, 1);
    bp.set_start(a);
    bp.finalize();
    CHECK(bp.size() == 1);
}
