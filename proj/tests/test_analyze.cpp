#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pebtep/analyze.hpp"
#include "pebtep/compile.hpp"
#include "pebtep/error.hpp"

using namespace pebtep;

namespace {

BranchingProgram rontbp(int h, int k) { return compile_wbw_to_ntbp(generate_ro_wbw_strategy(h), h, k); }

BranchingProgram bintbp(int h, int k) {
    return compile_fractional_to_bintbp(generate_fractional_strategy(h), h, k, Encoding::identity(k));
}

// f_1(0,0) first, then the leaves: thrifty only when both leaves are 0.
BranchingProgram eager_root() {
    BranchingProgram bp(2, 2, ProblemVariant::BT, BpVariant::Nondeterministic);
    int r = bp.add_state(StateLabel::func(1, 0, 0));
    int a = bp.add_state(StateLabel::leaf(2));
    int b = bp.add_state(StateLabel::leaf(3));
    int acc = bp.add_state(StateLabel::accept());
    bp.add_edge(r, a, 1);
    bp.add_edge(a, b, 0);
    bp.add_edge(a, b, 1);
    bp.add_edge(b, acc, 0);
    bp.add_edge(b, acc, 1);
    bp.set_start(r);
    bp.finalize();
    return bp;
}

}  // namespace

TEST_CASE("state sets") {
    auto bp = rontbp(2, 2);
    auto sets = compute_state_sets(bp);
    CHECK(sets.count_F(bp.start()) == 4);
    for (int s = 0; s < bp.state_count(); ++s) {
        CHECK(sets.mdd->subtract(sets.A[s], sets.F[s]) == Mdd::kEmpty);
        if (bp.state(s).label.is_query()) CHECK(sets.count_A(s) >= 1);
        if (!bp.state(s).tag) continue;
        for (const auto& e : bp.state(s).tag->entries)
            if (e.node == 2 && e.value == 0 && e.black_mask) CHECK(sets.proj_F(s, 2) == std::vector<int>{0});
    }
}

TEST_CASE("explicit sweeps agree with E") {
    auto bp = rontbp(2, 2);
    auto e = compute_state_sets(bp);
    SweepSpec all;
    all.kind = SweepKind::AllInstances;
    all.jobs = 3;
    auto a = compute_state_sets(bp, all);
    for (int s = 0; s < bp.state_count(); ++s) {
        // E is a subset of all instances
        CHECK(a.mdd->count(a.F[s]) >= e.count_F(s));
        CHECK(a.mdd->count(a.A[s]) >= e.count_A(s));
    }
}

TEST_CASE("thrifty") {
    for (auto bp : {rontbp(3, 2), compile_black_to_dtbp(generate_black_strategy(3), 3, 2)}) {
        auto r = check_thrifty(bp, compute_state_sets(bp));
        CHECK(r.pass);
    }
    auto bad = eager_root();
    auto r = check_thrifty(bad, compute_state_sets(bad));
    CHECK_FALSE(r.pass);
    REQUIRE_FALSE(r.violations.empty());
    CHECK(r.violations[0].values != std::vector<int>{0, 0});
}

TEST_CASE("read-once") {
    CHECK(check_syntactic_read_once(rontbp(3, 2)).pass);
    BranchingProgram bp(2, 2, ProblemVariant::BT, BpVariant::Nondeterministic);
    int a = bp.add_state(StateLabel::func(1, 0, 0));
    int b = bp.add_state(StateLabel::func(1, 1, 1));
    int acc = bp.add_state(StateLabel::accept());
    bp.add_edge(a, b, 1);
    bp.add_edge(b, acc, 1);
    bp.set_start(a);
    bp.finalize();
    auto r = check_syntactic_read_once(bp);
    CHECK_FALSE(r.pass);
    CHECK(r.node == 1);
}

TEST_CASE("bitwise product structure") {
    auto phi = Encoding::identity(4);
    CHECK(is_bitwise_product({0, 1, 2, 3}, phi));
    CHECK(is_bitwise_product({1, 3}, phi));
    CHECK(is_bitwise_product({2}, phi));
    CHECK_FALSE(is_bitwise_product({0, 3}, phi));
    CHECK_FALSE(is_bitwise_product({0, 1, 2}, phi));
    for (int h : {2, 3}) {
        auto r = rontbp(h, 4);
        CHECK(check_bitwise_independence(r, compute_state_sets(r), phi).pass);
    }
    auto b = bintbp(2, 4);
    CHECK(check_bitwise_independence(b, compute_state_sets(b), phi).pass);
    auto b3 = bintbp(3, 4);
    CHECK(check_bitwise_independence(b3, compute_state_sets(b3), phi).pass);
}

TEST_CASE("whole extraction") {
    auto bp = rontbp(2, 2);
    for_each_hard_input(2, 2, [&](const TepInstance& I) {
        auto en = enumerate_accepting_paths(bp, I, 100);
        REQUIRE_FALSE(en.paths.empty());
        for (const auto& p : en.paths) {
            std::set<int> queried;
            for (int s : p.states)
                if (int n = bp.state(s).label.queried_node()) queried.insert(n);
            CHECK(queried.size() == 3);
            auto ex = extract_rontbp_pebbling(bp, I, p);
            CHECK(ex.configs.front().is_empty());
            CHECK(validate_sequence(ex.sequence) <= Rational(2));
        }
    });
    for (int h : {2, 3}) {
        auto r = check_whole_extraction(rontbp(h, 2));
        CHECK(r.pass);
        CHECK(r.max_peak == Rational((h + 1) / 2 + 1));
    }
}

TEST_CASE("find input") {
    auto bp = rontbp(3, 2);
    auto I = hard_input_at(3, 2, 37);
    auto vals = evaluate(I);
    std::map<int, int> all;
    for (int i = 2; i < 8; ++i) all[i] = vals[i];
    CHECK(find_input(bp, bp.start(), PebbleConfig(TreeShape(3)), all) == I);
    all[2] ^= 1;
    auto J = find_input(bp, bp.start(), PebbleConfig(TreeShape(3)), all);
    CHECK_FALSE(J == I);

    // a state no input in E consistent with the given values accepts through
    auto path = *designated_path(bp, I);
    auto cfgs = whole_configs_along(bp, path);
    std::size_t pos = 0;
    while (cfgs[pos].total_non_root() < Rational(2)) ++pos;
    std::map<int, int> un;
    for (int i = 2; i < 8; ++i)
        if (!cfgs[pos].is_pebbled(i)) un[i] = vals[i];
    CHECK(find_input(bp, path.states[pos], cfgs[pos], un) == I);
    auto f = find_input_sweep(bp, 2);
    CHECK(f.pass);
    CHECK(f.recovered == 64);
}

TEST_CASE("find input with inconsistent values") {
    auto bp = rontbp(2, 2);
    auto I = hard_input_at(2, 2, 1);
    auto path = *designated_path(bp, I);
    auto cfgs = whole_configs_along(bp, path);
    // last state before accept: nothing pebbled, but pretend node 2 differs
    std::size_t pos = cfgs.size() - 2;
    std::map<int, int> un;
    auto vals = evaluate(I);
    for (int i = 2; i < 4; ++i)
        if (!cfgs[pos].is_pebbled(i)) un[i] = vals[i];
    if (!un.empty()) {
        un.begin()->second ^= 1;
        CHECK_THROWS_AS(find_input(bp, path.states[pos], cfgs[pos], un), PreconditionFailed);
    }
}

TEST_CASE("fractional extraction, exhaustive at h=2 k=4") {
    auto bp = bintbp(2, 4);
    auto sets = compute_state_sets(bp);
    auto ex = extract_bintbp_pebbling(bp, sets, {});
    CHECK(ex.preconditions_met);
    CHECK(ex.inputs_checked == 16);
    for (const auto& c : ex.claims) {
        CAPTURE(c.name);
        CAPTURE(c.witness);
        CHECK(c.pass);
    }
    auto vals = state_pebble_values(bp, sets);
    CHECK(vals[bp.start()].total_non_root() == Rational(0));
    CHECK(vals[bp.accept()].total_non_root() == Rational(0));
}

TEST_CASE("critical pebbling is a valid fractional pebbling at h=3") {
    auto bp = bintbp(3, 4);
    auto sets = compute_state_sets(bp);
    ExtractionOptions o;
    o.samples = 2000;
    auto ex = extract_bintbp_pebbling(bp, sets, o);
    CHECK(ex.all_pass());
    for (const auto& cp : ex.samples) {
        CHECK(cp.issues.empty());
        CHECK(validate_sequence(cp.sequence) <= Rational(5, 2));
    }
}

TEST_CASE("censuses") {
    auto c = entropy_census(rontbp(3, 2), 2);
    CHECK(c.exhaustive);
    CHECK(c.unreached == 0);
    CHECK(c.max_bucket <= 16);
    CHECK(c.implied_bound >= Rational(4));

    CensusOptions o;
    o.kind = ExtractionKind::Fractional;
    auto f = entropy_census(bintbp(2, 4), 1, o);
    CHECK(f.unreached == 0);
    CHECK(f.implied_bound >= Rational(4));

    auto d = entropy_census(compile_black_to_dtbp(generate_black_strategy(2), 2, 2), 2);
    CHECK(d.max_bucket == 1);
    CHECK(d.implied_bound == Rational(4));
}

TEST_CASE("census is schedule independent") {
    CensusOptions a, b;
    a.kind = b.kind = ExtractionKind::Fractional;
    a.samples = b.samples = 3000;
    a.exhaustive_limit = b.exhaustive_limit = 0;
    a.jobs = 1;
    b.jobs = 4;
    auto bp = bintbp(3, 4);
    auto x = entropy_census(bp, Rational(3, 2), a), y = entropy_census(bp, Rational(3, 2), b);
    CHECK(x.buckets == y.buckets);
    CHECK(x.implied_bound == y.implied_bound);
}

TEST_CASE("adders") {
    for (int k : {2, 3, 4}) {
        auto r = adder_census(canonical_adder(k), 1, k);
        CHECK(r.correct);
        CHECK(r.max_fe == 1);
        CHECK(r.states >= k);
    }
    auto r = adder_census(canonical_two_pair_adder(2), 2, 2);
    CHECK(r.correct);
    CHECK(r.max_fe <= 2);
    CHECK(r.states >= 4);
    auto s = search_small_adders(2, 3);
    REQUIRE(s.min_states);
    CHECK(*s.min_states >= 2);
    CHECK(s.correct_by_states[1] == 0);
}
