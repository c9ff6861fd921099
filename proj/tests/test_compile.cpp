#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "pebtep/analyze.hpp"
#include "pebtep/compile.hpp"
#include "pebtep/error.hpp"

using namespace pebtep;

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

void check_all(const BranchingProgram& bp) {
    auto o = check_against_evaluate(bp, 1 << 20, 0, 1, 1);
    CHECK(o.exhaustive);
    CHECK(o.disagreements == 0);
}

void check_sampled(const BranchingProgram& bp, std::uint64_t n) {
    auto o = check_against_evaluate(bp, 0, n, 5, 2);
    CHECK(o.instances == n);
    CHECK(o.disagreements == 0);
}

}  // namespace

TEST_CASE("wbw compile h=2 k=2") {
    for (auto pv : {ProblemVariant::BT, ProblemVariant::FT}) {
        CompileOptions o;
        o.problem = pv;
        auto bp = compile_wbw_to_ntbp(generate_ro_wbw_strategy(2), 2, 2, o);
        CHECK(bp.size() <= 12);
        CHECK(bp.variant() == BpVariant::Nondeterministic);
        check_all(bp);
    }
}

TEST_CASE("wbw compile h=4 k=2") {
    auto bp = compile_wbw_to_ntbp(generate_ro_wbw_strategy(4), 4, 2);
    CHECK(bp.size() <= 120);
    CHECK(check_syntactic_read_once(bp).pass);
    CHECK(check_thrifty(bp, compute_state_sets(bp)).pass);
    check_sampled(bp, 3000);
}

TEST_CASE("wbw compile rejects non read-once strategies") {
    using M = PebbleMove;
    PebbleSequence twice{TreeShape(2), PebbleVariant::WholeBW, 1,
                         {M::place_black(2), M::decrease_black(2), M::place_black(2), M::place_black(3),
                          M::slide_black(1, 2), M::decrease_black(3), M::decrease_black(1)}};
    CHECK_THROWS_AS(compile_wbw_to_ntbp(twice, 2, 2), PreconditionFailed);
}

TEST_CASE("black compile") {
    auto bp = compile_black_to_dtbp(generate_black_strategy(2), 2, 2);
    CHECK(bp.variant() == BpVariant::Deterministic);
    check_all(bp);
    CHECK(compile_black_to_dtbp(generate_black_strategy(2), 2, 3).size() <= 27);

    auto b3 = compile_black_to_dtbp(generate_black_strategy(3), 3, 2);
    CHECK(check_thrifty(b3, compute_state_sets(b3)).pass);
    // the black strategy visits each subtree once, so no node is re-read
    CHECK(check_syntactic_read_once(b3).pass);
    check_all(b3);
    for_each_hard_input(3, 2, [&](const TepInstance& I) { CHECK(run_deterministic(b3, I).accepted); });
}

TEST_CASE("E inputs and their f_1 = 0 variants") {
    auto bp = compile_wbw_to_ntbp(generate_ro_wbw_strategy(3), 3, 2);
    for_each_hard_input(3, 2, [&](const TepInstance& I) {
        CHECK(accepts(bp, I));
        TepInstance no = I;
        no.fill_func(1, 0);
        CHECK_FALSE(accepts(bp, no));
    });
}

TEST_CASE("size bounds") {
    for (int h : {2, 3, 4})
        for (int k : {2, 4}) {
            CAPTURE(h);
            CAPTURE(k);
            auto bp = compile_wbw_to_ntbp(generate_ro_wbw_strategy(h), h, k);
            CHECK(static_cast<std::uint64_t>(bp.size()) <= ((1u << h) - 1) * ipow(k, (h + 1) / 2 + 1));
        }
    for (int h : {2, 3, 4}) {
        auto seq = generate_fractional_strategy(h);
        auto bp = compile_fractional_to_bintbp(seq, h, 4, Encoding::identity(4));
        CHECK(static_cast<std::uint64_t>(bp.size()) <= layer_count(seq) * (std::uint64_t{1} << (h + 2)));
    }
}

TEST_CASE("fractional compile") {
    CHECK_THROWS_AS(Encoding::identity(3), PreconditionFailed);
    CHECK_THROWS_AS(compile_fractional_to_bintbp(generate_fractional_strategy(2), 2, 3, Encoding::identity(4)),
                    PreconditionFailed);
    // halves do not fit one bit
    CHECK_THROWS_AS(compile_fractional_to_bintbp(generate_fractional_strategy(3), 3, 2, Encoding::identity(2)),
                    PreconditionFailed);
    auto b2 = compile_fractional_to_bintbp(generate_fractional_strategy(2), 2, 4, Encoding::identity(4));
    check_all(b2);
    auto b3 = compile_fractional_to_bintbp(generate_fractional_strategy(3), 3, 4, Encoding::identity(4));
    check_sampled(b3, 2000);
    Encoding gray{2, {0, 1, 3, 2}};
    auto g = compile_fractional_to_bintbp(generate_fractional_strategy(3), 3, 4, gray);
    check_sampled(g, 2000);
}

TEST_CASE("keep guess states") {
    CompileOptions o;
    o.keep_guess_states = true;
    auto full = compile_wbw_to_ntbp(generate_ro_wbw_strategy(3), 3, 2, o);
    auto elim = compile_wbw_to_ntbp(generate_ro_wbw_strategy(3), 3, 2);
    CHECK(full.size() > elim.size());
    bool has_guess = false;
    for (const auto& s : full.states()) has_guess = has_guess || s.label.kind == StateKind::Guess;
    CHECK(has_guess);
    check_all(full);
}

TEST_CASE("group programs") {
    auto x = compile_group_sft(3, 2, cyclic_group_table(2), true);
    CHECK(x.size() >= 4);
    CHECK(x.size() <= 16);
    // all f_i = XOR, every leaf assignment
    for (int leaves = 0; leaves < 16; ++leaves) {
        TepInstance I(TreeShape(3), 2, ProblemVariant::FT);
        for (int i = 0; i < 4; ++i) I.set_leaf(4 + i, (leaves >> i) & 1);
        for (int n = 1; n < 4; ++n)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) I.set_func(n, a, b, a ^ b);
        CHECK(reachable_outputs(x, I) == std::set<int>{evaluate(I).root()});
    }
    // the program is only meant for instances whose f_i are the group
    // operation; the queried form reads f_1 to combine partial products
    auto q = compile_group_sft(3, 3, cyclic_group_table(3), false);
    auto table = cyclic_group_table(3);
    std::mt19937_64 rng(4);
    for (int round = 0; round < 200; ++round) {
        TepInstance I(TreeShape(3), 3, ProblemVariant::FT);
        for (int i = 4; i < 8; ++i) I.set_leaf(i, static_cast<int>(rng() % 3));
        for (int n = 1; n < 4; ++n)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) I.set_func(n, a, b, table[a * 3 + b]);
        CHECK(reachable_outputs(q, I) == std::set<int>{evaluate(I).root()});
    }
    CHECK_THROWS_AS(check_group(2, {0, 0, 0, 1}), PreconditionFailed);
    CHECK_THROWS_AS(check_group(3, {0, 1, 2, 1, 0, 2, 2, 2, 1}), PreconditionFailed);
    CHECK(check_group(3, cyclic_group_table(3)) == 0);
}
