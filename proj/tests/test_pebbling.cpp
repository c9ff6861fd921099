#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "pebtep/error.hpp"
#include "pebtep/pebbling.hpp"

using namespace pebtep;

namespace {

PebbleSequence seq_of(int h, PebbleVariant v, std::vector<PebbleMove> moves, int d = 1) {
    return PebbleSequence{TreeShape(h), v, d, std::move(moves)};
}

}  // namespace

TEST_CASE("single moves") {
    TreeShape t(3);
    PebbleConfig empty(t);
    auto c = apply_move(empty, PebbleMove::increase_white(7), PebbleVariant::WholeBW);
    CHECK(c.white(7) == Rational(1));
    CHECK_THROWS_AS(apply_move(empty, PebbleMove::increase_white(7), PebbleVariant::Black), IllegalMove);

    PebbleConfig half(t);
    half.set_black(2, 1);
    CHECK_THROWS_AS(apply_move(half, PebbleMove::remove_white(1), PebbleVariant::WholeBW), IllegalMove);

    auto leaf = apply_move(empty, PebbleMove::place_black(4), PebbleVariant::Black);
    CHECK(leaf.black(4) == Rational(1));
    CHECK_THROWS_AS(apply_move(empty, PebbleMove::place_black(2), PebbleVariant::Black), IllegalMove);
}

TEST_CASE("sequence validation") {
    using M = PebbleMove;
    auto h2 = seq_of(2, PebbleVariant::Black,
                     {M::place_black(2), M::place_black(3), M::slide_black(1, 2), M::decrease_black(3),
                      M::decrease_black(1)});
    CHECK(validate_sequence(h2) == Rational(2));

    auto dangling = seq_of(3, PebbleVariant::WholeBW, {M::increase_white(7)});
    auto rep = check_sequence(dangling);
    CHECK_FALSE(rep.valid);
    CHECK_FALSE(rep.error.empty());
}

TEST_CASE("generators") {
    for (int h = 2; h <= 7; ++h) {
        CAPTURE(h);
        CHECK(validate_sequence(generate_black_strategy(h)) == Rational(h));
        auto w = generate_ro_wbw_strategy(h);
        CHECK(validate_sequence(w) == Rational((h + 1) / 2 + 1));
        CHECK(is_read_once(w));
        CHECK(validate_sequence(generate_fractional_strategy(h)) <= Rational(h, 2) + 1);
    }
    CHECK(validate_sequence(generate_fractional_strategy(3)) == Rational(5, 2));
}

TEST_CASE("read-once") {
    using M = PebbleMove;
    auto twice = seq_of(2, PebbleVariant::Black,
                        {M::place_black(2), M::decrease_black(2), M::place_black(2), M::place_black(3),
                         M::slide_black(1, 2), M::decrease_black(3), M::decrease_black(1)});
    CHECK(validate_sequence(twice) == Rational(2));
    CHECK_FALSE(is_read_once(twice));

    auto once = generate_black_strategy(2);
    CHECK(is_read_once(once));
}

TEST_CASE("optimal peaks") {
    CHECK(optimal_peak(2, PebbleVariant::Black, 1) == Rational(2));
    CHECK(optimal_peak(3, PebbleVariant::Black, 1) == Rational(3));
    CHECK(optimal_peak(3, PebbleVariant::WholeBW, 1) == Rational(3));
    CHECK(optimal_peak(4, PebbleVariant::WholeBW, 1) == Rational(3));
    CHECK(optimal_peak(2, PebbleVariant::FractionalBW, 2) == Rational(2));
    CHECK(optimal_peak(3, PebbleVariant::FractionalBW, 2) == Rational(5, 2));
    CHECK_THROWS_AS(optimal_peak(4, PebbleVariant::WholeBW, 1, 1000), BudgetExceeded);
}

TEST_CASE("moves_between reproduces every configuration change") {
    for (int h = 2; h <= 5; ++h)
        for (const auto& seq : {generate_black_strategy(h), generate_ro_wbw_strategy(h), generate_fractional_strategy(h)}) {
            auto cfgs = seq.configs();
            for (std::size_t i = 0; i + 1 < cfgs.size(); ++i) {
                PebbleConfig c = cfgs[i];
                for (const auto& m : moves_between(cfgs[i], cfgs[i + 1])) c = apply_move(c, m, seq.variant);
                CHECK(c == cfgs[i + 1]);
            }
        }
}

TEST_CASE("configurations stay within bounds") {
    for (int h = 2; h <= 6; ++h)
        for (const auto& seq : {generate_ro_wbw_strategy(h), generate_fractional_strategy(h)}) {
            auto cfgs = seq.configs();
            CHECK(cfgs.front().is_empty());
            CHECK(cfgs.back().is_empty());
            for (const auto& c : cfgs) CHECK(c.within_bounds());
        }
}
