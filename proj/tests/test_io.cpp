#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "pebtep/compile.hpp"
#include "pebtep/error.hpp"
#include "pebtep/io.hpp"

using namespace pebtep;

TEST_CASE("instance round trip") {
    std::mt19937_64 rng(2);
    for (auto pv : {ProblemVariant::BT, ProblemVariant::FT}) {
        auto I = random_instance(3, 3, pv, rng);
        auto j = to_json(I);
        CHECK(instance_from_json(j) == I);
        CHECK(instance_from_json(parse_json(j.dump())) == I);
    }
}

TEST_CASE("strategy round trip") {
    for (const auto& s : {generate_black_strategy(3), generate_ro_wbw_strategy(4), generate_fractional_strategy(3)}) {
        auto back = sequence_from_json(to_json(s));
        CHECK(back.moves == s.moves);
        CHECK(back.variant == s.variant);
        CHECK(back.denominator == s.denominator);
        CHECK(validate_sequence(back) == validate_sequence(s));
    }
}

TEST_CASE("program round trip keeps ids and edges") {
    auto bp = compile_fractional_to_bintbp(generate_fractional_strategy(2), 2, 4, Encoding::identity(4));
    auto j = to_json(bp);
    auto back = bp_from_json(parse_json(j.dump()));
    CHECK(to_json(back) == j);
    CHECK(back.size() == bp.size());
    auto adder = canonical_two_pair_adder(2);
    CHECK(to_json(bp_from_json(to_json(adder))) == to_json(adder));
}

TEST_CASE("dot export renders every state") {
    auto bp = compile_wbw_to_ntbp(generate_ro_wbw_strategy(2), 2, 2);
    auto dot = export_dot(bp);
    std::size_t boxes = 0, pos = 0;
    while ((pos = dot.find("shape=box", pos)) != std::string::npos) ++boxes, ++pos;
    CHECK(boxes == static_cast<std::size_t>(bp.size()));
}

TEST_CASE("malformed input") {
    auto j = to_json(compile_wbw_to_ntbp(generate_ro_wbw_strategy(2), 2, 2));
    j.erase("start");
    CHECK_THROWS_AS(bp_from_json(j), ParseError);
    CHECK_THROWS_AS(parse_json("{\"h\": 2,"), ParseError);
    auto s = to_json(generate_black_strategy(2));
    s["moves"][0]["kind"] = "teleport";
    CHECK_THROWS_AS(sequence_from_json(s), ParseError);
    auto i = to_json(hard_input_at(2, 2, 0));
    i["tables"]["1"][0].erase(0);
    CHECK_THROWS_AS(instance_from_json(i), ParseError);
}

TEST_CASE("timeline") {
    auto tsv = pebble_timeline_tsv(generate_black_strategy(2));
    CHECK(tsv.rfind("step\tmove\tnode\tblack\twhite\n", 0) == 0);
    CHECK(tsv.find("\t1\t1\t0\n") != std::string::npos);  // root black at some step
}
