#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pebtep/budget.hpp"
#include "pebtep/rational.hpp"
#include "pebtep/tree.hpp"

namespace pebtep {

enum class PebbleVariant { Black, WholeBW, FractionalBW };

std::string_view to_string(PebbleVariant v);
PebbleVariant parse_pebble_variant(std::string_view s);

// Black and white pebble values of every node, as exact rationals.
class PebbleConfig {
public:
    explicit PebbleConfig(const TreeShape& shape);

    int node_count() const { return static_cast<int>(black_.size()) - 1; }

    const Rational& black(int node) const { return black_[node]; }
    const Rational& white(int node) const { return white_[node]; }
    Rational value(int node) const { return black_[node] + white_[node]; }
    bool is_full(int node) const { return value(node) == Rational(1); }
    bool is_pebbled(int node) const { return !black_[node].is_zero() || !white_[node].is_zero(); }

    void set_black(int node, Rational v) { black_[node] = v; }
    void set_white(int node, Rational v) { white_[node] = v; }

    Rational total() const;
    Rational total_non_root() const;
    bool is_empty() const;
    // 0 <= b, w and b + w <= 1 everywhere.
    bool within_bounds() const;

    friend bool operator==(const PebbleConfig&, const PebbleConfig&) = default;

private:
    std::vector<Rational> black_;  // slot 0 unused
    std::vector<Rational> white_;
};

enum class MoveKind { DecreaseBlack, IncreaseWhite, RemoveWhite, PlaceBlack };

std::string_view to_string(MoveKind k);
MoveKind parse_move_kind(std::string_view s);

struct ChildDecrease {
    int node;
    Rational amount;
    friend bool operator==(const ChildDecrease&, const ChildDecrease&) = default;
};

// A single legal-move candidate. PlaceBlack with a child decrease is a slide.
struct PebbleMove {
    MoveKind kind;
    int node;
    Rational amount{1};
    std::optional<ChildDecrease> child;

    static PebbleMove decrease_black(int node, Rational amount = 1) {
        return {MoveKind::DecreaseBlack, node, amount, std::nullopt};
    }
    static PebbleMove increase_white(int node, Rational amount = 1) {
        return {MoveKind::IncreaseWhite, node, amount, std::nullopt};
    }
    static PebbleMove remove_white(int node) { return {MoveKind::RemoveWhite, node, 1, std::nullopt}; }
    static PebbleMove place_black(int node, Rational amount = 1) {
        return {MoveKind::PlaceBlack, node, amount, std::nullopt};
    }
    static PebbleMove slide_black(int node, int child, Rational amount = 1, Rational child_amount = 1) {
        return {MoveKind::PlaceBlack, node, amount, ChildDecrease{child, child_amount}};
    }

    std::string describe() const;
    friend bool operator==(const PebbleMove&, const PebbleMove&) = default;
};

// Successor configuration; throws IllegalMove.
PebbleConfig apply_move(const PebbleConfig& config, const PebbleMove& move, PebbleVariant variant);

struct PebbleSequence {
    TreeShape shape{2};
    PebbleVariant variant = PebbleVariant::Black;
    int denominator = 1;
    std::vector<PebbleMove> moves;

    // C_1 (empty) followed by the configuration after each move. Throws
    // IllegalMove on the first illegal transition.
    std::vector<PebbleConfig> configs() const;
};

struct SequenceReport {
    bool valid = false;
    Rational peak;
    std::string error;       // empty when valid
    int failed_step = -1;    // index into moves, or -1
};

// Non-throwing validation.
SequenceReport check_sequence(const PebbleSequence& seq);

// Peak pebble value of a valid sequence; throws IllegalMove otherwise.
Rational validate_sequence(const PebbleSequence& seq);

bool is_read_once(const PebbleSequence& seq);

PebbleSequence generate_black_strategy(int h);
PebbleSequence generate_ro_wbw_strategy(int h);
PebbleSequence generate_fractional_strategy(int h);

// Minimal peak over all strategies with values in multiples of 1/d (d = 1
// for Black and WholeBW). Throws BudgetExceeded when the configuration space
// exceeds cap.
Rational optimal_peak(int h, PebbleVariant variant, int denominator, std::uint64_t cap = default_budget());

// Moves turning `from` into `to`, ordered to keep the running total low:
// black decreases whose parent does not change, placements children first (a
// placement absorbs one child's black decrease as a slide), white removals,
// remaining black decreases, then white increases. A white increase on a
// child is pulled forward to just before the move that needs it. A white
// decrease that does not end at zero throws IllegalMove.
std::vector<PebbleMove> moves_between(const PebbleConfig& from, const PebbleConfig& to);

}  // namespace pebtep
