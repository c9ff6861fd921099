#include "pebtep/pebbling.hpp"

#include <algorithm>
#include <string>

#include "pebtep/error.hpp"

namespace pebtep {

std::string_view to_string(PebbleVariant v) {
    switch (v) {
        case PebbleVariant::Black: return "black";
        case PebbleVariant::WholeBW: return "wbw";
        case PebbleVariant::FractionalBW: return "fractional";
    }
    return "?";
}

PebbleVariant parse_pebble_variant(std::string_view s) {
    if (s == "black") return PebbleVariant::Black;
    if (s == "wbw") return PebbleVariant::WholeBW;
    if (s == "fractional") return PebbleVariant::FractionalBW;
    throw ParseError("unknown pebbling variant '" + std::string(s) + "'");
}

std::string_view to_string(MoveKind k) {
    switch (k) {
        case MoveKind::DecreaseBlack: return "decrease_black";
        case MoveKind::IncreaseWhite: return "increase_white";
        case MoveKind::RemoveWhite: return "remove_white";
        case MoveKind::PlaceBlack: return "place_black";
    }
    return "?";
}

MoveKind parse_move_kind(std::string_view s) {
    if (s == "decrease_black") return MoveKind::DecreaseBlack;
    if (s == "increase_white") return MoveKind::IncreaseWhite;
    if (s == "remove_white") return MoveKind::RemoveWhite;
    if (s == "place_black") return MoveKind::PlaceBlack;
    throw ParseError("unknown move kind '" + std::string(s) + "'");
}

std::string PebbleMove::describe() const {
    std::string s = std::string(to_string(kind)) + "(" + std::to_string(node);
    if (kind != MoveKind::RemoveWhite) s += ", " + amount.str();
    if (child) s += ", child " + std::to_string(child->node) + " -" + child->amount.str();
    return s + ")";
}

// --- PebbleConfig -----------------------------------------------------------

PebbleConfig::PebbleConfig(const TreeShape& shape)
    : black_(shape.node_count() + 1), white_(shape.node_count() + 1) {}

Rational PebbleConfig::total() const {
    Rational t;
    for (int i = 1; i <= node_count(); ++i) t += black_[i] + white_[i];
    return t;
}

Rational PebbleConfig::total_non_root() const { return total() - value(1); }

bool PebbleConfig::is_empty() const {
    for (int i = 1; i <= node_count(); ++i)
        if (is_pebbled(i)) return false;
    return true;
}

bool PebbleConfig::within_bounds() const {
    for (int i = 1; i <= node_count(); ++i) {
        if (black_[i] < Rational(0) || white_[i] < Rational(0)) return false;
        if (value(i) > Rational(1)) return false;
    }
    return true;
}

// --- moves ------------------------------------------------------------------

namespace {

[[noreturn]] void illegal(const PebbleMove& m, const std::string& why) {
    throw IllegalMove(m.describe() + ": " + why);
}

bool children_full(const PebbleConfig& c, int node) {
    int n = c.node_count();
    if (2 * node > n) return true;  // leaf
    return c.is_full(2 * node) && c.is_full(2 * node + 1);
}

bool is_whole(const Rational& r) { return r.is_zero() || r == Rational(1); }

}  // namespace

PebbleConfig apply_move(const PebbleConfig& config, const PebbleMove& move, PebbleVariant variant) {
    const int i = move.node;
    if (i < 1 || i > config.node_count()) illegal(move, "node out of range");
    if (move.kind != MoveKind::RemoveWhite && move.amount <= Rational(0)) illegal(move, "amount must be positive");

    PebbleConfig next = config;
    switch (move.kind) {
        case MoveKind::DecreaseBlack:
            if (config.black(i) < move.amount) illegal(move, "black value would drop below 0");
            next.set_black(i, config.black(i) - move.amount);
            break;
        case MoveKind::IncreaseWhite:
            if (variant == PebbleVariant::Black) illegal(move, "white pebbles are not allowed in black pebbling");
            if (config.value(i) + move.amount > Rational(1)) illegal(move, "pebble value would exceed 1");
            next.set_white(i, config.white(i) + move.amount);
            break;
        case MoveKind::RemoveWhite:
            if (config.white(i).is_zero()) illegal(move, "no white pebble to remove");
            if (!children_full(config, i)) illegal(move, "children are not fully pebbled");
            next.set_white(i, 0);
            break;
        case MoveKind::PlaceBlack:
            if (!children_full(config, i)) illegal(move, "children are not fully pebbled");
            if (config.value(i) + move.amount > Rational(1)) illegal(move, "pebble value would exceed 1");
            next.set_black(i, config.black(i) + move.amount);
            if (move.child) {
                int c = move.child->node;
                if (c != 2 * i && c != 2 * i + 1) illegal(move, "child decrease names a non-child");
                if (move.child->amount <= Rational(0)) illegal(move, "child amount must be positive");
                if (config.black(c) < move.child->amount) illegal(move, "child black value would drop below 0");
                next.set_black(c, config.black(c) - move.child->amount);
            }
            break;
    }
    if (variant != PebbleVariant::FractionalBW) {
        for (int n : {i, move.child ? move.child->node : i}) {
            if (!is_whole(next.black(n)) || !is_whole(next.white(n)))
                illegal(move, "fractional pebble value in a whole pebbling");
        }
    }
    return next;
}

std::vector<PebbleConfig> PebbleSequence::configs() const {
    std::vector<PebbleConfig> out;
    out.reserve(moves.size() + 1);
    out.emplace_back(shape);
    for (std::size_t s = 0; s < moves.size(); ++s) {
        try {
            out.push_back(apply_move(out.back(), moves[s], variant));
        } catch (const IllegalMove& e) {
            throw IllegalMove("step " + std::to_string(s) + ": " + e.what());
        }
    }
    return out;
}

SequenceReport check_sequence(const PebbleSequence& seq) {
    SequenceReport rep;
    if (seq.denominator < 1) {
        rep.error = "denominator must be positive";
        return rep;
    }
    PebbleConfig cur(seq.shape);
    bool root_reached = false;
    for (std::size_t s = 0; s < seq.moves.size(); ++s) {
        const auto& m = seq.moves[s];
        auto aligned = [&](const Rational& r) { return (r * Rational(seq.denominator)).is_integer(); };
        if (!aligned(m.amount) || (m.child && !aligned(m.child->amount))) {
            rep.error = "step " + std::to_string(s) + ": amount not a multiple of 1/" + std::to_string(seq.denominator);
            rep.failed_step = static_cast<int>(s);
            return rep;
        }
        try {
            cur = apply_move(cur, m, seq.variant);
        } catch (const IllegalMove& e) {
            rep.error = "step " + std::to_string(s) + ": " + e.what();
            rep.failed_step = static_cast<int>(s);
            return rep;
        }
        rep.peak = std::max(rep.peak, cur.total());
        if (cur.black(1) == Rational(1)) root_reached = true;
    }
    if (!cur.is_empty()) {
        rep.error = "final configuration is not empty";
        return rep;
    }
    if (!root_reached) {
        rep.error = "root never reaches black pebble value 1";
        return rep;
    }
    rep.valid = true;
    return rep;
}

Rational validate_sequence(const PebbleSequence& seq) {
    auto rep = check_sequence(seq);
    if (!rep.valid) throw IllegalMove(rep.error);
    return rep.peak;
}

bool is_read_once(const PebbleSequence& seq) {
    auto configs = seq.configs();
    for (int node = 1; node <= seq.shape.node_count(); ++node) {
        int segments = 0;
        bool in_segment = false;
        Rational b, w;
        for (const auto& c : configs) {
            bool on = c.is_pebbled(node);
            if (on && !in_segment) {
                ++segments;
                b = c.black(node);
                w = c.white(node);
            } else if (on && (c.black(node) != b || c.white(node) != w)) {
                return false;
            }
            in_segment = on;
        }
        if (segments != 1) return false;
    }
    return true;
}

std::vector<PebbleMove> moves_between(const PebbleConfig& from, const PebbleConfig& to) {
    const int n = from.node_count();
    std::vector<Rational> db(n + 1), dw(n + 1);
    for (int i = 1; i <= n; ++i) {
        db[i] = to.black(i) - from.black(i);
        dw[i] = to.white(i) - from.white(i);
        if (dw[i] < Rational(0) && !to.white(i).is_zero())
            throw IllegalMove("white value of node " + std::to_string(i) + " decreases to a nonzero value");
    }
    auto parent_acts = [&](int c) {
        return c > 1 && (db[c / 2] > Rational(0) || dw[c / 2] < Rational(0));
    };
    std::vector<PebbleMove> out;
    std::vector<char> done(n + 1, 0);
    for (int i = 1; i <= n; ++i)
        if (db[i] < Rational(0) && !parent_acts(i)) {
            out.push_back(PebbleMove::decrease_black(i, -db[i]));
            done[i] = 1;
        }
    // white increases are always legal: add them only where a placement or
    // removal needs a full child, the rest once everything else is done
    std::vector<char> whitened(n + 1, 0);
    auto whiten_children = [&](int i) {
        for (int c : {2 * i, 2 * i + 1})
            if (c <= n && !whitened[c] && dw[c] > Rational(0)) {
                out.push_back(PebbleMove::increase_white(c, dw[c]));
                whitened[c] = 1;
            }
    };
    // children first, so a parent placed in the same step finds them full
    for (int i = n; i >= 1; --i) {
        if (!(db[i] > Rational(0))) continue;
        whiten_children(i);
        auto move = PebbleMove::place_black(i, db[i]);
        for (int c : {2 * i, 2 * i + 1}) {
            if (c <= n && !done[c] && db[c] < Rational(0)) {
                move.child = ChildDecrease{c, -db[c]};
                done[c] = 1;
                break;
            }
        }
        out.push_back(move);
    }
    for (int i = n; i >= 1; --i)
        if (dw[i] < Rational(0)) {
            whiten_children(i);
            out.push_back(PebbleMove::remove_white(i));
        }
    for (int i = 1; i <= n; ++i)
        if (db[i] < Rational(0) && !done[i]) out.push_back(PebbleMove::decrease_black(i, -db[i]));
    for (int i = 1; i <= n; ++i)
        if (dw[i] > Rational(0) && !whitened[i]) out.push_back(PebbleMove::increase_white(i, dw[i]));
    return out;
}

// --- strategy generators ----------------------------------------------------
//
// A plan pebbles the subtree below `root`. `pre` ends at the critical time
// (root black, few other pebbles); `root_place` indexes the move in `pre`
// that puts the black pebble on the root. Running pre + removal + post is a
// complete pebbling; pre + post keeps the root's black pebble.

namespace {

struct Plan {
    int root = 1;
    std::vector<PebbleMove> pre;
    std::size_t root_place = 0;
    std::vector<PebbleMove> post;
};

void append(std::vector<PebbleMove>& dst, const std::vector<PebbleMove>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

std::vector<PebbleMove> retain_root(const Plan& p) {
    auto out = p.pre;
    append(out, p.post);
    return out;
}

// Same subtree work, but the root carries a white pebble that is removed
// where the plan would have placed the black one.
std::vector<PebbleMove> verify_root(const Plan& p) {
    std::vector<PebbleMove> out;
    for (std::size_t s = 0; s < p.pre.size(); ++s) {
        if (s != p.root_place) {
            out.push_back(p.pre[s]);
            continue;
        }
        const auto& place = p.pre[s];
        out.push_back(PebbleMove::remove_white(p.root));
        if (place.child) out.push_back(PebbleMove::decrease_black(place.child->node, place.child->amount));
    }
    append(out, p.post);
    return out;
}

Plan plan_height2(int r) {
    Plan p;
    p.root = r;
    p.pre = {PebbleMove::place_black(2 * r), PebbleMove::place_black(2 * r + 1), PebbleMove::slide_black(r, 2 * r),
             PebbleMove::decrease_black(2 * r + 1)};
    p.root_place = 2;
    return p;
}

Plan plan_black(int r, int g) {
    if (g == 2) return plan_height2(r);
    Plan p;
    p.root = r;
    p.pre = retain_root(plan_black(2 * r, g - 1));
    append(p.pre, retain_root(plan_black(2 * r + 1, g - 1)));
    p.root_place = p.pre.size();
    p.pre.push_back(PebbleMove::slide_black(r, 2 * r));
    p.pre.push_back(PebbleMove::decrease_black(2 * r + 1));
    return p;
}

// Height-3 fractional base using 5/2 pebbles: half a black pebble on the
// right child, a whole one on the left, then the missing half guessed white.
Plan plan_fractional_height3(int r) {
    const Rational half(1, 2);
    const int c0 = 2 * r, c1 = 2 * r + 1;
    const int g00 = 4 * r, g01 = 4 * r + 1, g10 = 4 * r + 2, g11 = 4 * r + 3;
    Plan p;
    p.root = r;
    p.pre = {PebbleMove::place_black(g10),
             PebbleMove::place_black(g11),
             PebbleMove::slide_black(c1, g10, half, 1),
             PebbleMove::decrease_black(g11),
             PebbleMove::place_black(g00),
             PebbleMove::place_black(g01),
             PebbleMove::slide_black(c0, g00),
             PebbleMove::decrease_black(g01),
             PebbleMove::increase_white(c1, half),
             PebbleMove::slide_black(r, c0),
             PebbleMove::decrease_black(c1, half)};
    p.root_place = 9;
    p.post = {PebbleMove::place_black(g10), PebbleMove::place_black(g11), PebbleMove::remove_white(c1),
              PebbleMove::decrease_black(g10), PebbleMove::decrease_black(g11)};
    return p;
}

using Planner = Plan (*)(int, int);

// Height g+2 from four height-g subplans (the grandchildren of r).
Plan plan_lift(int r, int g, Planner sub) {
    const int c0 = 2 * r, c1 = 2 * r + 1;
    const int g00 = 4 * r, g01 = 4 * r + 1, g10 = 4 * r + 2, g11 = 4 * r + 3;
    Plan p;
    p.root = r;
    // Black pebble on g00, everything else below it cleaned up.
    p.pre = retain_root(sub(g00, g));
    // Pebble g01 up to its critical time, slide g00 -> c0, drop g01, then
    // resume g01's subtree (its root pebble is already gone).
    Plan b = sub(g01, g);
    append(p.pre, b.pre);
    p.pre.push_back(PebbleMove::slide_black(c0, g00));
    p.pre.push_back(PebbleMove::decrease_black(g01));
    append(p.pre, b.post);
    // Suspend g10 at its critical time, guess g11, slide up twice.
    Plan c = sub(g10, g);
    append(p.pre, c.pre);
    p.pre.push_back(PebbleMove::increase_white(g11));
    p.pre.push_back(PebbleMove::slide_black(c1, g10));
    p.root_place = p.pre.size();
    p.pre.push_back(PebbleMove::slide_black(r, c0));
    p.pre.push_back(PebbleMove::decrease_black(c1));
    p.post = c.post;
    append(p.post, verify_root(sub(g11, g)));
    return p;
}

Plan plan_wbw(int r, int g) {
    if (g == 2) return plan_height2(r);
    if (g == 3) return plan_black(r, 3);
    return plan_lift(r, g - 2, &plan_wbw);
}

Plan plan_fractional(int r, int g) {
    if (g == 2) return plan_height2(r);
    if (g == 3) return plan_fractional_height3(r);
    return plan_lift(r, g - 2, &plan_fractional);
}

PebbleSequence finish(const Plan& p, int h, PebbleVariant variant, int denominator) {
    PebbleSequence seq{TreeShape(h), variant, denominator, p.pre};
    seq.moves.push_back(PebbleMove::decrease_black(p.root));
    append(seq.moves, p.post);
    return seq;
}

}  // namespace

PebbleSequence generate_black_strategy(int h) {
    TreeShape shape(h);
    return finish(plan_black(1, h), h, PebbleVariant::Black, 1);
}

PebbleSequence generate_ro_wbw_strategy(int h) {
    TreeShape shape(h);
    return finish(plan_wbw(1, h), h, PebbleVariant::WholeBW, 1);
}

PebbleSequence generate_fractional_strategy(int h) {
    TreeShape shape(h);
    return finish(plan_fractional(1, h), h, PebbleVariant::FractionalBW, 2);
}

}  // namespace pebtep
