#include "pebtep/io.hpp"

#include <fstream>
#include <sstream>

#include "pebtep/error.hpp"

namespace pebtep {

namespace {

// Field access that reports what is missing instead of a bare type error.
const Json& field(const Json& j, const char* key, const char* what) {
    if (!j.is_object()) throw ParseError(std::string(what) + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string(what) + ": missing \"" + key + "\"");
    return *it;
}

int int_field(const Json& j, const char* key, const char* what) {
    const Json& v = field(j, key, what);
    if (!v.is_number_integer()) throw ParseError(std::string(what) + ": \"" + key + "\" must be an integer");
    return v.get<int>();
}

std::string str_field(const Json& j, const char* key, const char* what) {
    const Json& v = field(j, key, what);
    if (!v.is_string()) throw ParseError(std::string(what) + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

template <class F>
auto rethrow_as_parse(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    } catch (const Json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

}  // namespace

// --- instances ----------------------------------------------------------------------

Json to_json(const TepInstance& I) {
    Json j;
    j["h"] = I.height();
    j["k"] = I.k();
    j["variant"] = std::string(to_string(I.variant()));
    j["leaves"] = std::vector<int>(I.leaves().begin(), I.leaves().end());
    Json tables = Json::object();
    for (int node = 1; node < I.shape().first_leaf(); ++node) {
        Json rows = Json::array();
        for (int x = 0; x < I.k(); ++x) {
            auto t = I.table(node);
            rows.push_back(std::vector<int>(t.begin() + x * I.k(), t.begin() + (x + 1) * I.k()));
        }
        tables[std::to_string(node)] = std::move(rows);
    }
    j["tables"] = std::move(tables);
    return j;
}

TepInstance instance_from_json(const Json& j) {
    constexpr const char* what = "instance";
    return rethrow_as_parse(what, [&] {
        TepInstance I(TreeShape(int_field(j, "h", what)), int_field(j, "k", what),
                      parse_problem_variant(str_field(j, "variant", what)));
        const auto& leaves = field(j, "leaves", what);
        if (!leaves.is_array() || static_cast<int>(leaves.size()) != I.shape().leaf_count())
            throw ParseError("instance: \"leaves\" must list every leaf");
        for (int i = 0; i < I.shape().leaf_count(); ++i) I.set_leaf(I.shape().first_leaf() + i, leaves[i].get<int>());
        const auto& tables = field(j, "tables", what);
        for (int node = 1; node < I.shape().first_leaf(); ++node) {
            const auto& rows = field(tables, std::to_string(node).c_str(), "instance tables");
            if (!rows.is_array() || static_cast<int>(rows.size()) != I.k())
                throw ParseError("instance: table " + std::to_string(node) + " must have k rows");
            for (int x = 0; x < I.k(); ++x) {
                if (!rows[x].is_array() || static_cast<int>(rows[x].size()) != I.k())
                    throw ParseError("instance: table " + std::to_string(node) + " row " + std::to_string(x) +
                                     " must have k entries");
                for (int y = 0; y < I.k(); ++y) I.set_func(node, x, y, rows[x][y].get<int>());
            }
        }
        I.validate();
        return I;
    });
}

// --- strategies ---------------------------------------------------------------------

Json to_json(const PebbleSequence& seq) {
    Json j;
    j["h"] = seq.shape.height();
    j["variant"] = std::string(to_string(seq.variant));
    j["denominator"] = seq.denominator;
    Json moves = Json::array();
    for (const auto& m : seq.moves) {
        Json mj;
        mj["kind"] = std::string(to_string(m.kind));
        mj["node"] = m.node;
        mj["amount"] = m.amount.str();
        if (m.child) {
            mj["child"] = m.child->node;
            mj["child_amount"] = m.child->amount.str();
        }
        moves.push_back(std::move(mj));
    }
    j["moves"] = std::move(moves);
    return j;
}

PebbleSequence sequence_from_json(const Json& j) {
    constexpr const char* what = "strategy";
    return rethrow_as_parse(what, [&] {
        PebbleSequence seq{TreeShape(int_field(j, "h", what)), parse_pebble_variant(str_field(j, "variant", what)),
                           int_field(j, "denominator", what), {}};
        const auto& moves = field(j, "moves", what);
        if (!moves.is_array()) throw ParseError("strategy: \"moves\" must be an array");
        for (std::size_t i = 0; i < moves.size(); ++i) {
            const std::string where = "strategy move " + std::to_string(i);
            const auto& mj = moves[i];
            PebbleMove m{parse_move_kind(str_field(mj, "kind", where.c_str())), int_field(mj, "node", where.c_str()),
                         1, std::nullopt};
            if (mj.contains("amount")) m.amount = Rational::parse(str_field(mj, "amount", where.c_str()));
            if (mj.contains("child")) {
                Rational ca = mj.contains("child_amount") ? Rational::parse(str_field(mj, "child_amount", where.c_str()))
                                                          : Rational(1);
                m.child = ChildDecrease{int_field(mj, "child", where.c_str()), ca};
            }
            seq.moves.push_back(m);
        }
        return seq;
    });
}

std::string pebble_timeline_tsv(const PebbleSequence& seq) {
    std::ostringstream out;
    out << "step\tmove\tnode\tblack\twhite\n";
    auto configs = seq.configs();
    for (std::size_t t = 0; t < configs.size(); ++t) {
        const std::string move = t == 0 ? "-" : seq.moves[t - 1].describe();
        for (int i = 1; i <= seq.shape.node_count(); ++i)
            if (configs[t].is_pebbled(i))
                out << t << '\t' << move << '\t' << i << '\t' << configs[t].black(i) << '\t' << configs[t].white(i) << '\n';
    }
    return out.str();
}

// --- branching programs ----------------------------------------------------------------

namespace {

Json label_json(const StateLabel& l) {
    Json j;
    j["kind"] = std::string(to_string(l.kind));
    switch (l.kind) {
        case StateKind::Leaf: j["node"] = l.node; break;
        case StateKind::Func:
            j["node"] = l.node;
            j["x"] = l.x;
            j["y"] = l.y;
            break;
        case StateKind::Final: j["value"] = l.value; break;
        default: break;
    }
    return j;
}

StateLabel label_from_json(const Json& j) {
    constexpr const char* what = "state label";
    StateLabel l;
    l.kind = parse_state_kind(str_field(j, "kind", what));
    switch (l.kind) {
        case StateKind::Leaf: l.node = int_field(j, "node", what); break;
        case StateKind::Func:
            l.node = int_field(j, "node", what);
            l.x = int_field(j, "x", what);
            l.y = int_field(j, "y", what);
            break;
        case StateKind::Final: l.value = int_field(j, "value", what); break;
        default: break;
    }
    return l;
}

Json tag_json(const StateTag& t) {
    Json entries = Json::array();
    for (const auto& e : t.entries)
        entries.push_back({{"node", e.node}, {"value", e.value}, {"black", e.black_mask}, {"white", e.white_mask}});
    return {{"layer", t.layer}, {"entries", entries}};
}

StateTag tag_from_json(const Json& j) {
    StateTag t;
    t.layer = int_field(j, "layer", "tag");
    for (const auto& e : field(j, "entries", "tag"))
        t.entries.push_back({int_field(e, "node", "tag entry"), int_field(e, "value", "tag entry"),
                             field(e, "black", "tag entry").get<std::uint32_t>(),
                             field(e, "white", "tag entry").get<std::uint32_t>()});
    return t;
}

}  // namespace

Json to_json(const BranchingProgram& bp) {
    Json j;
    j["h"] = bp.height();
    j["k"] = bp.k();
    j["variant"] = std::string(to_string(bp.variant()));
    j["problem"] = std::string(to_string(bp.problem()));
    if (bp.output_arity() != bp.k()) j["outputs"] = bp.output_arity();
    j["start"] = bp.state(bp.start()).id;
    Json states = Json::array();
    for (const auto& s : bp.states()) {
        Json sj{{"id", s.id}, {"label", label_json(s.label)}};
        if (s.tag) sj["tag"] = tag_json(*s.tag);
        states.push_back(std::move(sj));
    }
    j["states"] = std::move(states);
    Json edges = Json::array();
    for (const auto& e : bp.edges()) {
        Json ej{{"from", bp.state(e.from).id}, {"to", bp.state(e.to).id}};
        if (e.label >= 0) ej["label"] = e.label;
        edges.push_back(std::move(ej));
    }
    j["edges"] = std::move(edges);
    return j;
}

BranchingProgram bp_from_json(const Json& j) {
    constexpr const char* what = "branching program";
    return rethrow_as_parse(what, [&] {
        BranchingProgram bp(int_field(j, "h", what), int_field(j, "k", what),
                            parse_problem_variant(str_field(j, "problem", what)),
                            parse_bp_variant(str_field(j, "variant", what)));
        if (j.contains("outputs")) bp.set_output_arity(int_field(j, "outputs", what));
        const int start_id = int_field(j, "start", what);
        std::map<int, int> index;
        const auto& states = field(j, "states", what);
        if (!states.is_array()) throw ParseError("branching program: \"states\" must be an array");
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto& sj = states[i];
            const int id = int_field(sj, "id", "state");
            std::optional<StateTag> tag;
            if (sj.contains("tag")) tag = tag_from_json(sj["tag"]);
            if (index.count(id)) throw ParseError("branching program: duplicate state id " + std::to_string(id));
            index[id] = bp.add_state(label_from_json(field(sj, "label", "state")), tag, id);
        }
        auto lookup = [&](int id) {
            auto it = index.find(id);
            if (it == index.end()) throw ParseError("branching program: unknown state id " + std::to_string(id));
            return it->second;
        };
        const auto& edges = field(j, "edges", what);
        if (!edges.is_array()) throw ParseError("branching program: \"edges\" must be an array");
        for (const auto& ej : edges) {
            const int label = ej.contains("label") ? int_field(ej, "label", "edge") : -1;
            bp.add_edge(lookup(int_field(ej, "from", "edge")), lookup(int_field(ej, "to", "edge")), label);
        }
        bp.set_start(lookup(start_id));
        bp.finalize();
        return bp;
    });
}

std::string export_dot(const BranchingProgram& bp) {
    std::ostringstream out;
    out << "digraph bp {\n  rankdir=TB;\n";
    for (const auto& s : bp.states()) {
        const auto& l = s.label;
        std::string text;
        switch (l.kind) {
            case StateKind::Leaf: text = "l" + std::to_string(l.node); break;
            case StateKind::Func:
                text = "f" + std::to_string(l.node) + "(" + std::to_string(l.x) + "," + std::to_string(l.y) + ")";
                break;
            case StateKind::Guess: text = "?"; break;
            case StateKind::Final: text = "out " + std::to_string(l.value); break;
            case StateKind::Accept: text = "accept"; break;
        }
        if (s.tag && !s.tag->entries.empty()) {
            text += "\\n";
            for (std::size_t i = 0; i < s.tag->entries.size(); ++i) {
                const auto& e = s.tag->entries[i];
                text += (i ? " " : "") + std::string("v") + std::to_string(e.node) + "=" + std::to_string(e.value);
                if (e.white_mask) text += "w";
            }
        }
        const char* shape = l.is_terminal() ? "doublecircle" : (l.kind == StateKind::Guess ? "diamond" : "box");
        out << "  s" << s.id << " [label=\"" << text << "\", shape=" << shape << "];\n";
    }
    for (const auto& e : bp.edges()) {
        out << "  s" << bp.state(e.from).id << " -> s" << bp.state(e.to).id;
        if (e.label >= 0) out << " [label=\"" << e.label << "\"]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

// --- reports ---------------------------------------------------------------------

Json to_json(const ThriftyReport& r) {
    Json v = Json::array();
    for (const auto& w : r.violations)
        v.push_back({{"state", w.state_id}, {"values", w.values}, {"path_states", w.path.states}});
    return {{"property", "thrifty"}, {"pass", r.pass}, {"sweep", std::string(to_string(r.sweep))},
            {"inputs", r.inputs}, {"violations", v}};
}

Json to_json(const ReadOnceReport& r) {
    Json j{{"property", "read-once"}, {"pass", r.pass}};
    if (!r.pass) j["witness"] = {{"node", r.node}, {"first", r.first_state_id}, {"second", r.second_state_id}};
    return j;
}

Json to_json(const BitwiseReport& r) {
    Json j{{"property", "bitwise"}, {"pass", r.pass}, {"sweep", std::string(to_string(r.sweep))},
           {"encoding", r.encoding.code}};
    if (!r.warning.empty()) j["warning"] = r.warning;
    if (!r.pass)
        j["witness"] = {{"state", r.state_id}, {"set", std::string(1, r.set)},
                        {"cause", r.node ? "projection bits" : "not a product of projections"},
                        {"node", r.node}, {"size", r.set_size}, {"product", r.product_size}};
    return j;
}

Json to_json(const FractionalExtraction& r) {
    Json claims = Json::array();
    for (const auto& c : r.claims) {
        Json cj{{"name", c.name}, {"pass", c.pass}, {"checked", c.checked}, {"violations", c.violations}};
        if (!c.witness.empty()) cj["witness"] = c.witness;
        claims.push_back(std::move(cj));
    }
    return {{"inputs_checked", r.inputs_checked}, {"preconditions_met", r.preconditions_met},
            {"precondition_note", r.precondition_note}, {"claims", claims}};
}

Json to_json(const CensusReport& r) {
    Json buckets = Json::object();
    for (auto [s, c] : r.buckets) buckets[std::to_string(s)] = c;
    return {{"h", r.h},
            {"k", r.k},
            {"extraction", r.kind == ExtractionKind::Whole ? "whole" : "fractional"},
            {"threshold", r.threshold.str()},
            {"e_size", r.e_size},
            {"inputs", r.inputs},
            {"exhaustive", r.exhaustive},
            {"seed", r.seed},
            {"unreached", r.unreached},
            {"buckets", buckets},
            {"max_bucket", r.max_bucket},
            {"bucket_bound", r.bucket_bound},
            {"implied_bound", r.implied_bound.str()},
            {"size", r.size},
            {"states_used", r.states_used}};
}

Json to_json(const AdderReport& r) {
    return {{"pairs", r.pairs},           {"k", r.k},
            {"correct", r.correct},       {"last_edges", r.last_edges},
            {"max_fe", r.max_fe},         {"fe_limit", r.fe_limit},
            {"fe_ok", r.fe_ok},           {"edge_lower_bound", r.edge_lower_bound},
            {"states", r.states},         {"state_lower_bound", r.state_lower_bound},
            {"states_ok", r.states_ok}};
}

Json to_json(const AdderSearchResult& r) {
    Json by = Json::object();
    for (auto [n, c] : r.correct_by_states) by[std::to_string(n)] = c;
    Json j{{"k", r.k}, {"max_states", r.max_states}, {"programs", r.programs}, {"correct_by_states", by}};
    j["min_states"] = r.min_states ? Json(*r.min_states) : Json(nullptr);
    return j;
}

// --- files -------------------------------------------------------------------------

Json parse_json(const std::string& text, const std::string& where) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(where + ": byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path.string());
}

void save_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace pebtep
