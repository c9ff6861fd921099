// pebbletep: command line front end. Subcommands exchange JSON files.
//
// exit codes: 0 ok, 1 verification failed, 2 usage / bad input, 3 budget exceeded
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pebtep/analyze.hpp"
#include "pebtep/compile.hpp"
#include "pebtep/criteria.hpp"
#include "pebtep/error.hpp"
#include "pebtep/io.hpp"

using namespace pebtep;

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

class UsageError : public Error {
public:
    using Error::Error;
};

// "-" means stdin / stdout.
Json read_input(const std::string& path) {
    if (path == "-") {
        std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
        return parse_json(text, "<stdin>");
    }
    return load_json(path);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << text;
}

void write_output(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::vector<TepInstance> read_instances(const std::string& path) {
    Json j = read_input(path);
    if (j.is_object() && j.contains("instances")) j = j["instances"];
    std::vector<TepInstance> out;
    if (j.is_array())
        for (const auto& e : j) out.push_back(instance_from_json(e));
    else
        out.push_back(instance_from_json(j));
    return out;
}

// Accepts p/q, "h", "h/q", "(h+1)/2", "ceil(h/q)".
Rational parse_threshold(std::string text, int h) {
    bool ceil = false;
    if (text.rfind("ceil(", 0) == 0 && text.back() == ')') {
        ceil = true;
        text = text.substr(5, text.size() - 6);
    }
    if (text == "(h+1)/2") return Rational(h + 1, 2);
    if (!text.empty() && text[0] == 'h') text = std::to_string(h) + text.substr(1);
    Rational r = Rational::parse(text);
    if (ceil) {
        std::int64_t q = (r.num() + r.den() - 1) / r.den();
        return Rational(q);
    }
    return r;
}

// Fractional census when some tag fixes part of a value's bits.
bool has_partial_tags(const BranchingProgram& bp) {
    for (const auto& s : bp.states())
        if (s.tag)
            for (const auto& e : s.tag->entries)
                for (auto m : {e.black_mask, e.white_mask})
                    if (m != 0 && m != kWholeValue) return true;
    return false;
}

Encoding parse_encoding(const std::string& text, int k) {
    if (text.empty() || text == "identity") return Encoding::identity(k);
    Encoding phi = Encoding::identity(k);
    std::stringstream ss(text);
    std::string item;
    phi.code.clear();
    while (std::getline(ss, item, ',')) phi.code.push_back(std::stoi(item));
    phi.validate();
    return phi;
}

// --- subcommands ------------------------------------------------------------------

struct GenArgs {
    int h = 2, k = 2;
    std::string variant = "BT";
    bool hard = false, all = false;
    std::uint64_t count = 1, seed = 1;
    std::optional<std::uint64_t> index;
    std::string out;
};

int cmd_gen(const GenArgs& a) {
    const auto pv = parse_problem_variant(a.variant);
    std::vector<TepInstance> instances;
    if (a.all) {
        if (a.hard) {
            std::uint64_t n = count_hard_inputs(a.h, a.k);
            if (n > default_budget()) throw BudgetExceeded("|E| = " + std::to_string(n) + " exceeds the budget");
            for_each_hard_input(a.h, a.k, [&](const TepInstance& I) { instances.push_back(I); });
        } else {
            enumerate_all_instances(a.h, a.k, pv, default_budget(),
                                    [&](const TepInstance& I) { instances.push_back(I); });
        }
    } else if (a.index) {
        instances.push_back(a.hard ? hard_input_at(a.h, a.k, *a.index) : instance_at(a.h, a.k, pv, *a.index));
    } else {
        std::mt19937_64 rng(a.seed);
        for (std::uint64_t i = 0; i < a.count; ++i)
            instances.push_back(a.hard ? random_hard_input(a.h, a.k, rng) : sampled_instance(a.h, a.k, pv, a.seed, i));
    }
    // E is defined for BT; for FT only the variant tag changes
    if (a.hard && pv == ProblemVariant::FT)
        for (auto& I : instances) {
            Json j = to_json(I);
            j["variant"] = "FT";
            I = instance_from_json(j);
        }
    if (instances.size() == 1 && !a.all) {
        write_output(a.out, to_json(instances[0]));
        return 0;
    }
    Json arr = Json::array();
    for (const auto& I : instances) arr.push_back(to_json(I));
    write_output(a.out, Json{{"seed", a.seed}, {"instances", arr}});
    return 0;
}

struct PebbleArgs {
    int h = 2;
    std::string variant = "black";
    bool read_once = false, optimal = false;
    int denominator = 0;
    std::string validate, timeline, out;
};

int cmd_pebble(const PebbleArgs& a) {
    if (!a.validate.empty()) {
        auto seq = sequence_from_json(read_input(a.validate));
        auto rep = check_sequence(seq);
        Json j{{"valid", rep.valid}, {"moves", seq.moves.size()}};
        if (rep.valid) {
            j["peak"] = rep.peak.str();
            j["read_once"] = is_read_once(seq);
            if (!a.timeline.empty()) write_text(a.timeline, pebble_timeline_tsv(seq));
        } else {
            j["error"] = rep.error;
            j["failed_step"] = rep.failed_step;
        }
        write_output(a.out, j);
        return rep.valid ? 0 : kExitVerify;
    }
    const auto variant = parse_pebble_variant(a.variant);
    if (a.optimal) {
        int d = a.denominator ? a.denominator : (variant == PebbleVariant::FractionalBW ? 2 : 1);
        auto p = optimal_peak(a.h, variant, d);
        write_output(a.out, Json{{"h", a.h}, {"variant", a.variant}, {"denominator", d}, {"optimal_peak", p.str()}});
        return 0;
    }
    PebbleSequence seq;
    switch (variant) {
        case PebbleVariant::Black: seq = generate_black_strategy(a.h); break;
        case PebbleVariant::WholeBW: seq = generate_ro_wbw_strategy(a.h); break;
        case PebbleVariant::FractionalBW: seq = generate_fractional_strategy(a.h); break;
    }
    if (a.read_once && !is_read_once(seq)) throw UsageError("no read-once generator for this variant");
    if (!a.timeline.empty()) write_text(a.timeline, pebble_timeline_tsv(seq));
    write_output(a.out, to_json(seq));
    return 0;
}

struct CompileArgs {
    std::string strategy, problem = "BT", encoding, out, dot;
    int k = 2, h = 0, adder = 0;
    bool keep_guess = false, group = false, queried = false;
};

int cmd_compile(const CompileArgs& a) {
    std::optional<BranchingProgram> bp;
    if (a.group) {
        if (a.h < 2) throw UsageError("--group needs --h");
        bp = compile_group_sft(a.h, a.k, cyclic_group_table(a.k), !a.queried);
    } else if (a.adder) {
        if (a.adder == 1) bp = canonical_adder(a.k);
        else if (a.adder == 2) bp = canonical_two_pair_adder(a.k);
        else throw UsageError("--adder takes 1 or 2");
    } else {
        if (a.strategy.empty()) throw UsageError("compile needs --strategy, --group or --adder");
        auto seq = sequence_from_json(read_input(a.strategy));
        CompileOptions opts;
        opts.keep_guess_states = a.keep_guess;
        opts.problem = parse_problem_variant(a.problem);
        const int h = seq.shape.height();
        switch (seq.variant) {
            case PebbleVariant::Black: bp = compile_black_to_dtbp(seq, h, a.k, opts); break;
            case PebbleVariant::WholeBW: bp = compile_wbw_to_ntbp(seq, h, a.k, opts); break;
            case PebbleVariant::FractionalBW:
                bp = compile_fractional_to_bintbp(seq, h, a.k, parse_encoding(a.encoding, a.k), opts);
                break;
        }
    }
    if (!a.dot.empty()) write_text(a.dot, export_dot(*bp));
    write_output(a.out, to_json(*bp));
    return 0;
}

struct RunArgs {
    std::string bp, instances, out;
    bool oracle = false;
    std::uint64_t samples = 100000, seed = 1;
    int jobs = 1;
};

int cmd_run(const RunArgs& a) {
    auto bp = bp_from_json(read_input(a.bp));
    if (a.oracle) {
        auto o = check_against_evaluate(bp, default_budget(), a.samples, a.seed, a.jobs);
        Json j{{"exhaustive", o.exhaustive}, {"instances", o.instances}, {"disagreements", o.disagreements},
               {"seed", o.seed}};
        if (o.first_bad) {
            auto I = o.exhaustive ? instance_at(bp.height(), bp.k(), bp.problem(), *o.first_bad)
                                  : sampled_instance(bp.height(), bp.k(), bp.problem(), a.seed, *o.first_bad);
            j["witness"] = to_json(I);
        }
        write_output(a.out, j);
        return o.disagreements ? kExitVerify : 0;
    }
    if (a.instances.empty()) throw UsageError("run needs --instances or --oracle");
    Json results = Json::array();
    for (const auto& I : read_instances(a.instances)) {
        if (I.height() != bp.height() || I.k() != bp.k()) throw UsageError("instance shape does not match the program");
        auto vals = evaluate(I);
        Json r{{"root", vals.root()}, {"accepted", accepts(bp, I)}, {"solves", solves(bp, I)}};
        auto outs = reachable_outputs(bp, I);
        r["outputs"] = std::vector<int>(outs.begin(), outs.end());
        results.push_back(std::move(r));
    }
    write_output(a.out, Json{{"results", results}});
    return 0;
}

struct VerifyArgs {
    std::string bp, property, sweep = "E", encoding = "identity", threshold, out;
    std::uint64_t samples = 100000, seed = 1;
    int jobs = 1, domain = 0, pairs = 1;
    bool waive = false;
};

int cmd_verify(const VerifyArgs& a) {
    auto bp = bp_from_json(read_input(a.bp));
    SweepSpec sweep;
    sweep.kind = parse_sweep_kind(a.sweep);
    sweep.samples = a.samples;
    sweep.seed = a.seed;
    sweep.jobs = a.jobs;
    sweep.domain = a.domain;
    Json j;
    bool pass = false;
    const std::string& p = a.property;
    if (p == "read-once") {
        auto r = check_syntactic_read_once(bp);
        j = to_json(r);
        pass = r.pass;
    } else if (p == "thrifty") {
        auto r = check_thrifty(bp, compute_state_sets(bp, sweep));
        j = to_json(r);
        pass = r.pass;
    } else if (p == "bitwise") {
        const bool search = a.encoding == "search";
        auto phi = search ? Encoding::identity(a.domain ? a.domain : bp.k()) : parse_encoding(a.encoding, bp.k());
        auto r = check_bitwise_independence(bp, compute_state_sets(bp, sweep), phi,
                                            search ? EncodingMode::Search : EncodingMode::Given);
        j = to_json(r);
        pass = r.pass;
    } else if (p == "extraction") {
        ExtractionOptions eo;
        eo.waive_preconditions = a.waive;
        eo.samples = a.samples;
        eo.seed = a.seed;
        eo.jobs = a.jobs;
        auto r = extract_bintbp_pebbling(bp, compute_state_sets(bp, sweep), eo);
        j = to_json(r);
        j["property"] = "extraction";
        j["seed"] = a.seed;
        pass = r.preconditions_met && r.all_pass();
        j["pass"] = pass;
    } else if (p == "state-config") {
        auto r = check_whole_extraction(bp);
        j = {{"property", p},          {"pass", r.pass && !r.truncated}, {"inputs", r.inputs},
             {"paths", r.paths},       {"conflicts", r.conflicts},       {"invalid", r.invalid},
             {"truncated", r.truncated}, {"max_peak", r.max_peak.str()}};
        if (!r.witness.empty()) j["witness"] = r.witness;
        pass = r.pass && !r.truncated;
    } else if (p == "find-input") {
        Rational t = a.threshold.empty() ? Rational((bp.height() + 1) / 2) : parse_threshold(a.threshold, bp.height());
        auto r = find_input_sweep(bp, t);
        j = {{"property", p},         {"pass", r.pass},         {"threshold", t.str()},
             {"inputs", r.inputs},    {"recovered", r.recovered}, {"ambiguous", r.ambiguous},
             {"wrong", r.wrong},      {"unreached", r.unreached}};
        if (!r.witness.empty()) j["witness"] = r.witness;
        pass = r.pass;
    } else if (p == "adder") {
        auto r = adder_census(bp, a.pairs, bp.k());
        j = to_json(r);
        j["property"] = p;
        pass = r.correct && r.fe_ok && r.states_ok;
        j["pass"] = pass;
    } else if (p == "solves") {
        auto o = check_against_evaluate(bp, default_budget(), a.samples, a.seed, a.jobs);
        j = {{"property", p},          {"pass", o.disagreements == 0}, {"exhaustive", o.exhaustive},
             {"instances", o.instances}, {"disagreements", o.disagreements}, {"seed", o.seed}};
        if (o.first_bad) j["witness"] = {{"index", *o.first_bad}};
        pass = o.disagreements == 0;
    } else {
        throw UsageError("unknown property " + p);
    }
    write_output(a.out, j);
    return pass ? 0 : kExitVerify;
}

struct CensusArgs {
    std::string bp, threshold, kind = "auto", out;
    std::uint64_t samples = 100000, seed = 1, exhaustive_limit = 1 << 20;
    int jobs = 1;
};

int cmd_census(const CensusArgs& a) {
    auto bp = bp_from_json(read_input(a.bp));
    CensusOptions co;
    if (a.kind == "auto") co.kind = has_partial_tags(bp) ? ExtractionKind::Fractional : ExtractionKind::Whole;
    else if (a.kind == "whole") co.kind = ExtractionKind::Whole;
    else if (a.kind == "fractional") co.kind = ExtractionKind::Fractional;
    else throw UsageError("--kind is auto, whole or fractional");
    co.samples = a.samples;
    co.seed = a.seed;
    co.jobs = a.jobs;
    co.exhaustive_limit = a.exhaustive_limit;
    Rational t = a.threshold.empty() ? Rational(bp.height(), 2) : parse_threshold(a.threshold, bp.height());
    write_output(a.out, to_json(entropy_census(bp, t, co)));
    return 0;
}

struct BenchArgs {
    std::vector<int> only;
    std::uint64_t seed = 1;
    int jobs = 1;
    bool timing = false;
    std::string out;
};

int cmd_bench(const BenchArgs& a) {
    CriteriaOptions opts;
    opts.jobs = a.jobs;
    opts.seed = a.seed;
    Json rows = Json::array();
    bool all = true;
    for (const auto& r : run_criteria(opts, a.only)) {
        Json checks = Json::array();
        for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        Json row{{"criterion", r.id}, {"title", r.title}, {"pass", r.pass()}, {"checks", checks}};
        if (a.timing) row["seconds"] = r.seconds;
        rows.push_back(std::move(row));
        all = all && r.pass();
    }
    write_output(a.out, Json{{"seed", a.seed}, {"criteria", rows}});
    return all ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pebbling games and branching programs for tree evaluation"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "write TEP instances");
    g->add_option("--h", gen.h, "tree height")->required()->check(CLI::Range(2, 20));
    g->add_option("--k", gen.k, "value range")->required()->check(CLI::Range(2, 1 << 12));
    g->add_option("--variant", gen.variant, "FT or BT");
    g->add_flag("--hard", gen.hard, "draw from the hard input set E");
    g->add_flag("--all", gen.all, "every instance (budget-capped)");
    g->add_option("--count", gen.count, "number of random instances")->check(CLI::PositiveNumber);
    g->add_option("--index", gen.index, "instance at this enumeration index");
    g->add_option("--seed", gen.seed, "random seed");
    g->add_option("-o,--out", gen.out, "output file (default stdout)");

    PebbleArgs peb;
    auto* p = app.add_subcommand("pebble", "generate, validate or optimise pebbling strategies");
    p->add_option("--h", peb.h, "tree height")->check(CLI::Range(2, 30));
    p->add_option("--variant", peb.variant, "black, wbw or fractional");
    p->add_flag("--read-once", peb.read_once, "require a read-once strategy");
    p->add_flag("--optimal", peb.optimal, "exact minimum peak by exhaustive search");
    p->add_option("--denominator", peb.denominator, "pebble granularity for --optimal")->check(CLI::PositiveNumber);
    p->add_option("--validate", peb.validate, "strategy JSON to check");
    p->add_option("--timeline", peb.timeline, "write the per-step pebble timeline as TSV");
    p->add_option("-o,--out", peb.out, "output file (default stdout)");

    CompileArgs comp;
    auto* c = app.add_subcommand("compile", "compile a strategy into a branching program");
    c->add_option("--strategy", comp.strategy, "strategy JSON ('-' for stdin)");
    c->add_option("--k", comp.k, "value range")->check(CLI::Range(2, 1 << 12));
    c->add_option("--problem", comp.problem, "BT or FT");
    c->add_option("--encoding", comp.encoding, "value codes for fractional strategies, e.g. 0,1,3,2");
    c->add_flag("--keep-guess-states", comp.keep_guess, "keep unlabelled guess/forget states");
    c->add_flag("--group", comp.group, "cyclic group program for FT");
    c->add_flag("--queried", comp.queried, "group program that queries f_1 at each step");
    c->add_option("--h", comp.h, "height for --group");
    c->add_option("--adder", comp.adder, "canonical adder with 1 or 2 pairs");
    c->add_option("--dot", comp.dot, "also write Graphviz DOT");
    c->add_option("-o,--out", comp.out, "output file (default stdout)");

    RunArgs run;
    auto* r = app.add_subcommand("run", "run a branching program on instances");
    r->add_option("--bp", run.bp, "program JSON ('-' for stdin)")->required();
    r->add_option("--instances", run.instances, "instance JSON (object or array)");
    r->add_flag("--oracle", run.oracle, "compare with direct evaluation over all or sampled instances");
    r->add_option("--samples", run.samples, "samples when exhaustive sweep exceeds the budget");
    r->add_option("--seed", run.seed, "random seed");
    r->add_option("--jobs", run.jobs, "worker threads")->check(CLI::PositiveNumber);
    r->add_option("-o,--out", run.out, "output file (default stdout)");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "check a structural property of a branching program");
    v->add_option("--bp", ver.bp, "program JSON ('-' for stdin)")->default_val("-");
    v->add_option("--property", ver.property,
                  "thrifty, read-once, bitwise, extraction, state-config, find-input, adder, solves")
        ->required();
    v->add_option("--sweep", ver.sweep, "E, all or sample");
    v->add_option("--samples", ver.samples, "sample count");
    v->add_option("--seed", ver.seed, "random seed");
    v->add_option("--jobs", ver.jobs, "worker threads")->check(CLI::PositiveNumber);
    v->add_option("--domain", ver.domain, "restrict E sweeps to values below this power of two");
    v->add_option("--encoding", ver.encoding, "identity, search, or a code list");
    v->add_option("--threshold", ver.threshold, "bottleneck threshold for find-input");
    v->add_option("--pairs", ver.pairs, "adder pairs (1 or 2)");
    v->add_flag("--waive-preconditions", ver.waive, "run extraction even if bitwise independence fails");
    v->add_option("-o,--out", ver.out, "output file (default stdout)");

    CensusArgs cen;
    auto* e = app.add_subcommand("census", "entropy census over the hard inputs");
    e->add_option("--bp", cen.bp, "program JSON ('-' for stdin)")->default_val("-");
    e->add_option("--threshold", cen.threshold, "pebble threshold: p/q, h/2, ceil(h/2), ...");
    e->add_option("--kind", cen.kind, "auto, whole or fractional");
    e->add_option("--samples", cen.samples, "samples when |E| exceeds the exhaustive limit");
    e->add_option("--exhaustive-limit", cen.exhaustive_limit, "largest |E| swept exhaustively");
    e->add_option("--seed", cen.seed, "random seed");
    e->add_option("--jobs", cen.jobs, "worker threads")->check(CLI::PositiveNumber);
    e->add_option("-o,--out", cen.out, "output file (default stdout)");

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "run the acceptance grid");
    b->add_option("--only", bench.only, "criterion ids");
    b->add_option("--seed", bench.seed, "random seed");
    b->add_option("--jobs", bench.jobs, "worker threads")->check(CLI::PositiveNumber);
    b->add_flag("--timing", bench.timing, "include wall-clock seconds (breaks byte-identical output)");
    b->add_option("-o,--out", bench.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*g) return cmd_gen(gen);
        if (*p) return cmd_pebble(peb);
        if (*c) return cmd_compile(comp);
        if (*r) return cmd_run(run);
        if (*v) return cmd_verify(ver);
        if (*e) return cmd_census(cen);
        if (*b) return cmd_bench(bench);
    } catch (const BudgetExceeded& err) {
        std::cerr << "budget exceeded: " << err.what() << '\n';
        return kExitBudget;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
