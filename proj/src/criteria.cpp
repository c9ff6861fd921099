#include "pebtep/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <sstream>

#include "pebtep/analyze.hpp"
#include "pebtep/compile.hpp"

namespace pebtep {

bool CriterionResult::pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

namespace {

constexpr std::uint64_t kSamples = 100000;     // sampled sweeps, minimum
constexpr std::uint64_t kExhaustiveCap = 1 << 20;

std::string hk(int h, int k) { return "h=" + std::to_string(h) + " k=" + std::to_string(k); }

template <class T>
std::string str(const T& v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// k^x for k = 2^l and l*x integral; 0 when not representable.
std::uint64_t kpow(int k, const Rational& x) {
    int l = 0;
    while ((1 << l) < k) ++l;
    if ((1 << l) != k) return 0;
    Rational e = x * Rational(l);
    if (e.den() != 1) return 0;
    return std::uint64_t{1} << e.num();
}

void add(CriterionResult& r, std::string name, bool pass, std::string detail) {
    r.checks.push_back({std::move(name), pass, std::move(detail)});
}

// --- 1 ----------------------------------------------------------------------

void pebbling_numbers(CriterionResult& r, const CriteriaOptions&) {
    for (int h : {2, 3, 4}) {
        auto p = optimal_peak(h, PebbleVariant::Black, 1);
        add(r, "black h=" + std::to_string(h), p == Rational(h), str(p) + " vs " + std::to_string(h));
    }
    for (int h : {2, 3, 4}) {
        auto p = optimal_peak(h, PebbleVariant::WholeBW, 1);
        Rational want((h + 1) / 2 + 1);
        add(r, "wbw h=" + std::to_string(h), p == want, str(p) + " vs " + str(want));
    }
    for (int h : {2, 3}) {
        auto p = optimal_peak(h, PebbleVariant::FractionalBW, 2);
        Rational want = Rational(h, 2) + 1;
        add(r, "fractional h=" + std::to_string(h), p == want, str(p) + " vs " + str(want));
    }
}

// --- 2 ----------------------------------------------------------------------

void generators(CriterionResult& r, const CriteriaOptions&) {
    for (int h = 2; h <= 5; ++h) {
        const std::string H = "h=" + std::to_string(h);
        auto b = check_sequence(generate_black_strategy(h));
        add(r, "black " + H, b.valid && b.peak == Rational(h), b.valid ? str(b.peak) : b.error);
        auto w = generate_ro_wbw_strategy(h);
        auto wr = check_sequence(w);
        Rational want((h + 1) / 2 + 1);
        bool ro = wr.valid && is_read_once(w);
        add(r, "ro-wbw " + H, wr.valid && wr.peak == want && ro,
            wr.valid ? str(wr.peak) + " vs " + str(want) + (ro ? ", read-once" : ", not read-once") : wr.error);
        auto f = check_sequence(generate_fractional_strategy(h));
        Rational bound = Rational(h, 2) + 1;
        add(r, "fractional " + H, f.valid && f.peak <= bound, f.valid ? str(f.peak) + " <= " + str(bound) : f.error);
    }
}

// --- 3 ----------------------------------------------------------------------

void compiler_oracle(CriterionResult& r, const CriteriaOptions& opts) {
    const std::pair<int, int> grid[] = {{2, 2}, {3, 2}, {4, 2}, {4, 4}};
    for (auto [h, k] : grid) {
        for (ProblemVariant pv : {ProblemVariant::BT, ProblemVariant::FT}) {
            CompileOptions co;
            co.problem = pv;
            const std::pair<std::string, BranchingProgram> programs[] = {
                {"wbw->ntbp", compile_wbw_to_ntbp(generate_ro_wbw_strategy(h), h, k, co)},
                {"black->dtbp", compile_black_to_dtbp(generate_black_strategy(h), h, k, co)}};
            for (const auto& [name, bp] : programs) {
                // exhaustive up to h=3; h=4 is sampled
                auto o = check_against_evaluate(bp, h <= 3 ? kExhaustiveCap : 0, kSamples, opts.seed, opts.jobs);
                bool enough = o.exhaustive || o.instances >= kSamples;
                add(r, name + " " + std::string(to_string(pv)) + " " + hk(h, k), enough && o.disagreements == 0,
                    std::to_string(o.disagreements) + " disagreements over " + std::to_string(o.instances) +
                        (o.exhaustive ? " (all)" : " (sampled)"));
            }
        }
    }
}

// --- 4 ----------------------------------------------------------------------

void size_bounds(CriterionResult& r, const CriteriaOptions&) {
    for (int h : {2, 3, 4})
        for (int k : {2, 4}) {
            auto bp = compile_wbw_to_ntbp(generate_ro_wbw_strategy(h), h, k);
            std::uint64_t bound = ((std::uint64_t{1} << h) - 1) * ipow(k, (h + 1) / 2 + 1);
            add(r, "rontbp " + hk(h, k), static_cast<std::uint64_t>(bp.size()) <= bound,
                std::to_string(bp.size()) + " <= " + std::to_string(bound));
        }
    const std::pair<int, int> frac[] = {{2, 2}, {4, 2}, {2, 4}, {3, 4}, {4, 4}};
    for (auto [h, k] : frac) {
        auto seq = generate_fractional_strategy(h);
        auto bp = compile_fractional_to_bintbp(seq, h, k, Encoding::identity(k));
        std::uint64_t bound = layer_count(seq) * kpow(k, Rational(h, 2) + 1);
        add(r, "bintbp " + hk(h, k), static_cast<std::uint64_t>(bp.size()) <= bound,
            std::to_string(bp.size()) + " <= " + std::to_string(layer_count(seq)) + "*k^(h/2+1) = " +
                std::to_string(bound));
    }
    for (int h : {3, 4, 5})
        for (int k : {2, 3, 4}) {
            auto bp = compile_group_sft(h, k, cyclic_group_table(k), true);
            std::uint64_t lo = (std::uint64_t{1} << (h - 2)) * k, hi = (std::uint64_t{1} << h) * k;
            std::uint64_t n = bp.size();
            add(r, "group sft " + hk(h, k), lo <= n && n <= hi,
                std::to_string(lo) + " <= " + std::to_string(n) + " <= " + std::to_string(hi));
        }
}

// --- 5 ----------------------------------------------------------------------

void property_checks(CriterionResult& r, const CriteriaOptions& opts) {
    SweepSpec sweep;
    sweep.jobs = opts.jobs;
    for (int h : {2, 3, 4})
        for (int k : {2, 4}) {
            auto bp = compile_wbw_to_ntbp(generate_ro_wbw_strategy(h), h, k);
            auto sets = compute_state_sets(bp, sweep);
            auto t = check_thrifty(bp, sets, 1);
            add(r, "thrifty rontbp " + hk(h, k), t.pass, std::to_string(t.violations.size()) + " violations");
            auto ro = check_syntactic_read_once(bp);
            add(r, "read-once rontbp " + hk(h, k), ro.pass,
                ro.pass ? "pass" : "node " + std::to_string(ro.node) + " queried at states " +
                                       std::to_string(ro.first_state_id) + " and " +
                                       std::to_string(ro.second_state_id));
        }
    for (int h : {2, 4})
        for (int k : {2, 4}) {
            auto bp = compile_fractional_to_bintbp(generate_fractional_strategy(h), h, k, Encoding::identity(k));
            auto sets = compute_state_sets(bp, sweep);
            auto b = check_bitwise_independence(bp, sets, Encoding::identity(k));
            add(r, "bitwise bintbp " + hk(h, k), b.pass,
                b.pass ? "pass" : std::string(1, b.set) + " at state " + std::to_string(b.state_id) + ": " +
                                      std::to_string(b.set_size) + " tuples vs product " +
                                      std::to_string(b.product_size));
        }
}

// --- 6 ----------------------------------------------------------------------

void extraction_checks(CriterionResult& r, const CriteriaOptions& opts) {
    for (int h : {2, 3}) {
        auto bp = compile_wbw_to_ntbp(generate_ro_wbw_strategy(h), h, 2);
        auto w = check_whole_extraction(bp);
        add(r, "state-config rontbp " + hk(h, 2), w.pass && !w.truncated,
            std::to_string(w.conflicts) + " conflicts, " + std::to_string(w.invalid) + " invalid over " +
                std::to_string(w.paths) + " paths" + (w.witness.empty() ? "" : "; " + w.witness));
    }
    const char* claims[] = {"value-range", "total", "start-empty", "accept-empty", "children-full", "full-children-on-change", "underestimate"};
    for (int h : {2, 4}) {
        const int k = 4;
        auto bp = compile_fractional_to_bintbp(generate_fractional_strategy(h), h, k, Encoding::identity(k));
        SweepSpec sweep;
        sweep.jobs = opts.jobs;
        auto sets = compute_state_sets(bp, sweep);
        ExtractionOptions eo;
        eo.waive_preconditions = true;
        eo.samples = kSamples;
        eo.seed = opts.seed;
        eo.jobs = opts.jobs;
        auto ex = extract_bintbp_pebbling(bp, sets, eo);
        const std::uint64_t e_size = count_hard_inputs(h, k);
        const bool enough = ex.inputs_checked >= std::min(e_size, kSamples);
        for (const char* c : claims) {
            const auto& cr = ex.claim(c);
            add(r, std::string(c) + " bintbp " + hk(h, k), enough && cr.pass,
                std::to_string(cr.violations) + " violations over " + std::to_string(ex.inputs_checked) +
                    " inputs" + (cr.witness.empty() ? "" : "; " + cr.witness));
        }
    }
}

// --- 7 ----------------------------------------------------------------------

void inputs_claim(CriterionResult& r, const CriteriaOptions& opts) {
    const int h = 2, k = 4;
    auto bp = compile_fractional_to_bintbp(generate_fractional_strategy(h), h, k, Encoding::identity(k));
    auto sets = compute_state_sets(bp, SweepSpec{});
    ExtractionOptions eo;
    eo.jobs = opts.jobs;
    auto ex = extract_bintbp_pebbling(bp, sets, eo);
    const auto& c = ex.claim("bucket-size");
    add(r, "bucket-size bintbp " + hk(h, k), c.pass && c.checked > 0,
        std::to_string(c.violations) + " violations over " + std::to_string(c.checked) + " states" +
            (c.witness.empty() ? "" : "; " + c.witness));
}

// --- 8 ----------------------------------------------------------------------

void censuses(CriterionResult& r, const CriteriaOptions& opts) {
    {
        const int h = 3, k = 2;
        auto bp = compile_wbw_to_ntbp(generate_ro_wbw_strategy(h), h, k);
        CensusOptions co;
        co.jobs = opts.jobs;
        co.seed = opts.seed;
        auto c = entropy_census(bp, Rational((h + 1) / 2), co);
        Rational want(ipow(k, (h + 1) / 2));
        add(r, "implied rontbp " + hk(h, k), c.unreached == 0 && c.implied_bound >= want,
            str(c.implied_bound) + " >= " + str(want));
        add(r, "size rontbp " + hk(h, k), Rational(c.size) >= want, std::to_string(c.size) + " >= " + str(want));
    }
    {
        const int h = 4, k = 4;
        auto bp = compile_fractional_to_bintbp(generate_fractional_strategy(h), h, k, Encoding::identity(k));
        CensusOptions co;
        co.kind = ExtractionKind::Fractional;
        co.samples = kSamples;
        co.jobs = opts.jobs;
        co.seed = opts.seed;
        auto c = entropy_census(bp, Rational(h, 2), co);
        Rational want(ipow(k, h / 2));
        add(r, "implied bintbp " + hk(h, k), c.unreached == 0 && c.implied_bound >= want,
            str(c.implied_bound) + " >= " + str(want) + " over " + std::to_string(c.inputs) + " inputs");
        add(r, "size bintbp " + hk(h, k), Rational(c.size) >= want, std::to_string(c.size) + " >= " + str(want));
    }
}

// --- 9 ----------------------------------------------------------------------

void find_input_recovery(CriterionResult& r, const CriteriaOptions&) {
    const int h = 3, k = 2;
    auto bp = compile_wbw_to_ntbp(generate_ro_wbw_strategy(h), h, k);
    auto f = find_input_sweep(bp, Rational((h + 1) / 2));
    add(r, "find-input rontbp " + hk(h, k), f.pass && f.inputs == count_hard_inputs(h, k),
        std::to_string(f.recovered) + "/" + std::to_string(f.inputs) + " recovered" +
            (f.witness.empty() ? "" : "; " + f.witness));
}

// --- 10 ---------------------------------------------------------------------

void adders(CriterionResult& r, const CriteriaOptions&) {
    for (int k : {2, 3, 4}) {
        auto a = adder_census(canonical_adder(k), 1, k);
        add(r, "adder k=" + std::to_string(k), a.correct && a.max_fe == 1 && a.states >= k,
            "max |F_e| " + std::to_string(a.max_fe) + ", states " + std::to_string(a.states) + " >= " +
                std::to_string(k));
    }
    {
        const int k = 2;
        auto a = adder_census(canonical_two_pair_adder(k), 2, k);
        add(r, "two-pair adder k=2", a.correct && a.max_fe <= static_cast<std::uint64_t>(k) && a.states >= k * k,
            "max |F_e| " + std::to_string(a.max_fe) + " <= 2, states " + std::to_string(a.states) + " >= 4");
    }
    {
        auto s = search_small_adders(2, 2);
        std::uint64_t below = 0;
        for (auto [n, c] : s.correct_by_states)
            if (n < 2) below += c;
        add(r, "no adder below 2 states k=2", below == 0,
            std::to_string(below) + " correct programs with < 2 states among " + std::to_string(s.programs));
    }
}

}  // namespace

std::vector<CriterionResult> run_criteria(const CriteriaOptions& opts, const std::vector<int>& only) {
    using Fn = void (*)(CriterionResult&, const CriteriaOptions&);
    const std::pair<const char*, Fn> table[] = {
        {"pebbling numbers", pebbling_numbers},    {"strategy generators", generators},
        {"compiler correctness", compiler_oracle}, {"size bounds", size_bounds},
        {"property checkers", property_checks},    {"extraction", extraction_checks},
        {"input buckets", inputs_claim},           {"entropy censuses", censuses},
        {"find input", find_input_recovery},       {"adder censuses", adders}};
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 10; ++id) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        CriterionResult r;
        r.id = id;
        r.title = table[id - 1].first;
        auto t0 = std::chrono::steady_clock::now();
        try {
            table[id - 1].second(r, opts);
        } catch (const std::exception& e) {
            add(r, "harness", false, std::string("exception: ") + e.what());
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace pebtep
