#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "pebtep/analyze.hpp"

namespace pebtep {

WholeExtractionReport check_whole_extraction(const BranchingProgram& bp, std::size_t path_cap) {
    WholeExtractionReport r;
    std::map<int, PebbleConfig> seen;
    for_each_hard_input(bp.height(), bp.k(), [&](const TepInstance& I) {
        ++r.inputs;
        auto en = enumerate_accepting_paths(bp, I, path_cap);
        r.truncated = r.truncated || en.truncated;
        for (const auto& p : en.paths) {
            ++r.paths;
            auto ex = extract_rontbp_pebbling(bp, I, p);
            auto rep = check_sequence(ex.sequence);
            if (!rep.valid) {
                if (r.witness.empty()) r.witness = "input " + std::to_string(r.inputs - 1) + ": " + rep.error;
                ++r.invalid;
            } else if (r.max_peak < rep.peak) {
                r.max_peak = rep.peak;
            }
            for (std::size_t i = 0; i < p.states.size(); ++i) {
                auto [it, fresh] = seen.emplace(p.states[i], ex.configs[i]);
                if (!fresh && !(it->second == ex.configs[i])) {
                    if (r.witness.empty())
                        r.witness = "state " + std::to_string(bp.state(p.states[i]).id) + " carries two configurations";
                    ++r.conflicts;
                }
            }
        }
    });
    r.pass = r.conflicts == 0 && r.invalid == 0;
    return r;
}

FindInputSweep find_input_sweep(const BranchingProgram& bp, const Rational& threshold) {
    FindInputSweep r;
    const int h = bp.height();
    for_each_hard_input(h, bp.k(), [&](const TepInstance& I) {
        ++r.inputs;
        auto path = designated_path(bp, I);
        if (!path) {
            ++r.unreached;
            return;
        }
        auto cfgs = whole_configs_along(bp, *path);
        std::size_t pos = 0;
        while (pos < cfgs.size() && cfgs[pos].total_non_root() < threshold) ++pos;
        if (pos == cfgs.size()) {
            ++r.unreached;
            return;
        }
        std::map<int, int> unpebbled;
        auto vals = evaluate(I);
        for (int i = 2; i < (1 << h); ++i)
            if (!cfgs[pos].is_pebbled(i)) unpebbled[i] = vals[i];
        auto found = find_inputs(bp, path->states[pos], cfgs[pos], unpebbled);
        if (found.matches.size() == 1 && found.matches[0] == I) {
            ++r.recovered;
        } else {
            if (found.matches.size() > 1) ++r.ambiguous; else ++r.wrong;
            if (r.witness.empty())
                r.witness = "input " + std::to_string(r.inputs - 1) + " at state " +
                            std::to_string(bp.state(path->states[pos]).id) + ": " +
                            std::to_string(found.matches.size()) + " matches";
        }
    });
    r.pass = r.recovered == r.inputs;
    return r;
}

}  // namespace pebtep

namespace pebtep {

TepInstance sampled_instance(int h, int k, ProblemVariant variant, std::uint64_t seed, std::uint64_t i) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + i);
    return random_instance(h, k, variant, rng);
}

OracleReport check_against_evaluate(const BranchingProgram& bp, std::uint64_t cap, std::uint64_t samples,
                                    std::uint64_t seed, int jobs) {
    OracleReport r;
    r.seed = seed;
    const int h = bp.height(), k = bp.k();
    auto count = count_instances(h, k, bp.problem());
    r.exhaustive = count && *count <= cap;
    r.instances = r.exhaustive ? *count : samples;
    jobs = std::max(1, jobs);

    std::vector<std::uint64_t> bad(jobs, 0);
    std::vector<std::optional<std::uint64_t>> first(jobs);
    auto work = [&](int j) {
        const std::uint64_t lo = r.instances * j / jobs, hi = r.instances * (j + 1) / jobs;
        for (std::uint64_t i = lo; i < hi; ++i) {
            TepInstance I = r.exhaustive ? instance_at(h, k, bp.problem(), i)
                                         : sampled_instance(h, k, bp.problem(), seed, i);
            if (solves(bp, I)) continue;
            ++bad[j];
            if (!first[j]) first[j] = i;
        }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(work, j);
    work(0);
    for (auto& t : pool) t.join();
    for (int j = 0; j < jobs; ++j) {
        r.disagreements += bad[j];
        if (!r.first_bad && first[j]) r.first_bad = first[j];
    }
    return r;
}

}  // namespace pebtep
