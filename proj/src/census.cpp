#include <algorithm>
#include <random>
#include <thread>

#include "pebtep/analyze.hpp"
#include "pebtep/error.hpp"

namespace pebtep {

CensusReport entropy_census(const BranchingProgram& bp, const Rational& threshold, const CensusOptions& opts) {
    if (!bp.finalized()) throw PreconditionFailed("branching program is not finalized");
    CensusReport r;
    r.kind = opts.kind;
    r.threshold = threshold;
    r.h = bp.height();
    r.k = bp.k();
    r.e_size = count_hard_inputs(bp.height(), bp.k());
    r.exhaustive = r.e_size <= opts.exhaustive_limit;
    r.inputs = r.exhaustive ? r.e_size : opts.samples;
    r.seed = r.exhaustive ? 0 : opts.seed;
    r.size = bp.size();

    std::optional<StateSets> sets;
    std::vector<StateValues> values;
    if (opts.kind == ExtractionKind::Fractional || !r.exhaustive) sets = compute_state_sets(bp);
    if (opts.kind == ExtractionKind::Fractional) values = state_pebble_values(bp, *sets);

    const int jobs = std::max(1, opts.jobs);
    struct Part {
        std::map<int, std::uint64_t> buckets;  // state index
        std::uint64_t unreached = 0;
    };
    std::vector<Part> parts(jobs);
    auto work = [&](int j) {
        auto& part = parts[j];
        const std::uint64_t lo = r.inputs * j / jobs, hi = r.inputs * (j + 1) / jobs;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            TepInstance I = [&] {
                if (r.exhaustive) return hard_input_at(bp.height(), bp.k(), idx);
                std::mt19937_64 g(opts.seed * 0x9E3779B97F4A7C15ull + idx);
                return random_hard_input(bp.height(), bp.k(), g);
            }();
            auto path = designated_path(bp, I);
            if (!path) {
                ++part.unreached;
                continue;
            }
            int hit = -1;
            if (opts.kind == ExtractionKind::Whole) {
                auto configs = whole_configs_along(bp, *path);
                for (std::size_t p = 0; p < configs.size() && hit < 0; ++p)
                    if (configs[p].total_non_root() >= threshold) hit = path->states[p];
            } else {
                for (int s : path->states)
                    if (values[s].defined && values[s].total_non_root() >= threshold) {
                        hit = s;
                        break;
                    }
            }
            if (hit < 0)
                ++part.unreached;
            else
                ++part.buckets[hit];
        }
    };
    std::vector<std::thread> threads;
    for (int j = 1; j < jobs; ++j) threads.emplace_back(work, j);
    work(0);
    for (auto& t : threads) t.join();

    std::map<int, std::uint64_t> by_index;
    for (auto& p : parts) {
        r.unreached += p.unreached;
        for (auto [s, c] : p.buckets) by_index[s] += c;
    }
    for (auto [s, c] : by_index) {
        r.buckets[bp.state(s).id] = c;
        r.max_bucket = std::max(r.max_bucket, c);
        const std::uint64_t bound = r.exhaustive ? c : sets->count_A(s);
        r.bucket_bound = std::max(r.bucket_bound, bound);
    }
    r.states_used = static_cast<int>(by_index.size());
    r.implied_bound = r.bucket_bound ? Rational(static_cast<std::int64_t>(r.e_size)) /
                                           Rational(static_cast<std::int64_t>(r.bucket_bound))
                                     : Rational(0);
    return r;
}

}  // namespace pebtep
