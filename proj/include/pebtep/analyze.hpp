#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pebtep/bp.hpp"
#include "pebtep/budget.hpp"
#include "pebtep/compile.hpp"
#include "pebtep/mdd.hpp"
#include "pebtep/pebbling.hpp"

namespace pebtep {

// --- state sets -------------------------------------------------------------

enum class SweepKind { E, AllInstances, Sample };

std::string_view to_string(SweepKind s);
SweepKind parse_sweep_kind(std::string_view s);

struct SweepSpec {
    SweepKind kind = SweepKind::E;
    std::uint64_t samples = 100000;  // Sample only
    std::uint64_t seed = 1;          // Sample only
    std::uint64_t cap = default_budget();
    // Value domain for E sweeps; 0 means k. A smaller power of two restricts
    // E to inputs over [domain].
    int domain = 0;
    int jobs = 1;
};

// F_s and A_s for every state, as sets of tuples (v_2, ..., v_{N+1}).
// E sweeps are exact and symbolic; the other sweeps collect the evaluated
// tuples of the instances they simulate.
struct StateSets {
    SweepKind sweep = SweepKind::E;
    std::uint64_t sweep_size = 0;
    std::uint64_t seed = 0;
    int domain = 0;
    std::shared_ptr<Mdd> mdd;
    std::vector<Mdd::Id> F, A;  // indexed by state index

    int var_of(int node) const { return node - 2; }
    std::uint64_t count_F(int s) const { return mdd->count(F[s]); }
    std::uint64_t count_A(int s) const { return mdd->count(A[s]); }
    std::vector<int> proj_F(int s, int node) const { return mdd->projection(F[s], var_of(node)); }
    std::vector<int> proj_A(int s, int node) const { return mdd->projection(A[s], var_of(node)); }
};

StateSets compute_state_sets(const BranchingProgram& bp, const SweepSpec& sweep = {});

// --- property checks --------------------------------------------------------

struct ThriftyViolation {
    int state_id = 0;
    std::vector<int> values;  // non-root node values of the witness input
    ComputationPath path;     // accepting path through the state (E sweeps)
};

struct ThriftyReport {
    bool pass = true;
    SweepKind sweep = SweepKind::E;
    std::uint64_t inputs = 0;
    std::vector<ThriftyViolation> violations;
};

// Every internal-node query on an accepting path uses the children's true
// values.
ThriftyReport check_thrifty(const BranchingProgram& bp, const StateSets& sets, std::size_t max_witnesses = 8);

struct ReadOnceReport {
    bool pass = true;
    int node = 0;
    int first_state_id = -1;  // start ~> first ~> second ~> accept both query node
    int second_state_id = -1;
};

ReadOnceReport check_syntactic_read_once(const BranchingProgram& bp);

// Whether a set of values is the product of its per-bit projections under phi.
bool is_bitwise_product(const std::vector<int>& values, const Encoding& phi);

enum class EncodingMode { Given, Search };

struct BitwiseReport {
    bool pass = true;
    Encoding encoding;
    SweepKind sweep = SweepKind::E;
    std::string warning;
    // First failure under the reported encoding.
    int state_id = -1;
    char set = 0;     // 'F' or 'A'
    int node = 0;     // 0: the set is not the product of its projections
    std::uint64_t set_size = 0;
    std::uint64_t product_size = 0;
};

// Product structure of F_s and A_s at every state. In Search mode every
// bijection is tried when l <= 2 (identity only beyond, with a warning).
BitwiseReport check_bitwise_independence(const BranchingProgram& bp, const StateSets& sets,
                                         const Encoding& phi, EncodingMode mode = EncodingMode::Given);

// --- whole pebbling along a path -----------------------------------------------

struct PathPebbling {
    std::vector<PebbleConfig> configs;  // one per state of the path
    PebbleSequence sequence;            // configs as moves, with the root step
};

// Whole black-white configurations along an accepting path. A node is black
// while its value has been read and its parent still has to be queried, white
// while its parent used a value for it that is still to be checked. The root
// is pebbled and unpebbled right after its last query.
PathPebbling extract_rontbp_pebbling(const BranchingProgram& bp, const TepInstance& instance,
                                     const ComputationPath& path);

// Any accepting path of instance through state s (nullopt when none).
std::optional<ComputationPath> accepting_path_through(const BranchingProgram& bp, const TepInstance& instance,
                                                      int state);

// Whole extraction over every accepting path of every member of E: each
// state must carry one configuration and every extracted sequence must be a
// valid pebbling.
struct WholeExtractionReport {
    bool pass = true;
    std::uint64_t inputs = 0, paths = 0;
    std::uint64_t conflicts = 0;       // states seen with two configurations
    std::uint64_t invalid = 0;         // extracted sequences rejected
    bool truncated = false;            // path enumeration hit its cap
    Rational max_peak;
    std::string witness;
};

WholeExtractionReport check_whole_extraction(const BranchingProgram& bp, std::size_t path_cap = 1000);

// Candidate completions of the pebbled nodes and the unique member of E that
// is consistent with the unpebbled values and accepts through s.
struct FindInputResult {
    std::vector<std::vector<int>> candidates;  // pebbled-node assignments found
    std::vector<TepInstance> matches;          // distinct, in candidate order
};

// unpebbled[node] holds the value of every node left unpebbled by config.
FindInputResult find_inputs(const BranchingProgram& bp, int state, const PebbleConfig& config,
                            const std::map<int, int>& unpebbled, std::uint64_t step_cap = default_budget());

// Throws PreconditionFailed when no input matches.
TepInstance find_input(const BranchingProgram& bp, int state, const PebbleConfig& config,
                       const std::map<int, int>& unpebbled);

// --- fractional pebbling from state sets ----------------------------------------

struct StateValues {
    bool defined = false;  // A_s non-empty and projection sizes powers of two
    std::vector<Rational> black, white;  // indexed by node, root slot unused
    Rational total_non_root() const;
};

// b(i,s) = 1 - log_k |proj(F_s,i)|, w(i,s) = log_k(|proj(F_s,i)| / |proj(A_s,i)|).
std::vector<StateValues> state_pebble_values(const BranchingProgram& bp, const StateSets& sets);

struct ClaimResult {
    std::string name;
    bool pass = true;
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    std::string witness;  // first violation
};

struct CriticalPebbling {
    ComputationPath path;
    std::vector<int> critical;           // positions on the path, ascending
    std::vector<PebbleConfig> configs;   // one per critical position
    PebbleSequence sequence;             // with the root step
    std::vector<std::string> issues;     // construction steps that were impossible
};

struct FractionalExtraction {
    std::vector<StateValues> per_state;
    // per state: powers-of-two, value-range, total, start-empty, accept-empty,
    // bucket-size; per input path: children-full, changes-at-critical,
    // underestimate, underestimate-critical, valid-pebbling
    std::vector<ClaimResult> claims;
    std::uint64_t inputs_checked = 0;
    bool preconditions_met = true;
    std::string precondition_note;
    std::vector<CriticalPebbling> samples;  // kept for the first few inputs

    const ClaimResult& claim(std::string_view name) const;
    bool all_pass() const;
};

struct ExtractionOptions {
    // Run even when the bitwise / thrifty preconditions fail; the outcome
    // is reported in preconditions_met.
    bool waive_preconditions = false;
    // Inputs for the per-path claims: all of E when |E| <= exhaustive_limit,
    // otherwise `samples` uniform members of E.
    std::uint64_t exhaustive_limit = 1 << 16;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    std::size_t keep_paths = 4;
    int jobs = 1;
};

FractionalExtraction extract_bintbp_pebbling(const BranchingProgram& bp, const StateSets& sets,
                                             const ExtractionOptions& opts = {});

// Critical states and the underestimating pebbling along one accepting path.
CriticalPebbling critical_pebbling(const BranchingProgram& bp, const std::vector<StateValues>& values,
                                   const ComputationPath& path);

// --- censuses -------------------------------------------------------------------

enum class ExtractionKind { Whole, Fractional };

struct CensusOptions {
    ExtractionKind kind = ExtractionKind::Whole;
    std::uint64_t exhaustive_limit = 1 << 20;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    int jobs = 1;
};

struct CensusReport {
    ExtractionKind kind = ExtractionKind::Whole;
    Rational threshold;
    int h = 0, k = 0;
    std::uint64_t e_size = 0;
    std::uint64_t inputs = 0;     // inputs distributed
    bool exhaustive = true;
    std::uint64_t seed = 0;
    std::uint64_t unreached = 0;  // inputs never reaching the threshold
    std::map<int, std::uint64_t> buckets;  // state id -> inputs mapped to it
    std::uint64_t max_bucket = 0;
    // Exhaustive: max_bucket. Sampled: max |A_s| over bottleneck states hit.
    std::uint64_t bucket_bound = 0;
    Rational implied_bound;       // |E| / bucket_bound
    int size = 0;
    int states_used = 0;
};

CensusReport entropy_census(const BranchingProgram& bp, const Rational& threshold, const CensusOptions& opts = {});

// FindInput at each input's bottleneck state (first state of its designated
// path whose non-root pebble total reaches threshold) over all of E.
struct FindInputSweep {
    bool pass = true;
    std::uint64_t inputs = 0, recovered = 0, ambiguous = 0, wrong = 0, unreached = 0;
    std::string witness;
};

FindInputSweep find_input_sweep(const BranchingProgram& bp, const Rational& threshold);

// solves() against evaluate() over all instances (when count <= cap) or
// over `samples` uniform instances. Sample i is drawn from its own stream,
// so results do not depend on jobs.
struct OracleReport {
    bool exhaustive = true;
    std::uint64_t instances = 0, disagreements = 0;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> first_bad;  // instance index / sample index
};

OracleReport check_against_evaluate(const BranchingProgram& bp, std::uint64_t cap, std::uint64_t samples,
                                    std::uint64_t seed, int jobs);

// Instance used for sample i of a sampled sweep.
TepInstance sampled_instance(int h, int k, ProblemVariant variant, std::uint64_t seed, std::uint64_t i);

// Whole configuration at every state of a path (the extraction used by
// entropy_census in Whole mode; defined for repeated queries too).
std::vector<PebbleConfig> whole_configs_along(const BranchingProgram& bp, const ComputationPath& path);

struct AdderReport {
    int pairs = 1;
    int k = 0;
    bool correct = true;
    std::uint64_t last_edges = 0;
    std::uint64_t max_fe = 0;
    std::uint64_t fe_limit = 0;   // 1 for one pair, k for two pairs
    bool fe_ok = true;
    std::uint64_t edge_lower_bound = 0;   // k^2 or k^3
    int states = 0;
    std::uint64_t state_lower_bound = 0;  // k or k^2
    bool states_ok = true;
};

// Program over leaves (u,v) of a height-2 tree or (u,v,w,x) of a height-3
// tree computing u+v mod k, or (u+v mod k)*k + (w+x mod k). Throws
// PreconditionFailed when the program is incorrect.
AdderReport adder_census(const BranchingProgram& bp, int pairs, int k);

struct AdderSearchResult {
    int k = 2;
    int max_states = 0;
    std::uint64_t programs = 0;
    std::map<int, std::uint64_t> correct_by_states;  // states -> correct programs found
    std::optional<int> min_states;
};

// Every deterministic program with at most max_states query states reading
// u and v (k-way edges to later states or to final outputs).
AdderSearchResult search_small_adders(int k, int max_states);

}  // namespace pebtep
