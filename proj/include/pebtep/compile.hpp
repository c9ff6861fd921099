#pragma once

#include <cstdint>
#include <vector>

#include "pebtep/bp.hpp"
#include "pebtep/budget.hpp"
#include "pebtep/pebbling.hpp"

namespace pebtep {

// Bijection phi: [k] -> l-bit strings, stored as code[v]. k = 2^l.
struct Encoding {
    int bits = 1;
    std::vector<int> code;

    static Encoding identity(int k);
    int k() const { return static_cast<int>(code.size()); }
    // Inverse table; throws InvalidArgument when code is not a bijection.
    std::vector<int> decode_table() const;
    void validate() const;
};

struct CompileOptions {
    // Keep the unlabelled guess/forget states instead of eliminating them.
    bool keep_guess_states = false;
    ProblemVariant problem = ProblemVariant::BT;
    std::uint64_t state_cap = default_budget();
};

// Layered tag construction for a read-once whole black-white strategy.
BranchingProgram compile_wbw_to_ntbp(const PebbleSequence& seq, int h, int k, const CompileOptions& opts = {});

// Deterministic thrifty program that follows a black pebbling.
BranchingProgram compile_black_to_dtbp(const PebbleSequence& seq, int h, int k, const CompileOptions& opts = {});

// Bit-tagged construction for a fractional strategy; k must be 2^l and every
// amount a multiple of 1/l.
BranchingProgram compile_fractional_to_bintbp(const PebbleSequence& seq, int h, int k, const Encoding& phi,
                                              const CompileOptions& opts = {});

// Number of layers (configurations) the compilers build for a sequence.
inline int layer_count(const PebbleSequence& seq) { return static_cast<int>(seq.moves.size()) + 1; }

// Throws PreconditionFailed unless table (k*k, row-major) is a group
// operation on [k]. Returns the identity element.
int check_group(int k, const std::vector<int>& table);

// Cyclic group Z_k.
std::vector<int> cyclic_group_table(int k);

// Layered deterministic FT program for the single-function tree whose
// internal nodes all compute the group operation. With fixed = true the
// operation is built in; otherwise each product step queries f_1.
BranchingProgram compile_group_sft(int h, int k, const std::vector<int>& table, bool fixed);

// Reads u = l_2, v = l_3 and outputs u + v mod k.
BranchingProgram canonical_adder(int k);

// Reads u, v, w, x = l_4..l_7 and outputs s*k + t with s = u+v, t = w+x
// (mod k); the program's output range is k^2.
BranchingProgram canonical_two_pair_adder(int k);

}  // namespace pebtep
