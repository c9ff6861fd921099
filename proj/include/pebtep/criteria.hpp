#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pebtep {

// One measured comparison inside a criterion.
struct CriterionCheck {
    std::string name;
    bool pass = false;
    std::string detail;  // measured vs required
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<CriterionCheck> checks;
    double seconds = 0;
    bool pass() const;
};

struct CriteriaOptions {
    int jobs = 1;
    std::uint64_t seed = 1;
};

// Runs the fixed acceptance grid (criteria 1..10, or only those listed).
std::vector<CriterionResult> run_criteria(const CriteriaOptions& opts, const std::vector<int>& only = {});

}  // namespace pebtep
