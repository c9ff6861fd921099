#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace pebtep {

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 26;

// Default cap on explored states / swept instances. PEBBLETEP_BUDGET
// overrides it when set to a positive integer.
inline std::uint64_t default_budget() {
    if (const char* env = std::getenv("PEBBLETEP_BUDGET")) {
        try {
            auto v = std::stoull(env);
            if (v > 0) return v;
        } catch (...) {
        }
    }
    return kDefaultBudget;
}

}  // namespace pebtep
