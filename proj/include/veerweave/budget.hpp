#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace veerweave {

inline constexpr std::int64_t kDefaultCycleBudget = 1'000'000;
inline constexpr std::int64_t kDefaultSectorBudget = 100'000;

// VEERWEAVE_BUDGET, when set to a positive integer, replaces every default budget.
inline std::int64_t configured_budget(std::int64_t default_value) {
    if (const char* env = std::getenv("VEERWEAVE_BUDGET")) {
        try {
            const long long v = std::stoll(env);
            if (v > 0) return v;
        } catch (...) {
        }
    }
    return default_value;
}

}  // namespace veerweave
