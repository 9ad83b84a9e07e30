#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace roofline::testing {

struct PropertyResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure;  // empty when every case held

    bool ok() const { return failures == 0 && cases > 0; }
};

// Each suite draws `cases` inputs from its own mt19937_64 seeded from `seed`.
std::vector<PropertyResult> run_properties(std::uint64_t seed, int cases);

}  // namespace roofline::testing
