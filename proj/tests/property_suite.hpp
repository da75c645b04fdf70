#pragma once

// Randomised invariant checks for the metrics, shared by the unit tests and
// the acceptance runner. Each check draws `cases` random inputs from a
// seeded generator and counts violations.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace props {

struct Result {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure;

    bool ok() const { return failures == 0 && cases > 0; }
};

using Check = std::function<Result(std::uint64_t seed, int cases)>;

struct Named {
    std::string name;
    Check run;
};

/// All metric properties, in a fixed order.
const std::vector<Named>& metric_properties();

}  // namespace props
