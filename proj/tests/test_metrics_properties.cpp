#include <doctest.h>

#include "property_suite.hpp"

TEST_CASE("metric invariants hold on randomised inputs") {
    for (const auto& p : props::metric_properties()) {
        const auto r = p.run(20240901, 1000);
        INFO(r.name << ": " << r.first_failure);
        CHECK(r.ok());
    }
}
