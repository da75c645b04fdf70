#pragma once

// Regression suite over the thirteen published worked examples of the
// individual and group metrics.

#include <functional>
#include <string>
#include <vector>

#include "smi/metrics.hpp"

namespace smi {

enum class ExampleStatus { Match, KnownDiscrepancy, Fail };

std::string_view to_string(ExampleStatus s) noexcept;

struct ExampleRecord {
    std::string id;      // WE1..WE4, A1..A4, B1..B5
    std::string title;
    std::string inputs;  // human-readable input listing
    double computed = 0.0;
    double exact = 0.0;        // hand-derived product
    std::string reference;     // value as printed in the source
    std::string presented;     // computed, to 2 significant figures
    ExampleStatus status = ExampleStatus::Fail;
    std::string diagnostic;
};

struct ValidationReport {
    std::vector<ExampleRecord> examples;
    bool id_checksum_ok = false;

    std::size_t count(ExampleStatus s) const;
    /// True when nothing failed and the example set is intact.
    bool ok() const;
};

struct MetricFunctions {
    std::function<double(const IndividualContext&)> individual = [](const IndividualContext& c) { return ismi(c); };
    std::function<double(const GroupContext&)> group = [](const GroupContext& c) { return gsmi(c); };
};

ValidationReport run_validation(const MetricFunctions& fns = {});

/// FNV-1a of the comma-joined example ids; pinned in the implementation.
std::uint64_t example_id_checksum(const std::vector<std::string>& ids);

}  // namespace smi
