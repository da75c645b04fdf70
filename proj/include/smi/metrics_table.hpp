#pragma once

// Batch metric input: one context per CSV row.
//
//   id,kind,sma,sma_1,so_1,go_1,sma_2,so_2,go_2,...
//
// kind=individual: `sma` is the target's ability, each triplet is one other
//   person with sma_k left blank, so_k = SSI and go_k = GA.
// kind=group: `sma` is blank, each triplet is one member (SMA, GI, SIGA).
// Trailing triplets may be blank; a blank triplet cannot precede a filled one.

#include <istream>
#include <string>
#include <variant>
#include <vector>

#include "smi/metrics.hpp"

namespace smi {

struct MetricRow {
    std::string id;
    std::variant<IndividualContext, GroupContext> context;
};

/// Throws ParseError (row/column) or RangeError (naming the bound).
std::vector<MetricRow> parse_metric_table(std::istream& in);

struct MetricResult {
    std::string id;
    std::string kind;  // "ISMI" or "GSMI"
    double value = 0.0;
};

std::vector<MetricResult> compute_metric_table(const std::vector<MetricRow>& rows);

enum class OutputFormat { Table, Csv, JsonLines };

std::string format_metric_results(const std::vector<MetricResult>& results, OutputFormat format);

}  // namespace smi
