#pragma once

// Parameter sweeps: cross product of parameter values and seeds, one
// evaluated episode per cell, persisted as a single CSV that is rewritten
// atomically after each cell so an interrupted sweep can resume.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "smi/scenario.hpp"

namespace smi {

struct SweepParameter {
    std::string name;  // see sweep_parameter_names()
    std::vector<std::string> values;
};

struct SweepSpec {
    ScenarioConfig base;
    std::vector<SweepParameter> parameters;
    std::vector<std::uint64_t> seeds;
    unsigned jobs = 1;
};

struct SweepCell {
    std::vector<std::string> values;  // one per parameter
    std::uint64_t seed = 0;
};

struct SweepOutcome {
    std::size_t total = 0;
    std::size_t skipped = 0;  // already complete in the existing file
    std::size_t ran = 0;
    std::size_t failed = 0;
};

const std::vector<std::string>& sweep_parameter_names();

/// Throws ConfigInvalid for unknown parameters or unparseable values.
ScenarioConfig apply_parameter(ScenarioConfig config, const std::string& name, const std::string& value);

std::vector<SweepCell> sweep_cells(const SweepSpec& spec);

std::vector<std::string> sweep_header(const SweepSpec& spec);

/// `stop_after` (tests only) aborts after that many newly run cells, emulating an interruption.
SweepOutcome run_sweep(const SweepSpec& spec, const std::filesystem::path& out_csv,
                       std::size_t stop_after = static_cast<std::size_t>(-1));

/// "1,2,3" or "1..5"
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
/// "name=v1,v2,v3"
SweepParameter parse_sweep_parameter(const std::string& text);

/// Write-then-rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace smi
