#pragma once

// Social influence of the self-defining structure on perception, decisions
// and utilities. Every operation is the identity on the agent's own inputs
// when the self-definition is individual, and inputs from agents outside the
// self-defining structure are ignored.

#include <utility>
#include <vector>

#include "smi/landscape.hpp"
#include "smi/self_relevance.hpp"

namespace smi {

struct Observation {
    AgentId owner;
    std::vector<double> values;
    std::vector<double> confidence;  // per channel, >= 0; empty means all 1
};

struct ActionScores {
    std::vector<double> scores;  // indexed by the engine's fixed action order
};

struct UtilitySpec {
    std::vector<double> self_utility;
    std::vector<std::pair<AgentId, std::vector<double>>> peer_utilities;
    std::vector<double> structure_utility;  // empty means zero
};

/// Confidence-weighted channel mean with own weight 1 and peer weight = salience.
Observation fuse_perception(const Observation& own, const std::vector<Observation>& peers,
                            const SelfDefinition& self_def);

/// (own + salience * sum(peers)) / (1 + salience * |peers|)
ActionScores weight_decisions(const ActionScores& own,
                              const std::vector<std::pair<AgentId, ActionScores>>& peer_scores,
                              const SelfDefinition& self_def);

/// U'(a) = self(a) + salience * (sum_q peer(q, a) + structure(a))
std::vector<double> shape_utility(const UtilitySpec& spec, const SelfDefinition& self_def);

/// First index of the maximum; the fixed action order breaks ties.
std::size_t argmax(const std::vector<double>& values);

}  // namespace smi
