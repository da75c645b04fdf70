#include "smi/influence.hpp"

#include <cmath>

#include "smi/error.hpp"

namespace smi {

namespace {

bool in_structure(const SelfDefinition& self_def, const AgentId& peer) {
    return peer != self_def.agent && self_def.structure.contains(peer);
}

double confidence_at(const Observation& o, std::size_t c) {
    return o.confidence.empty() ? 1.0 : o.confidence[c];
}

void check_observation(const Observation& o, std::size_t dim) {
    if (o.values.size() != dim) {
        throw Error(ErrorKind::DimensionMismatch, "observation of '" + o.owner + "' has " +
                                                      std::to_string(o.values.size()) + " channels, expected " +
                                                      std::to_string(dim));
    }
    if (!o.confidence.empty() && o.confidence.size() != dim) {
        throw Error(ErrorKind::DimensionMismatch, "confidence vector of '" + o.owner + "' has wrong length");
    }
    for (double c : o.confidence) {
        if (!(c >= 0.0)) throw Error(ErrorKind::Range, "confidence must be >= 0");
    }
}

}  // namespace

Observation fuse_perception(const Observation& own, const std::vector<Observation>& peers,
                            const SelfDefinition& self_def) {
    const std::size_t dim = own.values.size();
    check_observation(own, dim);
    for (const auto& p : peers) check_observation(p, dim);
    if (self_def.is_individual() || self_def.salience == 0.0) return own;

    Observation fused{own.owner, own.values, own.confidence};
    for (std::size_t c = 0; c < dim; ++c) {
        double weight = confidence_at(own, c);
        double sum = weight * own.values[c];
        for (const auto& p : peers) {
            if (!in_structure(self_def, p.owner)) continue;
            const double w = self_def.salience * confidence_at(p, c);
            weight += w;
            sum += w * p.values[c];
        }
        if (weight > 0.0) fused.values[c] = sum / weight;
    }
    return fused;
}

ActionScores weight_decisions(const ActionScores& own,
                              const std::vector<std::pair<AgentId, ActionScores>>& peer_scores,
                              const SelfDefinition& self_def) {
    if (own.scores.empty()) throw Error(ErrorKind::ActionSetMismatch, "action set is empty");
    for (const auto& [peer, s] : peer_scores) {
        if (s.scores.size() != own.scores.size()) {
            throw Error(ErrorKind::ActionSetMismatch, "scores from '" + peer + "' cover " +
                                                          std::to_string(s.scores.size()) + " actions, expected " +
                                                          std::to_string(own.scores.size()));
        }
    }
    if (self_def.is_individual()) return own;

    ActionScores blended = own;
    std::size_t count = 0;
    for (const auto& [peer, s] : peer_scores) {
        if (!in_structure(self_def, peer)) continue;
        ++count;
        for (std::size_t a = 0; a < blended.scores.size(); ++a) blended.scores[a] += self_def.salience * s.scores[a];
    }
    if (count == 0 || self_def.salience == 0.0) return own;
    const double norm = 1.0 + self_def.salience * static_cast<double>(count);
    for (auto& v : blended.scores) v /= norm;
    return blended;
}

std::vector<double> shape_utility(const UtilitySpec& spec, const SelfDefinition& self_def) {
    if (self_def.is_individual()) return spec.self_utility;
    const std::size_t n = spec.self_utility.size();
    std::vector<double> social(n, 0.0);
    for (const auto& [peer, u] : spec.peer_utilities) {
        if (!in_structure(self_def, peer)) continue;
        if (u.size() != n) throw Error(ErrorKind::ActionSetMismatch, "peer utility of '" + peer + "' has wrong length");
        for (std::size_t a = 0; a < n; ++a) social[a] += u[a];
    }
    if (!spec.structure_utility.empty()) {
        if (spec.structure_utility.size() != n) {
            throw Error(ErrorKind::ActionSetMismatch, "structure utility has wrong length");
        }
        for (std::size_t a = 0; a < n; ++a) social[a] += spec.structure_utility[a];
    }
    std::vector<double> shaped(n);
    for (std::size_t a = 0; a < n; ++a) shaped[a] = spec.self_utility[a] + self_def.salience * social[a];
    return shaped;
}

std::size_t argmax(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

}  // namespace smi
