#include "smi/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "smi/error.hpp"

namespace smi {

AgentFeatureMatrix::AgentFeatureMatrix(std::vector<AgentId> agent_ids, std::vector<std::vector<double>> features)
    : ids_(std::move(agent_ids)), rows_(std::move(features)) {
    if (ids_.size() != rows_.size()) {
        throw Error(ErrorKind::DimensionMismatch, "feature matrix has " + std::to_string(rows_.size()) +
                                                      " rows for " + std::to_string(ids_.size()) + " agents");
    }
    if (!rows_.empty()) dim_ = rows_.front().size();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i].size() != dim_) {
            throw Error(ErrorKind::DimensionMismatch, "feature row for '" + ids_[i] + "' has dimension " +
                                                          std::to_string(rows_[i].size()) + ", expected " +
                                                          std::to_string(dim_));
        }
        for (double v : rows_[i]) {
            if (!std::isfinite(v)) throw Error(ErrorKind::Range, "non-finite feature for '" + ids_[i] + "'");
        }
    }
    if (!rows_.empty() && dim_ == 0) throw Error(ErrorKind::DimensionMismatch, "feature dimension must be >= 1");
    std::vector<AgentId> sorted = ids_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorKind::InvalidPartition, "duplicate agent id in feature matrix");
    }
}

std::optional<std::size_t> AgentFeatureMatrix::index_of(const AgentId& id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
}

AgentFeatureMatrix AgentFeatureMatrix::scaled(double k) const {
    auto rows = rows_;
    for (auto& r : rows)
        for (auto& v : r) v *= k;
    return AgentFeatureMatrix(ids_, std::move(rows));
}

AgentFeatureMatrix extract_features(std::span<const AgentId> present, std::span<const AgentObservation> world_view,
                                    const FeatureSchema& schema) {
    const double pos_w = schema.weights.position / (schema.position_scale > 0 ? schema.position_scale : 1.0);
    std::vector<std::vector<double>> rows;
    rows.reserve(present.size());
    for (const auto& id : present) {
        auto it = std::find_if(world_view.begin(), world_view.end(),
                               [&](const AgentObservation& o) { return o.id == id; });
        if (it == world_view.end()) {
            throw Error(ErrorKind::MissingAgent, "no observation record for agent '" + id + "'");
        }
        std::vector<double> row(schema.dimension(), 0.0);
        row[0] = pos_w * it->position.x;
        row[1] = pos_w * it->position.y;
        if (it->task && *it->task < schema.task_count) row[2 + *it->task] = schema.weights.task;
        // Histogram enters as fractions so long histories don't dominate position.
        double total = std::accumulate(it->action_counts.begin(), it->action_counts.end(), 0.0);
        if (total > 0) {
            const std::size_t bins = std::min(schema.action_bins, it->action_counts.size());
            for (std::size_t b = 0; b < bins; ++b) {
                row[2 + schema.task_count + b] = schema.weights.actions * it->action_counts[b] / total;
            }
        }
        rows.push_back(std::move(row));
    }
    return AgentFeatureMatrix(std::vector<AgentId>(present.begin(), present.end()), std::move(rows));
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

MetaContrastScore::MetaContrastScore(double v) : value_(v) {
    if (!(v >= 0.0)) throw Error(ErrorKind::Range, "meta-contrast score must be >= 0");
}

double MetaContrastScore::squashed() const noexcept {
    if (is_max()) return 1.0;
    return value_ / (1.0 + value_);
}

AgenticStructure AgenticStructure::from_members(std::vector<AgentId> members) {
    if (members.empty()) throw Error(ErrorKind::InvalidPartition, "agentic structure must have members");
    std::sort(members.begin(), members.end());
    std::string id;
    for (const auto& m : members) {
        if (!id.empty()) id += '+';
        id += m;
    }
    return AgenticStructure{std::move(id), std::move(members)};
}

bool AgenticStructure::contains(const AgentId& agent) const {
    return std::binary_search(members.begin(), members.end(), agent);
}

namespace {

// category label per feature row; throws on duplicates or gaps
std::vector<std::size_t> labels_for(const Partition& partition, const AgentFeatureMatrix& features) {
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(features.size(), unset);
    for (std::size_t c = 0; c < partition.size(); ++c) {
        if (partition[c].members.empty()) throw Error(ErrorKind::InvalidPartition, "empty structure in partition");
        for (const auto& m : partition[c].members) {
            auto idx = features.index_of(m);
            if (!idx) throw Error(ErrorKind::InvalidPartition, "agent '" + m + "' is not in the feature matrix");
            if (label[*idx] != unset) throw Error(ErrorKind::InvalidPartition, "agent '" + m + "' appears twice");
            label[*idx] = c;
        }
    }
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (label[i] == unset) {
            throw Error(ErrorKind::InvalidPartition, "agent '" + features.agent_ids()[i] + "' is missing");
        }
    }
    return label;
}

}  // namespace

MetaContrastScore meta_contrast_ratio(const Partition& partition, const AgentFeatureMatrix& features) {
    const auto label = labels_for(partition, features);
    if (features.size() < 2) return MetaContrastScore::neutral();

    double within = 0.0, between = 0.0;
    std::size_t n_within = 0, n_between = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        for (std::size_t j = i + 1; j < features.size(); ++j) {
            const double d = euclidean(features.row(i), features.row(j));
            if (label[i] == label[j]) {
                within += d;
                ++n_within;
            } else {
                between += d;
                ++n_between;
            }
        }
    }
    if (n_within == 0 || n_between == 0) return MetaContrastScore::neutral();
    const double w = within / static_cast<double>(n_within);
    const double b = between / static_cast<double>(n_between);
    if (w == 0.0) return b > 0.0 ? MetaContrastScore::max() : MetaContrastScore::neutral();
    return MetaContrastScore(b / w);
}

namespace {

Partition partition_from_roots(const AgentFeatureMatrix& features, const std::vector<std::size_t>& root) {
    std::map<std::size_t, std::vector<AgentId>> groups;
    for (std::size_t i = 0; i < root.size(); ++i) groups[root[i]].push_back(features.agent_ids()[i]);
    Partition p;
    for (auto& [_, members] : groups) p.push_back(AgenticStructure::from_members(std::move(members)));
    std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.members.front() < b.members.front(); });
    return p;
}

}  // namespace

std::vector<Partition> merge_tree_cuts(const AgentFeatureMatrix& features) {
    const std::size_t n = features.size();
    const auto& ids = features.agent_ids();

    // Kruskal order over agent pairs is exactly single linkage.
    struct Edge {
        double dist;
        const AgentId* lo;
        const AgentId* hi;
        std::size_t i, j;
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool swap = ids[j] < ids[i];
            edges.push_back({euclidean(features.row(i), features.row(j)), swap ? &ids[j] : &ids[i],
                             swap ? &ids[i] : &ids[j], i, j});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.dist, *a.lo, *a.hi) < std::tie(b.dist, *b.lo, *b.hi);
    });

    std::vector<std::size_t> root(n);
    std::iota(root.begin(), root.end(), std::size_t{0});
    std::vector<Partition> cuts;
    cuts.push_back(partition_from_roots(features, root));
    for (const auto& e : edges) {
        const std::size_t ri = root[e.i], rj = root[e.j];
        if (ri == rj) continue;
        for (auto& r : root)
            if (r == rj) r = ri;
        cuts.push_back(partition_from_roots(features, root));
        if (cuts.back().size() == 1) break;
    }
    return cuts;
}

SocialLandscape::SocialLandscape(AgentId observer, std::vector<AgentId> agents, std::vector<LandscapeLevel> levels)
    : observer_(std::move(observer)), agents_(std::move(agents)), levels_(std::move(levels)) {}

bool SocialLandscape::covers(const AgentId& agent) const {
    return std::find(agents_.begin(), agents_.end(), agent) != agents_.end();
}

const AgenticStructure* SocialLandscape::structure_of(std::size_t level, const AgentId& agent) const {
    for (const auto& s : levels_.at(level).structures)
        if (s.contains(agent)) return &s;
    return nullptr;
}

std::optional<std::vector<AgentId>> SocialLandscape::members_of(const std::string& structure_id) const {
    for (const auto& level : levels_)
        for (const auto& s : level.structures)
            if (s.id == structure_id) return s.members;
    return std::nullopt;
}

std::optional<LandscapeLevel> SocialLandscape::subgroup_level() const {
    for (const auto& level : levels_)
        if (level.kind == LevelKind::Subgroups) return level;
    return std::nullopt;
}

SocialLandscape build_social_landscape(const AgentId& observer, const AgentFeatureMatrix& features,
                                       const LandscapeParams& params) {
    if (features.size() == 0) throw Error(ErrorKind::EmptyContext, "no agents present");
    if (!features.index_of(observer)) {
        throw Error(ErrorKind::MissingAgent, "observer '" + observer + "' is not among the present agents");
    }

    auto cuts = merge_tree_cuts(features);
    std::vector<LandscapeLevel> levels;
    levels.push_back({LevelKind::Singletons, cuts.front(), MetaContrastScore::neutral()});
    if (features.size() == 1) return SocialLandscape(observer, features.agent_ids(), std::move(levels));

    // Intermediate cuts sit strictly between singletons and the whole group.
    std::optional<std::size_t> best;
    MetaContrastScore best_fit;
    for (std::size_t c = 1; c + 1 < cuts.size(); ++c) {
        const auto fit = meta_contrast_ratio(cuts[c], features);
        if (!best || fit > best_fit) {
            best = c;
            best_fit = fit;
        }
    }
    if (best && best_fit.value() > params.fit_threshold) {
        levels.push_back({LevelKind::Subgroups, cuts[*best], best_fit});
    }
    levels.push_back({LevelKind::WholeGroup, cuts.back(), MetaContrastScore::neutral()});
    return SocialLandscape(observer, features.agent_ids(), std::move(levels));
}

}  // namespace smi
