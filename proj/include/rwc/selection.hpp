#pragma once

// Cluster-size filtering of the raw ensemble.

#include <cstddef>
#include <span>
#include <vector>

#include "rwc/core_data.hpp"

namespace rwc {

struct SelectionConfig {
    double lower;  // lr
    double upper;  // ur
    double selection_rate;
    int branches;

    static SelectionConfig from(const Hyperparams& hp, std::size_t n);
};

/// Total amount by which cluster sizes fall below `lower` or exceed `upper`.
double count_violations(std::span<const int> cluster_sizes, double lower, double upper);

/// Same, over every declared cluster of `assignment` (empty clusters included).
double count_violations(const ClusterAssignment& assignment, double lower, double upper);

struct SelectionResult {
    std::vector<std::size_t> indices;  // selected ensemble positions, best first
    std::vector<double> violations;    // per ensemble member
    std::size_t zero_violation = 0;    // zv
};

/// max(zv, round(sr * B)) clamped to [1, ensemble_size].
std::size_t effective_size(std::size_t zero_violation, double selection_rate, int branches,
                           std::size_t ensemble_size);

SelectionResult select_indices(const ClusteringEnsemble& ensemble, const SelectionConfig& cfg);

/// The surviving clusterings, lowest violations first; ties keep branch order.
std::vector<ClusterAssignment> select(const ClusteringEnsemble& ensemble,
                                      const SelectionConfig& cfg);

}  // namespace rwc
