#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rwc/core_data.hpp"

namespace rwc {

/// Fraction of instance pairs on which two partitions agree, from the
/// contingency table in O(n + ka * kb).
double rand_index(const ClusterAssignment& a, const ClusterAssignment& b);

/// Minimum ensemble size -2 ln(alpha) / gamma^2 for the majority of members to
/// co-cluster two same-class instances with confidence 1 - alpha, when a
/// gamma fraction of members is relevant (two clusters).
double ensemble_size_lower_bound(double alpha, double gamma);

/// Within-cluster sum of squared distances to cluster means.
double wcss(const Matrix& x, const ClusterAssignment& assignment);

struct ElbowCurve {
    std::vector<int> ks;
    std::vector<double> wcss;
};

/// Runs the full pipeline once per k and scores each consensus by WCSS in a
/// shared feature space: the features of up to 16 branches, drawn without
/// replacement from [0, B) by the run seed, concatenated column-wise. The
/// value reported is that WCSS divided by the number of branches used
/// (the mean per-branch WCSS).
ElbowCurve elbow_curve(const TimeSeriesDataset& dataset, const Hyperparams& hp,
                       const std::vector<int>& k_range, int jobs = 1);

/// Discrete second differences w[i-1] - 2 w[i] + w[i+1] for interior points,
/// paired with their k.
std::vector<std::pair<int, double>> second_differences(const ElbowCurve& curve);

/// k at the largest second difference; nullopt with fewer than three points.
std::optional<int> elbow_k(const ElbowCurve& curve);

}  // namespace rwc
