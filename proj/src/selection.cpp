#include "rwc/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rwc {

SelectionConfig SelectionConfig::from(const Hyperparams& hp, std::size_t n) {
    const auto bounds = size_bounds(n, hp);
    return {bounds.lower, bounds.upper, hp.selection_rate, hp.branches};
}

double count_violations(std::span<const int> cluster_sizes, double lower, double upper) {
    double total = 0.0;
    for (int s : cluster_sizes) {
        const double size = s;
        if (size > upper) {
            total += size - upper;
        } else if (size < lower) {
            total += lower - size;
        }
    }
    return total;
}

double count_violations(const ClusterAssignment& assignment, double lower, double upper) {
    const auto sizes = assignment.cluster_sizes();
    return count_violations(sizes, lower, upper);
}

std::size_t effective_size(std::size_t zero_violation, double selection_rate, int branches,
                           std::size_t ensemble_size) {
    const auto quota = static_cast<std::size_t>(
        std::max(1.0, std::round(selection_rate * static_cast<double>(branches))));
    const std::size_t s = std::max(zero_violation, quota);
    return std::clamp<std::size_t>(s, 1, std::max<std::size_t>(1, ensemble_size));
}

SelectionResult select_indices(const ClusteringEnsemble& ensemble, const SelectionConfig& cfg) {
    if (ensemble.empty()) throw std::invalid_argument("selection: empty ensemble");
    if (!(cfg.lower > 0.0 && cfg.lower < cfg.upper)) {
        throw std::invalid_argument("selection: bounds must satisfy 0 < lower < upper");
    }
    SelectionResult result;
    result.violations.reserve(ensemble.size());
    for (const auto& c : ensemble.clusterings) {
        const double v = count_violations(c, cfg.lower, cfg.upper);
        result.violations.push_back(v);
        if (v == 0.0) ++result.zero_violation;
    }
    std::vector<std::size_t> order(ensemble.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return result.violations[a] < result.violations[b];
    });
    const std::size_t s =
        effective_size(result.zero_violation, cfg.selection_rate, cfg.branches, ensemble.size());
    order.resize(s);
    result.indices = std::move(order);
    return result;
}

std::vector<ClusterAssignment> select(const ClusteringEnsemble& ensemble,
                                      const SelectionConfig& cfg) {
    const auto picked = select_indices(ensemble, cfg);
    std::vector<ClusterAssignment> out;
    out.reserve(picked.indices.size());
    for (std::size_t i : picked.indices) out.push_back(ensemble.clusterings[i]);
    return out;
}

}  // namespace rwc
