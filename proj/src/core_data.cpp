#include "rwc/core_data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rwc {

TimeSeriesDataset::TimeSeriesDataset(std::string name, std::vector<TimeSeries> series,
                                     std::optional<std::vector<int>> labels)
    : name_(std::move(name)), series_(std::move(series)), labels_(std::move(labels)) {
    const std::size_t m = length();
    for (std::size_t i = 0; i < series_.size(); ++i) {
        const auto& s = series_[i].values;
        if (s.empty()) {
            throw std::invalid_argument("series " + std::to_string(i) + " is empty");
        }
        if (s.size() != m) {
            throw std::invalid_argument("series " + std::to_string(i) + " has length " +
                                        std::to_string(s.size()) + ", expected " +
                                        std::to_string(m));
        }
        if (!std::all_of(s.begin(), s.end(), [](double v) { return std::isfinite(v); })) {
            throw std::invalid_argument("series " + std::to_string(i) +
                                        " contains a non-finite value");
        }
    }
    if (labels_ && labels_->size() != series_.size()) {
        throw std::invalid_argument("label count does not match series count");
    }
    if (labels_ && std::any_of(labels_->begin(), labels_->end(), [](int l) { return l < 0; })) {
        throw std::invalid_argument("labels must be non-negative");
    }
}

int TimeSeriesDataset::num_classes() const {
    if (!labels_ || labels_->empty()) return 0;
    return *std::max_element(labels_->begin(), labels_->end()) + 1;
}

ClusterAssignment::ClusterAssignment(std::vector<int> l, int arity)
    : labels(std::move(l)), k(arity) {
    validate();
}

void ClusterAssignment::validate() const {
    if (k <= 0) throw std::invalid_argument("cluster count k must be positive");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= k) {
            throw std::invalid_argument("label " + std::to_string(labels[i]) + " at index " +
                                        std::to_string(i) + " outside [0, " +
                                        std::to_string(k) + ")");
        }
    }
}

std::vector<int> ClusterAssignment::cluster_sizes() const {
    std::vector<int> sizes(static_cast<std::size_t>(std::max(k, 0)), 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    return sizes;
}

std::string ClusterAssignment::serialize() const {
    std::string out = std::to_string(k);
    for (int l : labels) {
        out += ' ';
        out += std::to_string(l);
    }
    return out;
}

ClusterAssignment ClusterAssignment::deserialize(const std::string& line) {
    std::istringstream in(line);
    int arity = 0;
    if (!(in >> arity)) throw std::invalid_argument("clustering line lacks a cluster count");
    std::vector<int> labels;
    int l = 0;
    while (in >> l) labels.push_back(l);
    if (!in.eof()) throw std::invalid_argument("clustering line has a non-integer label");
    return ClusterAssignment(std::move(labels), arity);
}

void ClusteringEnsemble::add(ClusterAssignment c, double v) {
    clusterings.push_back(std::move(c));
    violations.push_back(v);
}

void ClusteringEnsemble::append(const ClusteringEnsemble& other) {
    clusterings.insert(clusterings.end(), other.clusterings.begin(), other.clusterings.end());
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void Hyperparams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(branches >= 1, "branches must be positive");
    require(k >= 1, "k must be positive");
    require(selection_rate > 0.0 && selection_rate <= 1.0, "selection rate must lie in (0, 1]");
    require(lower_mult < upper_mult, "lower multiplier must be below the upper multiplier");
    require(lower_mult > 0.0, "lower multiplier must be positive");
    require(filters >= 1 && kernel_size >= 1 && pool_size >= 1 && lstm_units >= 1,
            "architecture constants must be positive");
    require(kmeans_n_init >= 1 && kmeans_max_iter >= 1 && kmeans_tol >= 0.0,
            "invalid k-means settings");
}

Hyperparams Hyperparams::fast_profile(Hyperparams base) {
    base.branches = 100;
    base.kmeans_n_init = 1;
    return base;
}

int average_cluster_size(long long n, long long k) {
    if (n <= 0 || k <= 0) throw std::invalid_argument("average_cluster_size needs n, k > 0");
    // Integer half-away-from-zero rounding of n/k for positive operands.
    const long long rounded = (2 * n + k) / (2 * k);
    return static_cast<int>(std::max(1LL, rounded));
}

SizeBounds size_bounds(std::size_t n, const Hyperparams& hp) {
    const double acs = average_cluster_size(static_cast<long long>(n), hp.k);
    return {hp.lower_mult * acs, hp.upper_mult * acs};
}

}  // namespace rwc
