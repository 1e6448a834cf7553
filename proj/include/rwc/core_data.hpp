#pragma once

// Domain types shared across the clustering engine.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rwc {

/// A univariate, real-valued sequence.
struct TimeSeries {
    std::vector<double> values;

    std::size_t length() const { return values.size(); }
};

/// n equal-length series with optional 0-based ground-truth labels.
class TimeSeriesDataset {
public:
    TimeSeriesDataset() = default;
    TimeSeriesDataset(std::string name, std::vector<TimeSeries> series,
                      std::optional<std::vector<int>> labels = std::nullopt);

    const std::string& name() const { return name_; }
    const std::vector<TimeSeries>& series() const { return series_; }
    const TimeSeries& operator[](std::size_t i) const { return series_[i]; }
    const std::optional<std::vector<int>>& labels() const { return labels_; }

    std::size_t size() const { return series_.size(); }
    std::size_t length() const { return series_.empty() ? 0 : series_.front().length(); }
    bool has_labels() const { return labels_.has_value(); }

    /// Number of distinct ground-truth classes (0 when unlabeled).
    int num_classes() const;

    /// Original label values from the source file, indexed by 0-based label.
    const std::vector<double>& original_labels() const { return original_labels_; }
    void set_original_labels(std::vector<double> v) { original_labels_ = std::move(v); }

    /// Count of missing tokens replaced by zeros during loading.
    std::size_t missing_values() const { return missing_values_; }
    void set_missing_values(std::size_t n) { missing_values_ = n; }

private:
    std::string name_;
    std::vector<TimeSeries> series_;
    std::optional<std::vector<int>> labels_;
    std::vector<double> original_labels_;
    std::size_t missing_values_ = 0;
};

/// A partition of n instances into k declared groups. Empty groups are allowed.
struct ClusterAssignment {
    std::vector<int> labels;
    int k = 0;

    ClusterAssignment() = default;
    ClusterAssignment(std::vector<int> l, int arity);

    std::size_t size() const { return labels.size(); }

    /// Throws std::invalid_argument when a label falls outside [0, k).
    void validate() const;

    /// Member count per declared cluster; length k.
    std::vector<int> cluster_sizes() const;

    /// Single-line text form: "<k> <l0> <l1> ...".
    std::string serialize() const;
    static ClusterAssignment deserialize(const std::string& line);

    friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

/// Raw per-branch clusterings with their bound-violation totals.
struct ClusteringEnsemble {
    std::vector<ClusterAssignment> clusterings;
    std::vector<double> violations;

    std::size_t size() const { return clusterings.size(); }
    bool empty() const { return clusterings.empty(); }
    void add(ClusterAssignment c, double v);
    void append(const ClusteringEnsemble& other);
};

/// Dense row-major real matrix; used for feature matrices and centroids.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    const std::vector<double>& storage() const { return data_; }

    bool all_finite() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

using FeatureMatrix = Matrix;

/// Run configuration. Architecture constants default to the reference
/// network: 8 filters of width 3, pooling by 2, 8 LSTM units.
struct Hyperparams {
    int branches = 800;
    int k = 2;
    double selection_rate = 0.1;
    double lower_mult = 0.3;
    double upper_mult = 1.5;
    std::uint64_t master_seed = 42;

    int filters = 8;
    int kernel_size = 3;
    int pool_size = 2;
    int lstm_units = 8;
    bool use_bias = true;

    // Per-branch k-means settings.
    int kmeans_n_init = 10;
    int kmeans_max_iter = 300;
    double kmeans_tol = 1e-4;

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;

    /// Scaling-study profile: one k-means init per branch and 100 branches.
    static Hyperparams fast_profile(Hyperparams base);
};

/// round(n / k), half away from zero, never below 1.
int average_cluster_size(long long n, long long k);

/// Lower and upper cluster-size bounds for a dataset of n instances.
struct SizeBounds {
    double lower;
    double upper;
};
SizeBounds size_bounds(std::size_t n, const Hyperparams& hp);

}  // namespace rwc
