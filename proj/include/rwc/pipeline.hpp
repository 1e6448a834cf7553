#pragma once

// End-to-end orchestration: B branches of (random network -> features ->
// k-means), size-based selection, bipartite consensus.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "rwc/core_data.hpp"

namespace rwc {

/// A branch failed; carries the branch index.
class BranchError : public std::runtime_error {
public:
    BranchError(std::size_t index, const std::string& what)
        : std::runtime_error("branch " + std::to_string(index) + ": " + what), index_(index) {}

    std::size_t branch_index() const { return index_; }

private:
    std::size_t index_;
};

struct RunOptions {
    int jobs = 1;
    // When set, branch clusterings are appended here as they complete and
    // reused on the next run with the same dataset shape, k and seed.
    std::optional<std::filesystem::path> checkpoint;
};

struct RunReport {
    ClusterAssignment assignment;
    std::optional<double> rand_index_vs_truth;
    std::map<double, int> violation_histogram;
    std::size_t selected_count = 0;
    std::size_t zero_violation = 0;
    std::int64_t wall_time_ms = 0;
    SizeBounds bounds{};
    Hyperparams hyperparams;
};

/// Feature matrix of one branch (network seeded from the branch seed).
FeatureMatrix branch_features(const TimeSeriesDataset& dataset, const Hyperparams& hp,
                              std::size_t branch_index);

/// Clustering of one branch.
ClusterAssignment run_branch(const TimeSeriesDataset& dataset, const Hyperparams& hp,
                             std::size_t branch_index);

/// Branches [begin, end) in index order, with violations against the run's
/// size bounds. Result order never depends on `jobs`.
ClusteringEnsemble run_branches(const TimeSeriesDataset& dataset, const Hyperparams& hp,
                                std::size_t begin, std::size_t end, int jobs = 1);

RunReport run(const TimeSeriesDataset& dataset, const Hyperparams& hp,
              const RunOptions& options = {});

/// Checkpoint file: a header line
///   "# rwclust-ensemble n=<n> m=<m> k=<k> seed=<seed>"
/// followed by one clustering per line in ClusterAssignment::serialize form.
struct CheckpointHeader {
    std::size_t n = 0;
    std::size_t m = 0;
    int k = 0;
    std::uint64_t seed = 0;

    std::string format() const;
    static CheckpointHeader parse(const std::string& line);
    friend bool operator==(const CheckpointHeader&, const CheckpointHeader&) = default;
};

void write_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                      const ClusteringEnsemble& ensemble);
void append_checkpoint(const std::filesystem::path& path, const ClusteringEnsemble& ensemble);

/// Reads clusterings back; violations are left at zero for the caller to fill.
ClusteringEnsemble read_checkpoint(const std::filesystem::path& path, CheckpointHeader& header);

}  // namespace rwc
