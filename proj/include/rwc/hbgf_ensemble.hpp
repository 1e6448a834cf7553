#pragma once

// Consensus over an ensemble of clusterings via the instance-cluster
// bipartite graph, partitioned spectrally.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rwc/core_data.hpp"

namespace rwc {

/// Instance-cluster incidence. Every instance has exactly one edge per member
/// clustering, so the graph is stored as an n x members table of cluster
/// vertex ids. Clusters with no members get no vertex.
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    std::size_t instances() const { return n_; }
    std::size_t members() const { return members_; }
    std::size_t cluster_vertices() const { return vertex_origin_.size(); }

    /// (member clustering index, cluster id) for each cluster vertex.
    const std::vector<std::pair<int, int>>& vertex_origin() const { return vertex_origin_; }

    /// Cluster vertices adjacent to instance i (one per member clustering).
    std::span<const std::uint32_t> neighbours(std::size_t i) const {
        return {edges_.data() + i * members_, members_};
    }

    /// Column sums of the connectivity matrix (cluster sizes).
    const std::vector<std::size_t>& cluster_degrees() const { return cluster_degree_; }

    /// Dense n x c binary connectivity matrix.
    Matrix connectivity() const;

    friend BipartiteGraph build_bipartite(std::span<const ClusterAssignment> selected);

private:
    std::size_t n_ = 0;
    std::size_t members_ = 0;
    std::vector<std::pair<int, int>> vertex_origin_;
    std::vector<std::uint32_t> edges_;
    std::vector<std::size_t> cluster_degree_;
};

BipartiteGraph build_bipartite(std::span<const ClusterAssignment> selected);

struct SpectralOptions {
    int max_iterations = 300;
    double tolerance = 1e-8;
    int oversampling = 10;
    int kmeans_n_init = 10;
};

/// Top singular triplets of a degree-normalised connectivity matrix.
struct TruncatedSvd {
    std::vector<double> singular_values;  // descending
    Matrix left;                          // n x r
    Matrix right;                         // c x r
    int iterations = 0;
    bool converged = false;
};

/// Top-`rank` SVD of D1^-1/2 A D2^-1/2 by block orthogonal iteration on its
/// c x c Gram matrix, started from a seeded Gaussian block.
TruncatedSvd normalized_svd(const BipartiteGraph& graph, std::size_t rank, std::uint64_t seed,
                            const SpectralOptions& opts = {});

ClusterAssignment spectral_consensus(const BipartiteGraph& graph, int k, std::uint64_t seed,
                                     const SpectralOptions& opts = {});

/// build_bipartite followed by spectral_consensus.
ClusterAssignment consensus(std::span<const ClusterAssignment> selected, int k, std::uint64_t seed,
                            const SpectralOptions& opts = {});

}  // namespace rwc
