#include "rwc/hbgf_ensemble.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rwc/kmeans.hpp"
#include "rwc/rng.hpp"

namespace rwc {

namespace {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

// Edge weights of the normalised incidence matrix, laid out like the edge table.
std::vector<double> edge_weights(const BipartiteGraph& g) {
    const std::size_t n = g.instances(), m = g.members();
    const auto& col_deg = g.cluster_degrees();
    std::vector<double> w(n * m);
    const double row_deg = static_cast<double>(m);
    for (std::size_t i = 0; i < n; ++i) {
        const auto nb = g.neighbours(i);
        for (std::size_t e = 0; e < m; ++e) {
            const double prod = row_deg * static_cast<double>(col_deg[nb[e]]);
            w[i * m + e] = prod > 0.0 ? 1.0 / std::sqrt(prod) : 0.0;
        }
    }
    return w;
}

// out (n x p) = A~ v (c x p)
void multiply(const BipartiteGraph& g, const std::vector<double>& w, const DenseMatrix& v,
              DenseMatrix& out) {
    const std::size_t n = g.instances(), m = g.members();
    const auto p = v.cols();
    out.setZero(static_cast<Eigen::Index>(n), p);
    for (Eigen::Index col = 0; col < p; ++col) {
        const double* vc = v.col(col).data();
        double* oc = out.col(col).data();
        for (std::size_t i = 0; i < n; ++i) {
            const auto nb = g.neighbours(i);
            const double* wi = w.data() + i * m;
            double s = 0.0;
            for (std::size_t e = 0; e < m; ++e) s += wi[e] * vc[nb[e]];
            oc[i] = s;
        }
    }
}

// out (c x p) = A~^T u (n x p)
void multiply_transposed(const BipartiteGraph& g, const std::vector<double>& w,
                         const DenseMatrix& u, DenseMatrix& out) {
    const std::size_t n = g.instances(), m = g.members();
    const auto p = u.cols();
    out.setZero(static_cast<Eigen::Index>(g.cluster_vertices()), p);
    for (Eigen::Index col = 0; col < p; ++col) {
        const double* uc = u.col(col).data();
        double* oc = out.col(col).data();
        for (std::size_t i = 0; i < n; ++i) {
            const auto nb = g.neighbours(i);
            const double* wi = w.data() + i * m;
            for (std::size_t e = 0; e < m; ++e) oc[nb[e]] += wi[e] * uc[i];
        }
    }
}

DenseMatrix orthonormalize(const DenseMatrix& x) {
    Eigen::HouseholderQR<DenseMatrix> qr(x);
    return qr.householderQ() * DenseMatrix::Identity(x.rows(), x.cols());
}

// Largest principal-angle sine between the column spans of two orthonormal bases.
double subspace_gap(const DenseMatrix& a, const DenseMatrix& b) {
    const DenseMatrix overlap = a.transpose() * b;
    Eigen::JacobiSVD<DenseMatrix> svd(overlap);
    const double cos_min = svd.singularValues().minCoeff();
    return std::sqrt(std::max(0.0, 1.0 - cos_min * cos_min));
}

Matrix to_matrix(const DenseMatrix& d) {
    Matrix out(static_cast<std::size_t>(d.rows()), static_cast<std::size_t>(d.cols()));
    for (Eigen::Index r = 0; r < d.rows(); ++r) {
        for (Eigen::Index c = 0; c < d.cols(); ++c) {
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = d(r, c);
        }
    }
    return out;
}

bool identical_connectivity(const BipartiteGraph& g) {
    const auto first = g.neighbours(0);
    for (std::size_t i = 1; i < g.instances(); ++i) {
        if (!std::equal(first.begin(), first.end(), g.neighbours(i).begin())) return false;
    }
    return true;
}

}  // namespace

Matrix BipartiteGraph::connectivity() const {
    Matrix a(n_, cluster_vertices(), 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (auto v : neighbours(i)) a(i, v) = 1.0;
    }
    return a;
}

BipartiteGraph build_bipartite(std::span<const ClusterAssignment> selected) {
    if (selected.empty()) throw std::invalid_argument("bipartite graph needs at least one clustering");
    const std::size_t n = selected.front().size();
    for (std::size_t m = 0; m < selected.size(); ++m) {
        if (selected[m].size() != n) {
            throw std::invalid_argument("clustering " + std::to_string(m) + " covers " +
                                        std::to_string(selected[m].size()) +
                                        " instances, expected " + std::to_string(n));
        }
        selected[m].validate();
    }

    BipartiteGraph g;
    g.n_ = n;
    g.members_ = selected.size();
    g.edges_.resize(n * g.members_);
    for (std::size_t m = 0; m < selected.size(); ++m) {
        const auto sizes = selected[m].cluster_sizes();
        std::vector<std::uint32_t> vertex(sizes.size(), 0);
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            if (sizes[c] == 0) continue;
            vertex[c] = static_cast<std::uint32_t>(g.vertex_origin_.size());
            g.vertex_origin_.emplace_back(static_cast<int>(m), static_cast<int>(c));
            g.cluster_degree_.push_back(static_cast<std::size_t>(sizes[c]));
        }
        const auto& labels = selected[m].labels;
        for (std::size_t i = 0; i < n; ++i) {
            g.edges_[i * g.members_ + m] = vertex[static_cast<std::size_t>(labels[i])];
        }
    }
    return g;
}

TruncatedSvd normalized_svd(const BipartiteGraph& graph, std::size_t rank, std::uint64_t seed,
                            const SpectralOptions& opts) {
    const std::size_t n = graph.instances(), c = graph.cluster_vertices();
    if (rank == 0 || rank > std::min(n, c)) {
        throw std::invalid_argument("normalized_svd: rank " + std::to_string(rank) +
                                    " outside [1, min(n, c)]");
    }
    const auto w = edge_weights(graph);
    const auto block = static_cast<Eigen::Index>(
        std::min({c, n, rank + static_cast<std::size_t>(std::max(0, opts.oversampling))}));
    const auto r = static_cast<Eigen::Index>(rank);

    Rng rng(seed);
    DenseMatrix v(static_cast<Eigen::Index>(c), block);
    for (Eigen::Index col = 0; col < block; ++col) {
        for (Eigen::Index row = 0; row < v.rows(); ++row) v(row, col) = rng.normal();
    }
    v = orthonormalize(v);

    TruncatedSvd out;
    DenseMatrix u, z, ritz, previous;
    Eigen::VectorXd eigenvalues;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        multiply(graph, w, v, u);
        // Rayleigh-Ritz on span(v): V^T A~^T A~ V = U^T U.
        const DenseMatrix h = u.transpose() * u;
        Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h);
        // Eigen sorts ascending; reverse to descending.
        const DenseMatrix y = eig.eigenvectors().rowwise().reverse();
        eigenvalues = eig.eigenvalues().reverse();
        ritz = v * y;
        out.iterations = it;
        const DenseMatrix top = ritz.leftCols(r);
        if (previous.size() != 0 && subspace_gap(previous, top) <= opts.tolerance) {
            out.converged = true;
            break;
        }
        previous = top;
        multiply_transposed(graph, w, u, z);
        v = orthonormalize(z);
    }

    const DenseMatrix right = ritz.leftCols(r);
    DenseMatrix left;
    multiply(graph, w, right, left);
    out.singular_values.resize(rank);
    for (Eigen::Index j = 0; j < r; ++j) {
        const double sigma = std::sqrt(std::max(0.0, eigenvalues(j)));
        out.singular_values[static_cast<std::size_t>(j)] = sigma;
        if (sigma > 1e-12) {
            left.col(j) /= sigma;
        } else {
            left.col(j).setZero();
        }
    }
    out.left = to_matrix(left);
    out.right = to_matrix(right);
    return out;
}

ClusterAssignment spectral_consensus(const BipartiteGraph& graph, int k, std::uint64_t seed,
                                     const SpectralOptions& opts) {
    const std::size_t n = graph.instances();
    if (k < 2) throw std::invalid_argument("spectral consensus needs k >= 2");
    if (n < static_cast<std::size_t>(k)) {
        throw std::invalid_argument("spectral consensus: fewer instances than clusters");
    }

    KmeansConfig km;
    km.k = k;
    km.seed = stream_seed(seed, Stream::consensus);

    const auto rank = static_cast<std::size_t>(k);
    if (identical_connectivity(graph) || graph.cluster_vertices() < rank) {
        km.n_init = 1;
        return kmeans_fit(graph.connectivity(), km).assignment;
    }

    const auto svd = normalized_svd(graph, rank, seed, opts);
    Matrix embedding = svd.left;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = embedding.row(i);
        double norm = 0.0;
        for (double v : row) norm += v * v;
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (auto& v : row) v /= norm;
        }
    }
    km.n_init = opts.kmeans_n_init;
    return kmeans_fit(embedding, km).assignment;
}

ClusterAssignment consensus(std::span<const ClusterAssignment> selected, int k, std::uint64_t seed,
                            const SpectralOptions& opts) {
    return spectral_consensus(build_bipartite(selected), k, seed, opts);
}

}  // namespace rwc
