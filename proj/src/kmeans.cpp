#include "rwc/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rwc/rng.hpp"

namespace rwc {

namespace {

void check_input(const Matrix& x, int k) {
    if (k < 1) throw std::invalid_argument("k-means: k must be positive");
    if (x.rows() < static_cast<std::size_t>(k)) {
        throw std::invalid_argument("k-means: " + std::to_string(x.rows()) +
                                    " rows cannot form " + std::to_string(k) + " clusters");
    }
    if (x.cols() == 0) throw std::invalid_argument("k-means: zero-dimensional input");
    if (!x.all_finite()) throw std::invalid_argument("k-means: input contains non-finite values");
}

double mean_feature_variance(const Matrix& x) {
    const std::size_t n = x.rows(), d = x.cols();
    double total = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dv = x(i, j) - mean;
            var += dv * dv;
        }
        total += var / static_cast<double>(n);
    }
    return total / static_cast<double>(d);
}

// Moves the farthest points of multi-member clusters into empty clusters.
void repair_empty_clusters(const Matrix& x, Matrix& centroids, std::vector<int>& labels,
                           std::vector<double>& dists) {
    const std::size_t k = centroids.rows();
    std::vector<int> sizes(k, 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    for (std::size_t e = 0; e < k; ++e) {
        if (sizes[e] != 0) continue;
        std::size_t pick = labels.size();
        double far = -1.0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (sizes[static_cast<std::size_t>(labels[i])] > 1 && dists[i] > far) {
                far = dists[i];
                pick = i;
            }
        }
        if (pick == labels.size()) break;  // unreachable while n >= k
        --sizes[static_cast<std::size_t>(labels[pick])];
        labels[pick] = static_cast<int>(e);
        sizes[e] = 1;
        dists[pick] = 0.0;
        std::copy(x.row(pick).begin(), x.row(pick).end(), centroids.row(e).begin());
    }
}

Matrix cluster_means(const Matrix& x, const std::vector<int>& labels, const Matrix& previous) {
    const std::size_t k = previous.rows(), d = x.cols();
    Matrix means(k, d, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto l = static_cast<std::size_t>(labels[i]);
        ++counts[l];
        auto dst = means.row(l);
        const auto src = x.row(i);
        for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
        auto dst = means.row(c);
        if (counts[c] == 0) {
            std::copy(previous.row(c).begin(), previous.row(c).end(), dst.begin());
            continue;
        }
        const double inv = 1.0 / static_cast<double>(counts[c]);
        for (auto& v : dst) v *= inv;
    }
    return means;
}

}  // namespace

Matrix kmeans_pp_init(const Matrix& x, int k, std::uint64_t seed,
                      const simd::KernelTable& kernels) {
    check_input(x, k);
    const std::size_t n = x.rows(), d = x.cols();
    Rng rng(seed);
    Matrix centroids(static_cast<std::size_t>(k), d);

    auto take = [&](std::size_t c, std::size_t row) {
        std::copy(x.row(row).begin(), x.row(row).end(), centroids.row(c).begin());
    };

    take(0, rng.below(n));
    std::vector<double> closest(n);
    for (std::size_t i = 0; i < n; ++i) {
        closest[i] = kernels.squared_distance(x.row(i).data(), centroids.row(0).data(), d);
    }
    for (std::size_t c = 1; c < static_cast<std::size_t>(k); ++c) {
        const double total = std::accumulate(closest.begin(), closest.end(), 0.0);
        std::size_t pick = n - 1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double running = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                running += closest[i];
                if (closest[i] > 0.0 && running > target) {
                    pick = i;
                    break;
                }
            }
            // Rounding can leave `target` at the very top of the range.
            if (closest[pick] == 0.0) {
                for (std::size_t i = n; i-- > 0;) {
                    if (closest[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        } else {
            pick = rng.below(n);
        }
        take(c, pick);
        for (std::size_t i = 0; i < n; ++i) {
            const double dist = kernels.squared_distance(x.row(i).data(), centroids.row(c).data(), d);
            closest[i] = std::min(closest[i], dist);
        }
    }
    return centroids;
}

KmeansResult kmeans_lloyd(const Matrix& x, Matrix centroids, const KmeansConfig& cfg,
                          const simd::KernelTable& kernels) {
    check_input(x, cfg.k);
    if (centroids.rows() != static_cast<std::size_t>(cfg.k) || centroids.cols() != x.cols()) {
        throw std::invalid_argument("k-means: initial centroids have the wrong shape");
    }
    const std::size_t n = x.rows(), d = x.cols(), k = centroids.rows();
    const double tol = cfg.tol * mean_feature_variance(x);

    std::vector<int> labels(n), previous;
    std::vector<double> dists(n);
    KmeansResult result;

    auto assign = [&]() {
        kernels.nearest_centroid(x.data(), n, d, centroids.data(), k, labels.data(), dists.data());
        repair_empty_clusters(x, centroids, labels, dists);
        const double inertia = std::accumulate(dists.begin(), dists.end(), 0.0);
        result.inertia_trace.push_back(inertia);
        return inertia;
    };

    double inertia = assign();
    int iterations = 0;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        Matrix next = cluster_means(x, labels, centroids);
        double shift = 0.0;
        for (std::size_t i = 0; i < next.storage().size(); ++i) {
            const double dv = next.storage()[i] - centroids.storage()[i];
            shift += dv * dv;
        }
        centroids = std::move(next);
        previous = labels;
        inertia = assign();
        iterations = it;
        if (labels == previous || shift <= tol) break;
    }

    result.assignment = ClusterAssignment(std::move(labels), cfg.k);
    result.centroids = std::move(centroids);
    result.inertia = inertia;
    result.iterations = iterations;
    return result;
}

KmeansResult kmeans_fit(const Matrix& x, const KmeansConfig& cfg,
                        const simd::KernelTable& kernels) {
    check_input(x, cfg.k);
    if (cfg.n_init < 1) throw std::invalid_argument("k-means: n_init must be positive");
    KmeansResult best;
    std::vector<double> run_inertias;
    for (int r = 0; r < cfg.n_init; ++r) {
        const std::uint64_t run_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
        auto run = kmeans_lloyd(x, kmeans_pp_init(x, cfg.k, run_seed, kernels), cfg, kernels);
        run_inertias.push_back(run.inertia);
        if (r == 0 || run.inertia < best.inertia) best = std::move(run);
    }
    best.run_inertias = std::move(run_inertias);
    return best;
}

}  // namespace rwc
