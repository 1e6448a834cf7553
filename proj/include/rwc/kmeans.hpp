#pragma once

// Lloyd's k-means with k-means++ seeding.

#include <cstdint>
#include <vector>

#include "rwc/core_data.hpp"
#include "rwc/simd/kernels.hpp"

namespace rwc {

struct KmeansConfig {
    int k = 2;
    int n_init = 10;
    int max_iter = 300;
    // Convergence threshold on the squared Frobenius centroid shift, relative
    // to the mean per-feature variance of the input.
    double tol = 1e-4;
    std::uint64_t seed = 0;
};

struct KmeansResult {
    ClusterAssignment assignment;
    Matrix centroids;
    double inertia = 0.0;
    int iterations = 0;
    // Inertia after each assignment step of the returned run.
    std::vector<double> inertia_trace;
    // Final inertia of every init run, in run order.
    std::vector<double> run_inertias;
};

/// D^2 sampling. If every remaining point coincides with a chosen centroid,
/// the next one is drawn uniformly.
Matrix kmeans_pp_init(const Matrix& x, int k, std::uint64_t seed,
                      const simd::KernelTable& kernels = simd::active_kernels());

/// Lloyd iterations from fixed starting centroids (one run).
KmeansResult kmeans_lloyd(const Matrix& x, Matrix centroids, const KmeansConfig& cfg,
                          const simd::KernelTable& kernels = simd::active_kernels());

/// Best of cfg.n_init seeded runs by inertia. Run r uses seed derive_seed(cfg.seed, r).
KmeansResult kmeans_fit(const Matrix& x, const KmeansConfig& cfg,
                        const simd::KernelTable& kernels = simd::active_kernels());

}  // namespace rwc
