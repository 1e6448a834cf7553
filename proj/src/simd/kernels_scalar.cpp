#include <algorithm>
#include <limits>

#include "rwc/simd/kernels.hpp"

namespace rwc::simd {
namespace {

void conv1d_same_scalar(const double* in, std::size_t channels, std::size_t length,
                        const double* weights, const double* bias, std::size_t filters,
                        std::size_t ksize, double* out) {
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(ksize / 2);
    const auto len = static_cast<std::ptrdiff_t>(length);
    for (std::size_t f = 0; f < filters; ++f) {
        double* o = out + f * length;
        const double b = bias ? bias[f] : 0.0;
        std::fill(o, o + length, b);
        for (std::size_t c = 0; c < channels; ++c) {
            const double* x = in + c * length;
            const double* w = weights + (f * channels + c) * ksize;
            for (std::size_t j = 0; j < ksize; ++j) {
                if (w[j] == 0.0) continue;
                const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(j) - half;
                const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -shift);
                const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len, len - shift);
                for (std::ptrdiff_t t = lo; t < hi; ++t) o[t] += w[j] * x[t + shift];
            }
        }
    }
}

void relu_scalar(double* x, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void max_pool_scalar(const double* in, std::size_t channels, std::size_t length,
                     std::size_t pool, double* out) {
    const std::size_t out_len = length / pool;
    for (std::size_t c = 0; c < channels; ++c) {
        const double* x = in + c * length;
        double* o = out + c * out_len;
        for (std::size_t t = 0; t < out_len; ++t) {
            double m = x[t * pool];
            for (std::size_t j = 1; j < pool; ++j) m = std::max(m, x[t * pool + j]);
            o[t] = m;
        }
    }
}

double squared_distance_scalar(const double* a, const double* b, std::size_t dim) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void nearest_centroid_scalar(const double* points, std::size_t n, std::size_t dim,
                             const double* centroids, std::size_t k, int* labels,
                             double* distances) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = points + i * dim;
        double best = std::numeric_limits<double>::infinity();
        int best_j = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const double d = squared_distance_scalar(p, centroids + j * dim, dim);
            if (d < best) {
                best = d;
                best_j = static_cast<int>(j);
            }
        }
        labels[i] = best_j;
        distances[i] = best;
    }
}

constexpr KernelTable kScalar{
    Isa::scalar,           conv1d_same_scalar,      relu_scalar, max_pool_scalar,
    squared_distance_scalar, nearest_centroid_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace rwc::simd
