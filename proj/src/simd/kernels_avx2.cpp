// Built with -mavx2 -mfma -ffp-contract=off; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <limits>

#include "rwc/simd/kernels.hpp"

namespace rwc::simd {
namespace {

void conv1d_same_avx2(const double* in, std::size_t channels, std::size_t length,
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
                const __m256d wv = _mm256_set1_pd(w[j]);
                std::ptrdiff_t t = lo;
                for (; t + 4 <= hi; t += 4) {
                    const __m256d xv = _mm256_loadu_pd(x + t + shift);
                    const __m256d ov = _mm256_loadu_pd(o + t);
                    _mm256_storeu_pd(o + t, _mm256_add_pd(ov, _mm256_mul_pd(wv, xv)));
                }
                for (; t < hi; ++t) o[t] += w[j] * x[t + shift];
            }
        }
    }
}

void relu_avx2(double* x, std::size_t count) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
    }
    for (; i < count; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void max_pool_avx2(const double* in, std::size_t channels, std::size_t length,
                   std::size_t pool, double* out) {
    const std::size_t out_len = length / pool;
    for (std::size_t c = 0; c < channels; ++c) {
        const double* x = in + c * length;
        double* o = out + c * out_len;
        std::size_t t = 0;
        if (pool == 2) {
            for (; t + 4 <= out_len; t += 4) {
                const __m256d a = _mm256_loadu_pd(x + 2 * t);
                const __m256d b = _mm256_loadu_pd(x + 2 * t + 4);
                // [a0 b0 a2 b2] / [a1 b1 a3 b3] -> pairwise max in order 0 2 1 3
                const __m256d m = _mm256_max_pd(_mm256_unpackhi_pd(a, b), _mm256_unpacklo_pd(a, b));
                _mm256_storeu_pd(o + t, _mm256_permute4x64_pd(m, _MM_SHUFFLE(3, 1, 2, 0)));
            }
        }
        for (; t < out_len; ++t) {
            double m = x[t * pool];
            for (std::size_t j = 1; j < pool; ++j) m = std::max(m, x[t * pool + j]);
            o[t] = m;
        }
    }
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double squared_distance_avx2(const double* a, const double* b, std::size_t dim) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= dim; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < dim; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void nearest_centroid_avx2(const double* points, std::size_t n, std::size_t dim,
                           const double* centroids, std::size_t k, int* labels,
                           double* distances) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = points + i * dim;
        double best = std::numeric_limits<double>::infinity();
        int best_j = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const double d = squared_distance_avx2(p, centroids + j * dim, dim);
            if (d < best) {
                best = d;
                best_j = static_cast<int>(j);
            }
        }
        labels[i] = best_j;
        distances[i] = best;
    }
}

constexpr KernelTable kAvx2{
    Isa::avx2,           conv1d_same_avx2,      relu_avx2, max_pool_avx2,
    squared_distance_avx2, nearest_centroid_avx2,
};

}  // namespace

namespace detail {
const KernelTable* avx2_table() { return &kAvx2; }
}  // namespace detail

}  // namespace rwc::simd
