#pragma once

// Inner-loop kernels with a scalar reference and vector variants chosen at
// runtime. Each variant must agree with the scalar table: conv1d, relu and
// max_pool bit-exactly (vectorized across time, per-output accumulation order
// unchanged), distances to within rounding of a reordered sum.

#include <cstddef>
#include <optional>
#include <string_view>

namespace rwc::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

struct KernelTable {
    Isa isa;

    // "Same"-padded cross-correlation over channel-major buffers.
    //   in:      channels x length
    //   weights: filters x channels x ksize
    //   bias:    filters, or nullptr for no bias
    //   out:     filters x length
    // out[f][t] = bias[f] + sum_c sum_j w[f][c][j] * in[c][t + j - ksize/2],
    // with out-of-range taps reading zero. Zero weights are skipped.
    void (*conv1d_same)(const double* in, std::size_t channels, std::size_t length,
                        const double* weights, const double* bias, std::size_t filters,
                        std::size_t ksize, double* out);

    void (*relu)(double* x, std::size_t count);

    // Non-overlapping max over windows of `pool`; trailing remainder dropped.
    //   in: channels x length, out: channels x (length / pool)
    void (*max_pool)(const double* in, std::size_t channels, std::size_t length,
                     std::size_t pool, double* out);

    double (*squared_distance)(const double* a, const double* b, std::size_t dim);

    // For each of n rows, the index of the nearest of k centroids (ties to the
    // lowest index) and the squared distance to it.
    void (*nearest_centroid)(const double* points, std::size_t n, std::size_t dim,
                             const double* centroids, std::size_t k, int* labels,
                             double* distances);
};

const KernelTable& scalar_kernels();

/// Vector table for `isa` if compiled in and supported by this CPU.
const KernelTable* kernels_for(Isa isa);

/// Best supported table, unless overridden with set_active_isa().
const KernelTable& active_kernels();

/// Pins the active table. Throws std::invalid_argument if `isa` is unavailable.
void set_active_isa(Isa isa);

/// Restores automatic selection.
void reset_active_isa();

bool isa_available(Isa isa);

namespace detail {
const KernelTable* avx2_table();
}

}  // namespace rwc::simd
