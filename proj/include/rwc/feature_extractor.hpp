#pragma once

// Untrained CNN-LSTM feature extraction.
//
// A block is a stack of [conv1d -> ReLU -> max-pool] groups followed by an
// LSTM that reads the final pooled map as a sequence (one timestep per
// position, one input channel per filter). Every parameter is drawn from
// {-1, 0, +1}; nothing is trained.
//
// Feature layout for one series: the final conv map flattened channel-major
// (all timesteps of filter 0, then filter 1, ...), followed by the LSTM's
// final hidden state. d = final_length * filters + lstm_units.
//
// Parameter draw order from the network stream of a branch seed:
//   for each group: kernels [filter][in_channel][tap], then biases [filter]
//   LSTM: input weights [4*units][in_channel], recurrent [4*units][units],
//         biases [4*units]
// Gate rows are ordered input, forget, candidate, output. With use_bias off
// no bias draws happen and biases are zero.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rwc/core_data.hpp"
#include "rwc/simd/kernels.hpp"

namespace rwc {

/// Channel-major multichannel sequence: data[c * length + t].
struct FeatureMap {
    std::size_t channels = 0;
    std::size_t length = 0;
    std::vector<double> data;

    FeatureMap() = default;
    FeatureMap(std::size_t c, std::size_t l) : channels(c), length(l), data(c * l, 0.0) {}
    FeatureMap(std::size_t c, std::size_t l, std::vector<double> values);

    double operator()(std::size_t c, std::size_t t) const { return data[c * length + t]; }
    double& operator()(std::size_t c, std::size_t t) { return data[c * length + t]; }
};

struct ConvLayerParams {
    std::size_t filters = 0;
    std::size_t in_channels = 0;
    std::size_t kernel_size = 0;
    std::vector<double> kernels;  // filters x in_channels x kernel_size
    std::vector<double> biases;   // filters
};

struct LstmParams {
    std::size_t units = 0;
    std::size_t in_channels = 0;
    std::vector<double> input_weights;      // 4*units x in_channels
    std::vector<double> recurrent_weights;  // 4*units x units
    std::vector<double> biases;             // 4*units
};

struct BlockParams {
    std::size_t input_length = 0;
    std::size_t pool_size = 2;
    std::vector<ConvLayerParams> conv_groups;
    LstmParams lstm;

    std::size_t final_length() const;
    std::size_t feature_dim() const;
};

/// Groups a block is built with for length m: min(max(1, floor(log2 m)), the
/// number of halvings possible while the running length stays >= pool_size).
std::size_t group_count(std::size_t m, std::size_t pool_size);

FeatureMap conv1d_forward(const FeatureMap& input, const ConvLayerParams& params,
                          const simd::KernelTable& kernels = simd::active_kernels());

void relu(std::span<double> values, const simd::KernelTable& kernels = simd::active_kernels());

FeatureMap max_pool(const FeatureMap& input, std::size_t pool_size,
                    const simd::KernelTable& kernels = simd::active_kernels());

/// Final hidden state of a zero-initialised LSTM run over `input`.
std::vector<double> lstm_forward(const FeatureMap& input, const LstmParams& params);

std::vector<double> block_forward(const TimeSeries& series, const BlockParams& params,
                                  const simd::KernelTable& kernels = simd::active_kernels());

BlockParams make_block_params(std::uint64_t seed, std::size_t m, const Hyperparams& hp);

/// n x d features for every series of a dataset.
FeatureMatrix extract_features(const TimeSeriesDataset& dataset, const BlockParams& params,
                               const simd::KernelTable& kernels = simd::active_kernels());

}  // namespace rwc
