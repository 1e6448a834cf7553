#include "rwc/feature_extractor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rwc/rng.hpp"

namespace rwc {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Reusable buffers so that extracting n series allocates once.
class BlockRunner {
public:
    BlockRunner(const BlockParams& params, const simd::KernelTable& kernels)
        : params_(params), kernels_(kernels) {
        std::size_t max_elems = params.input_length;
        std::size_t len = params.input_length;
        for (const auto& g : params.conv_groups) {
            max_elems = std::max(max_elems, g.filters * len);
            len /= params.pool_size;
        }
        a_.resize(max_elems);
        b_.resize(max_elems);
    }

    // Writes feature_dim() values to `out`.
    void run(std::span<const double> series, std::span<double> out) {
        const std::size_t pool = params_.pool_size;
        std::size_t channels = 1;
        std::size_t len = series.size();
        std::copy(series.begin(), series.end(), a_.begin());
        for (const auto& g : params_.conv_groups) {
            kernels_.conv1d_same(a_.data(), channels, len, g.kernels.data(), g.biases.data(),
                                 g.filters, g.kernel_size, b_.data());
            kernels_.relu(b_.data(), g.filters * len);
            kernels_.max_pool(b_.data(), g.filters, len, pool, a_.data());
            channels = g.filters;
            len /= pool;
        }
        const std::size_t flat = channels * len;
        std::copy_n(a_.begin(), flat, out.begin());

        FeatureMap final_map(channels, len,
                             std::vector<double>(a_.begin(), a_.begin() + static_cast<long>(flat)));
        const auto h = lstm_forward(final_map, params_.lstm);
        std::copy(h.begin(), h.end(), out.begin() + static_cast<long>(flat));
    }

private:
    const BlockParams& params_;
    const simd::KernelTable& kernels_;
    std::vector<double> a_;
    std::vector<double> b_;
};

}  // namespace

FeatureMap::FeatureMap(std::size_t c, std::size_t l, std::vector<double> values)
    : channels(c), length(l), data(std::move(values)) {
    if (data.size() != c * l) throw std::invalid_argument("feature map size mismatch");
}

std::size_t BlockParams::final_length() const {
    std::size_t len = input_length;
    for (std::size_t i = 0; i < conv_groups.size(); ++i) len /= pool_size;
    return len;
}

std::size_t BlockParams::feature_dim() const {
    const std::size_t channels = conv_groups.empty() ? 1 : conv_groups.back().filters;
    return final_length() * channels + lstm.units;
}

std::size_t group_count(std::size_t m, std::size_t pool_size) {
    if (m == 0 || pool_size == 0) return 0;
    const std::size_t requested = std::max<std::size_t>(1, std::bit_width(m) - 1);
    std::size_t groups = 0;
    std::size_t len = m;
    while (groups < requested && len >= pool_size) {
        len /= pool_size;
        ++groups;
    }
    return groups;
}

FeatureMap conv1d_forward(const FeatureMap& input, const ConvLayerParams& params,
                          const simd::KernelTable& kernels) {
    if (input.channels != params.in_channels) {
        throw std::invalid_argument("conv1d: input has " + std::to_string(input.channels) +
                                    " channels, layer expects " +
                                    std::to_string(params.in_channels));
    }
    if (input.length == 0) throw std::invalid_argument("conv1d: empty input");
    if (params.kernels.size() != params.filters * params.in_channels * params.kernel_size ||
        (!params.biases.empty() && params.biases.size() != params.filters)) {
        throw std::invalid_argument("conv1d: malformed layer parameters");
    }
    FeatureMap out(params.filters, input.length);
    kernels.conv1d_same(input.data.data(), input.channels, input.length, params.kernels.data(),
                        params.biases.empty() ? nullptr : params.biases.data(), params.filters,
                        params.kernel_size, out.data.data());
    return out;
}

void relu(std::span<double> values, const simd::KernelTable& kernels) {
    kernels.relu(values.data(), values.size());
}

FeatureMap max_pool(const FeatureMap& input, std::size_t pool_size,
                    const simd::KernelTable& kernels) {
    if (pool_size == 0) throw std::invalid_argument("max_pool: pool size must be positive");
    if (input.length < pool_size) {
        throw std::invalid_argument("max_pool: length " + std::to_string(input.length) +
                                    " is shorter than pool size " + std::to_string(pool_size));
    }
    FeatureMap out(input.channels, input.length / pool_size);
    kernels.max_pool(input.data.data(), input.channels, input.length, pool_size, out.data.data());
    return out;
}

std::vector<double> lstm_forward(const FeatureMap& input, const LstmParams& params) {
    if (input.channels != params.in_channels) {
        throw std::invalid_argument("lstm: input has " + std::to_string(input.channels) +
                                    " channels, layer expects " +
                                    std::to_string(params.in_channels));
    }
    if (input.length == 0) throw std::invalid_argument("lstm: empty input sequence");
    const std::size_t u = params.units;
    const std::size_t c_in = params.in_channels;
    std::vector<double> h(u, 0.0), c(u, 0.0), z(4 * u);
    for (std::size_t t = 0; t < input.length; ++t) {
        for (std::size_t r = 0; r < 4 * u; ++r) {
            double s = params.biases.empty() ? 0.0 : params.biases[r];
            const double* wx = params.input_weights.data() + r * c_in;
            for (std::size_t ch = 0; ch < c_in; ++ch) s += wx[ch] * input(ch, t);
            const double* wh = params.recurrent_weights.data() + r * u;
            for (std::size_t j = 0; j < u; ++j) s += wh[j] * h[j];
            z[r] = s;
        }
        for (std::size_t j = 0; j < u; ++j) {
            const double i_gate = sigmoid(z[j]);
            const double f_gate = sigmoid(z[u + j]);
            const double g_cand = std::tanh(z[2 * u + j]);
            const double o_gate = sigmoid(z[3 * u + j]);
            c[j] = f_gate * c[j] + i_gate * g_cand;
            h[j] = o_gate * std::tanh(c[j]);
        }
    }
    return h;
}

std::vector<double> block_forward(const TimeSeries& series, const BlockParams& params,
                                  const simd::KernelTable& kernels) {
    if (series.length() != params.input_length) {
        throw std::invalid_argument("block_forward: series length " +
                                    std::to_string(series.length()) + " does not match block length " +
                                    std::to_string(params.input_length));
    }
    std::vector<double> out(params.feature_dim());
    BlockRunner runner(params, kernels);
    runner.run(series.values, out);
    return out;
}

BlockParams make_block_params(std::uint64_t seed, std::size_t m, const Hyperparams& hp) {
    if (m < 2) throw std::invalid_argument("series length must be at least 2");
    const auto pool = static_cast<std::size_t>(hp.pool_size);
    const std::size_t groups = group_count(m, pool);
    if (groups == 0) {
        throw std::invalid_argument("series length " + std::to_string(m) +
                                    " is shorter than the pool size");
    }

    Rng rng(seed);
    BlockParams params;
    params.input_length = m;
    params.pool_size = pool;
    std::size_t in_channels = 1;
    for (std::size_t g = 0; g < groups; ++g) {
        ConvLayerParams layer;
        layer.filters = static_cast<std::size_t>(hp.filters);
        layer.in_channels = in_channels;
        layer.kernel_size = static_cast<std::size_t>(hp.kernel_size);
        layer.kernels.resize(layer.filters * in_channels * layer.kernel_size);
        fill_ternary(rng, layer.kernels);
        layer.biases.assign(layer.filters, 0.0);
        if (hp.use_bias) fill_ternary(rng, layer.biases);
        in_channels = layer.filters;
        params.conv_groups.push_back(std::move(layer));
    }

    auto& lstm = params.lstm;
    lstm.units = static_cast<std::size_t>(hp.lstm_units);
    lstm.in_channels = in_channels;
    lstm.input_weights.resize(4 * lstm.units * in_channels);
    lstm.recurrent_weights.resize(4 * lstm.units * lstm.units);
    lstm.biases.assign(4 * lstm.units, 0.0);
    fill_ternary(rng, lstm.input_weights);
    fill_ternary(rng, lstm.recurrent_weights);
    if (hp.use_bias) fill_ternary(rng, lstm.biases);
    return params;
}

FeatureMatrix extract_features(const TimeSeriesDataset& dataset, const BlockParams& params,
                               const simd::KernelTable& kernels) {
    if (dataset.length() != params.input_length) {
        throw std::invalid_argument("dataset length does not match block parameters");
    }
    FeatureMatrix features(dataset.size(), params.feature_dim());
    BlockRunner runner(params, kernels);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        runner.run(dataset[i].values, features.row(i));
    }
    return features;
}

}  // namespace rwc
