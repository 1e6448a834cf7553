#pragma once
// Straightforward reference implementations used as test oracles. They share
// no code with the library beyond the plain data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rwc/core_data.hpp"
#include "rwc/feature_extractor.hpp"

namespace oracle {

inline rwc::FeatureMap conv_same(const rwc::FeatureMap& in, const rwc::ConvLayerParams& p) {
    rwc::FeatureMap out(p.filters, in.length);
    const long half = static_cast<long>(p.kernel_size / 2);
    for (std::size_t f = 0; f < p.filters; ++f) {
        for (std::size_t t = 0; t < in.length; ++t) {
            double s = p.biases.empty() ? 0.0 : p.biases[f];
            for (std::size_t c = 0; c < p.in_channels; ++c) {
                for (std::size_t j = 0; j < p.kernel_size; ++j) {
                    const long src = static_cast<long>(t) + static_cast<long>(j) - half;
                    if (src < 0 || src >= static_cast<long>(in.length)) continue;
                    s += p.kernels[(f * p.in_channels + c) * p.kernel_size + j] *
                         in(c, static_cast<std::size_t>(src));
                }
            }
            out(f, t) = s;
        }
    }
    return out;
}

inline void relu(rwc::FeatureMap& x) {
    for (double& v : x.data) v = v > 0.0 ? v : 0.0;
}

inline rwc::FeatureMap pool(const rwc::FeatureMap& in, std::size_t size) {
    rwc::FeatureMap out(in.channels, in.length / size);
    for (std::size_t c = 0; c < in.channels; ++c) {
        for (std::size_t t = 0; t < out.length; ++t) {
            double best = in(c, t * size);
            for (std::size_t j = 1; j < size; ++j) best = std::max(best, in(c, t * size + j));
            out(c, t) = best;
        }
    }
    return out;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline std::vector<double> lstm(const rwc::FeatureMap& in, const rwc::LstmParams& p) {
    const std::size_t u = p.units;
    std::vector<double> h(u, 0.0), c(u, 0.0);
    auto gate = [&](std::size_t row, std::size_t t, const std::vector<double>& hp) {
        double s = p.biases.empty() ? 0.0 : p.biases[row];
        for (std::size_t ch = 0; ch < p.in_channels; ++ch)
            s += p.input_weights[row * p.in_channels + ch] * in(ch, t);
        for (std::size_t j = 0; j < u; ++j) s += p.recurrent_weights[row * u + j] * hp[j];
        return s;
    };
    for (std::size_t t = 0; t < in.length; ++t) {
        const std::vector<double> hp = h;
        for (std::size_t j = 0; j < u; ++j) {
            const double i = sigmoid(gate(j, t, hp));
            const double f = sigmoid(gate(u + j, t, hp));
            const double g = std::tanh(gate(2 * u + j, t, hp));
            const double o = sigmoid(gate(3 * u + j, t, hp));
            c[j] = f * c[j] + i * g;
            h[j] = o * std::tanh(c[j]);
        }
    }
    return h;
}

inline std::vector<double> block(const rwc::TimeSeries& s, const rwc::BlockParams& p) {
    rwc::FeatureMap x(1, s.values.size(), s.values);
    for (const auto& g : p.conv_groups) {
        x = conv_same(x, g);
        relu(x);
        x = pool(x, p.pool_size);
    }
    std::vector<double> out = x.data;
    const auto h = lstm(x, p.lstm);
    out.insert(out.end(), h.begin(), h.end());
    return out;
}

/// Fraction of agreeing pairs by enumeration.
inline double rand_index_pairs(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = a.size();
    long agree = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            agree += (a[i] == a[j]) == (b[i] == b[j]);
            ++total;
        }
    }
    return static_cast<double>(agree) / static_cast<double>(total);
}

inline double wcss(const rwc::Matrix& x, const std::vector<int>& labels, int k) {
    double total = 0.0;
    for (int c = 0; c < k; ++c) {
        std::vector<double> mean(x.cols(), 0.0);
        int count = 0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            if (labels[i] != c) continue;
            ++count;
            for (std::size_t d = 0; d < x.cols(); ++d) mean[d] += x(i, d);
        }
        if (count == 0) continue;
        for (double& v : mean) v /= count;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            if (labels[i] != c) continue;
            for (std::size_t d = 0; d < x.cols(); ++d) total += (x(i, d) - mean[d]) * (x(i, d) - mean[d]);
        }
    }
    return total;
}

inline double inertia(const rwc::Matrix& x, const rwc::Matrix& centroids, const std::vector<int>& labels) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t d = 0; d < x.cols(); ++d) {
            const double diff = x(i, d) - centroids(static_cast<std::size_t>(labels[i]), d);
            total += diff * diff;
        }
    }
    return total;
}

}  // namespace oracle
