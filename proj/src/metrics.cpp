#include "rwc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rwc/pipeline.hpp"
#include "rwc/rng.hpp"

namespace rwc {

namespace {

double choose2(double x) { return x * (x - 1.0) / 2.0; }

constexpr std::size_t kElbowBranches = 16;

}  // namespace

double rand_index(const ClusterAssignment& a, const ClusterAssignment& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("rand_index: partitions cover " + std::to_string(a.size()) +
                                    " and " + std::to_string(b.size()) + " instances");
    }
    if (a.size() < 2) throw std::invalid_argument("rand_index: needs at least two instances");
    a.validate();
    b.validate();
    const auto ka = static_cast<std::size_t>(a.k), kb = static_cast<std::size_t>(b.k);
    std::vector<long long> table(ka * kb, 0), rows(ka, 0), cols(kb, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto x = static_cast<std::size_t>(a.labels[i]);
        const auto y = static_cast<std::size_t>(b.labels[i]);
        ++table[x * kb + y];
        ++rows[x];
        ++cols[y];
    }
    // Pair counts are exact integers well below 2^53 for any realistic n.
    double both = 0.0, in_a = 0.0, in_b = 0.0;
    for (long long t : table) both += choose2(static_cast<double>(t));
    for (long long r : rows) in_a += choose2(static_cast<double>(r));
    for (long long c : cols) in_b += choose2(static_cast<double>(c));
    const double pairs = choose2(static_cast<double>(a.size()));
    const double disagree = in_a + in_b - 2.0 * both;
    return (pairs - disagree) / pairs;
}

double ensemble_size_lower_bound(double alpha, double gamma) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
    return -2.0 * std::log(alpha) / (gamma * gamma);
}

double wcss(const Matrix& x, const ClusterAssignment& assignment) {
    if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("wcss: empty input");
    if (assignment.size() != x.rows()) {
        throw std::invalid_argument("wcss: assignment does not match the number of rows");
    }
    assignment.validate();
    const auto k = static_cast<std::size_t>(assignment.k);
    const std::size_t d = x.cols();
    Matrix means(k, d, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto l = static_cast<std::size_t>(assignment.labels[i]);
        ++counts[l];
        for (std::size_t j = 0; j < d; ++j) means(l, j) += x(i, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) means(c, j) /= static_cast<double>(counts[c]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto l = static_cast<std::size_t>(assignment.labels[i]);
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = x(i, j) - means(l, j);
            total += dv * dv;
        }
    }
    return total;
}

ElbowCurve elbow_curve(const TimeSeriesDataset& dataset, const Hyperparams& hp,
                       const std::vector<int>& k_range, int jobs) {
    if (k_range.empty()) throw std::invalid_argument("elbow: empty k range");
    if (!std::is_sorted(k_range.begin(), k_range.end()) ||
        std::adjacent_find(k_range.begin(), k_range.end()) != k_range.end()) {
        throw std::invalid_argument("elbow: k range must be strictly ascending");
    }
    if (k_range.front() < 1 || static_cast<std::size_t>(k_range.back()) > dataset.size()) {
        throw std::invalid_argument("elbow: k values must lie in [1, n]");
    }

    // Branch subsample: partial Fisher-Yates over [0, B).
    const auto total = static_cast<std::size_t>(hp.branches);
    std::vector<std::size_t> pool(total);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    const std::size_t used = std::min(kElbowBranches, total);
    Rng rng(stream_seed(hp.master_seed, Stream::elbow_subsample));
    for (std::size_t i = 0; i < used; ++i) {
        std::swap(pool[i], pool[i + rng.below(total - i)]);
    }
    pool.resize(used);
    std::sort(pool.begin(), pool.end());

    std::vector<Matrix> spaces;
    spaces.reserve(used);
    for (std::size_t b : pool) spaces.push_back(branch_features(dataset, hp, b));

    ElbowCurve curve;
    for (int k : k_range) {
        Hyperparams hk = hp;
        hk.k = k;
        RunOptions opts;
        opts.jobs = jobs;
        const auto report = run(dataset, hk, opts);
        double sum = 0.0;
        for (const auto& f : spaces) sum += wcss(f, report.assignment);
        curve.ks.push_back(k);
        curve.wcss.push_back(sum / static_cast<double>(used));
    }
    return curve;
}

std::vector<std::pair<int, double>> second_differences(const ElbowCurve& curve) {
    std::vector<std::pair<int, double>> out;
    for (std::size_t i = 1; i + 1 < curve.wcss.size(); ++i) {
        out.emplace_back(curve.ks[i],
                         curve.wcss[i - 1] - 2.0 * curve.wcss[i] + curve.wcss[i + 1]);
    }
    return out;
}

std::optional<int> elbow_k(const ElbowCurve& curve) {
    const auto diffs = second_differences(curve);
    if (diffs.empty()) return std::nullopt;
    const auto best = std::max_element(diffs.begin(), diffs.end(), [](const auto& a, const auto& b) {
        return a.second < b.second;
    });
    return best->first;
}

}  // namespace rwc
