#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "oracles.hpp"
#include "rwc/kmeans.hpp"
#include "rwc/metrics.hpp"
#include "rwc/rng.hpp"

using namespace rwc;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

std::vector<double> row_of(const Matrix& m, std::size_t r) {
    return {m.row(r).begin(), m.row(r).end()};
}

}  // namespace

TEST_CASE("separated duplicates split perfectly") {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 5; ++i) rows.push_back({0, 0});
    for (int i = 0; i < 5; ++i) rows.push_back({10, 10});
    const auto res = kmeans_fit(from_rows(rows), {.k = 2, .seed = 3});
    CHECK(res.inertia == 0.0);
    const auto& l = res.assignment.labels;
    for (int i = 1; i < 5; ++i) CHECK(l[i] == l[0]);
    for (int i = 6; i < 10; ++i) CHECK(l[i] == l[5]);
    CHECK(l[0] != l[5]);
    CHECK(res.run_inertias.size() == 10);
}

TEST_CASE("k equal to n puts every point alone") {
    const auto x = from_rows({{0, 1}, {2, 3}, {5, 5}, {-1, 4}});
    const auto res = kmeans_fit(x, {.k = 4, .seed = 1});
    CHECK(res.inertia == 0.0);
    CHECK(std::set<int>(res.assignment.labels.begin(), res.assignment.labels.end()).size() == 4);
}

TEST_CASE("planted gaussian blobs are recovered") {
    Rng rng(8);
    const double centers[3][2] = {{0, 0}, {6, 0}, {0, 6}};
    Matrix x(60, 2);
    std::vector<int> truth(60);
    for (std::size_t i = 0; i < 60; ++i) {
        truth[i] = static_cast<int>(i % 3);
        for (std::size_t d = 0; d < 2; ++d) x(i, d) = centers[truth[i]][d] + 0.1 * rng.normal();
    }
    const auto res = kmeans_fit(x, {.k = 3, .seed = 17});
    CHECK(rand_index(res.assignment, ClusterAssignment(truth, 3)) == 1.0);
}

TEST_CASE("k-means errors") {
    const auto x = from_rows({{0}, {1}});
    CHECK_THROWS_AS(kmeans_fit(x, {.k = 3}), std::invalid_argument);
    CHECK_THROWS_AS(kmeans_fit(x, {.k = 0}), std::invalid_argument);
    CHECK_THROWS_AS(kmeans_fit(x, {.k = 1, .n_init = 0}), std::invalid_argument);
    auto bad = x;
    bad(1, 0) = std::nan("");
    CHECK_THROWS_AS(kmeans_fit(bad, {.k = 1}), std::invalid_argument);
}

TEST_CASE("k-means++ seeding") {
    SUBCASE("k = 1 picks an existing row, uniformly over seeds") {
        const auto x = from_rows({{0}, {1}, {2}, {3}});
        std::array<int, 4> counts{};
        for (std::uint64_t s = 0; s < 4000; ++s) {
            const auto c = kmeans_pp_init(x, 1, s);
            REQUIRE(c.rows() == 1);
            const double v = c(0, 0);
            REQUIRE((v == 0 || v == 1 || v == 2 || v == 3));
            ++counts[static_cast<std::size_t>(v)];
        }
        for (int n : counts) CHECK(std::abs(n - 1000) < 150);
    }
    SUBCASE("duplicates of chosen rows are never chosen again") {
        std::vector<std::vector<double>> rows;
        for (int rep = 0; rep < 20; ++rep) {
            rows.push_back({0, 0});
            rows.push_back({1, 5});
            rows.push_back({-3, 2});
        }
        const auto x = from_rows(rows);
        for (std::uint64_t s = 0; s < 200; ++s) {
            const auto c = kmeans_pp_init(x, 3, s);
            std::set<std::vector<double>> distinct;
            for (std::size_t r = 0; r < 3; ++r) distinct.insert(row_of(c, r));
            REQUIRE(distinct.size() == 3);
        }
    }
    SUBCASE("deterministic") {
        Rng rng(2);
        Matrix x(30, 4);
        for (std::size_t i = 0; i < 30; ++i)
            for (std::size_t d = 0; d < 4; ++d) x(i, d) = rng.normal();
        CHECK(kmeans_pp_init(x, 5, 77) == kmeans_pp_init(x, 5, 77));
    }
}

TEST_CASE("permuting rows permutes the assignment under fixed initial centroids") {
    Rng rng(12);
    Matrix x(40, 3);
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t d = 0; d < 3; ++d) x(i, d) = rng.normal() + (i % 2 ? 4.0 : 0.0);
    std::vector<std::size_t> perm(40);
    for (std::size_t i = 0; i < 40; ++i) perm[i] = (i * 7 + 3) % 40;
    Matrix xp(40, 3);
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t d = 0; d < 3; ++d) xp(i, d) = x(perm[i], d);
    const auto init = kmeans_pp_init(x, 3, 5);
    const KmeansConfig cfg{.k = 3, .n_init = 1};
    const auto a = kmeans_lloyd(x, init, cfg);
    const auto b = kmeans_lloyd(xp, init, cfg);
    for (std::size_t i = 0; i < 40; ++i) CHECK(b.assignment.labels[i] == a.assignment.labels[perm[i]]);
}

TEST_CASE("lloyd inertia never increases and matches the reported value") {
    Rng rng(404);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 5 + rng.below(60);
        const std::size_t d = 1 + rng.below(6);
        const int k = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(n, 6)));
        Matrix x(n, d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) x(i, j) = rng.normal() * (1 + rng.below(4));
        const auto res = kmeans_fit(x, {.k = k, .n_init = 2, .seed = rng.next()});
        REQUIRE_FALSE(res.inertia_trace.empty());
        for (std::size_t t = 1; t < res.inertia_trace.size(); ++t)
            REQUIRE(res.inertia_trace[t] <= res.inertia_trace[t - 1] * (1 + 1e-12) + 1e-12);
        const double direct = oracle::inertia(x, res.centroids, res.assignment.labels);
        REQUIRE(res.inertia == doctest::Approx(direct).epsilon(1e-9));
        REQUIRE(res.inertia == *std::min_element(res.run_inertias.begin(), res.run_inertias.end()));
    }
}

TEST_CASE("scalar and vector kernels give the same clustering") {
    const auto* vec = simd::kernels_for(simd::Isa::avx2);
    if (vec == nullptr) return;
    Rng rng(5);
    Matrix x(200, 16);
    for (std::size_t i = 0; i < 200; ++i)
        for (std::size_t d = 0; d < 16; ++d) x(i, d) = rng.normal() + static_cast<double>(i % 4);
    const KmeansConfig cfg{.k = 4, .seed = 9};
    const auto a = kmeans_fit(x, cfg, simd::scalar_kernels());
    const auto b = kmeans_fit(x, cfg, *vec);
    CHECK(a.assignment == b.assignment);
    CHECK(a.inertia == doctest::Approx(b.inertia).epsilon(1e-10));
}
