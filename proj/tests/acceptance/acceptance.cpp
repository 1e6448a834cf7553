// Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion; exits
// non-zero when any selected criterion fails.
//
//   acceptance            run every criterion
//   acceptance 5 9        run only criteria 5 and 9
//
// Criterion 6 needs the UCR archive; point RWC_UCR_DIR at the directory that
// holds Coffee/ and InsectEPGRegularTrain/ (each with *_TRAIN.tsv and
// *_TEST.tsv). It is skipped when the variable is unset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "planted.hpp"
#include "rwc/cli.hpp"
#include "rwc/feature_extractor.hpp"
#include "rwc/hbgf_ensemble.hpp"
#include "rwc/io_ucr.hpp"
#include "rwc/kmeans.hpp"
#include "rwc/metrics.hpp"
#include "rwc/pipeline.hpp"
#include "rwc/rng.hpp"
#include "rwc/selection.hpp"
#include "temp_dir.hpp"

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
    Status status;
    std::string detail;
};

Outcome verdict(bool ok, std::string detail) {
    return {ok ? Status::pass : Status::fail, std::move(detail)};
}

std::string fmt(double v, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << std::fixed << v;
    return s.str();
}

// ---------------------------------------------------------------------------

Outcome bound_closed_form() {
    const double b = rwc::ensemble_size_lower_bound(0.01, 0.3);
    return verdict(std::abs(b - 102.33) <= 0.01, "bound(0.01, 0.3) = " + fmt(b));
}

Outcome violation_example() {
    const double v = rwc::count_violations(std::vector<int>{40, 52}, 5, 50);
    return verdict(v == 2.0, "violations({40, 52}, 5, 50) = " + fmt(v, 1));
}

Outcome rand_index_fuzz() {
    rwc::Rng rng(20240601);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.below(11);
        const int ka = 1 + static_cast<int>(rng.below(6));
        const int kb = 1 + static_cast<int>(rng.below(6));
        std::vector<int> a(n), b(n);
        for (auto& v : a) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(ka)));
        for (auto& v : b) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(kb)));
        const double fast = rwc::rand_index(rwc::ClusterAssignment(a, ka), rwc::ClusterAssignment(b, kb));
        if (fast != oracle::rand_index_pairs(a, b)) ++mismatches;
    }
    return verdict(mismatches == 0, std::to_string(1000 - mismatches) + "/1000 exact matches");
}

Outcome planted_consensus() {
    constexpr std::size_t n = 40, members = 70, relevant = 21;  // gamma = 0.3
    const auto truth = planted::halves(n);
    int recovered = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const auto ensemble = planted::ensemble(n, relevant, members - relevant, 1000 + trial);
        if (rwc::rand_index(rwc::consensus(ensemble, 2, trial), truth) == 1.0) ++recovered;
    }
    return verdict(recovered >= 95, std::to_string(recovered) + "/100 trials with RI = 1.0");
}

std::vector<double> cbf_rand_indices(bool znorm) {
    std::vector<double> ri;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto ds = rwc::generate_cbf(100, 128, seed);
        if (znorm) ds = rwc::znormalize(ds);
        rwc::Hyperparams hp;
        hp.k = 3;
        hp.master_seed = seed;
        ri.push_back(*rwc::run(ds, hp).rand_index_vs_truth);
    }
    return ri;
}

Outcome cbf_accuracy() {
    const auto ri = cbf_rand_indices(false);
    int hits = 0;
    std::string list;
    for (double v : ri) {
        hits += v >= 0.90;
        list += (list.empty() ? "" : " ") + fmt(v, 3);
    }
    // Not a criterion: the same runs on per-series z-normalised input.
    const auto zri = cbf_rand_indices(true);
    int zhits = 0;
    for (double v : zri) zhits += v >= 0.90;
    return verdict(hits >= 8, std::to_string(hits) + "/10 seeds with RI >= 0.90 [" + list +
                                  "]; z-normalised input for reference: " + std::to_string(zhits) +
                                  "/10");
}

Outcome ucr_spot_check() {
    const char* root = std::getenv("RWC_UCR_DIR");
    if (root == nullptr) return {Status::skip, "RWC_UCR_DIR not set"};
    const std::filesystem::path dir(root);
    auto load = [&](const std::string& name) {
        return rwc::load_ucr(dir / name / (name + "_TRAIN.tsv"), dir / name / (name + "_TEST.tsv"));
    };
    std::string detail;
    bool ok = true;
    try {
        const auto coffee = load("Coffee");
        int hits = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            rwc::Hyperparams hp;
            hp.k = coffee.num_classes();
            hp.master_seed = seed;
            hits += *rwc::run(coffee, hp).rand_index_vs_truth >= 0.95;
        }
        ok = ok && hits >= 6;
        detail += "Coffee " + std::to_string(hits) + "/10 seeds with RI >= 0.95";

        const auto insect = load("InsectEPGRegularTrain");
        rwc::Hyperparams hp;
        hp.k = insect.num_classes();
        const double ri = *rwc::run(insect, hp).rand_index_vs_truth;
        ok = ok && ri >= 0.95;
        detail += "; InsectEPGRegularTrain RI " + fmt(ri, 3);
    } catch (const std::exception& e) {
        return {Status::fail, e.what()};
    }
    return verdict(ok, detail);
}

Outcome scaling(const std::vector<std::string>& args, double threshold) {
    std::ostringstream out, err;
    std::vector<std::string> full{"rwclust", "scale-test"};
    full.insert(full.end(), args.begin(), args.end());
    if (rwc::cli::run(full, out, err) != 0) return {Status::fail, err.str()};
    const auto text = out.str();
    const auto pos = text.find("r2=");
    if (pos == std::string::npos) return {Status::fail, "no r2 in output"};
    const double r2 = std::stod(text.substr(pos + 3));
    return verdict(r2 >= threshold, "R^2 = " + fmt(r2));
}

Outcome scaling_instances() {
    return scaling({"--mode", "instances", "--sizes", "200,500,1000,2000,4000"}, 0.95);
}

Outcome scaling_length() {
    return scaling({"--mode", "length", "--sizes", "256,512,1024,2048"}, 0.90);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    TempDir dir;
    auto cluster = [&](int jobs, const std::string& name) {
        const auto labels = dir / name;
        const std::string cmd = std::string("\"") + RWC_CLI_PATH +
                                "\" cluster --cbf 100 --k 3 --seed 11 --data-seed 11 --jobs " +
                                std::to_string(jobs) + " --labels-out \"" + labels.string() +
                                "\" > /dev/null";
        if (std::system(cmd.c_str()) != 0) return std::string();
        return slurp(labels);
    };
    const auto a = cluster(1, "a.txt");
    const auto b = cluster(1, "b.txt");
    const auto c = cluster(3, "c.txt");
    if (a.empty()) return {Status::fail, "cluster run failed"};
    return verdict(a == b && a == c,
                   std::string("repeat ") + (a == b ? "identical" : "differs") + ", jobs 1 vs 3 " +
                       (a == c ? "identical" : "differs"));
}

Outcome kernel_oracles() {
    rwc::Rng rng(777);
    rwc::Hyperparams hp;
    double worst = 0.0;
    auto track = [&](const std::vector<double>& a, const std::vector<double>& b) {
        if (a.size() != b.size()) {
            worst = INFINITY;
            return;
        }
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    };
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 2 + rng.below(31);
        rwc::TimeSeries s;
        for (std::size_t t = 0; t < m; ++t) s.values.push_back(2.0 * rng.normal());
        const auto params = rwc::make_block_params(rng.next(), m, hp);

        rwc::FeatureMap x(1, m, s.values);
        for (const auto& g : params.conv_groups) {
            const auto y = rwc::conv1d_forward(x, g);
            track(y.data, oracle::conv_same(x, g).data);
            auto r = y;
            rwc::relu(r.data);
            auto ro = y;
            oracle::relu(ro);
            track(r.data, ro.data);
            const auto p = rwc::max_pool(r, params.pool_size);
            track(p.data, oracle::pool(ro, params.pool_size).data);
            x = p;
        }
        track(rwc::lstm_forward(x, params.lstm), oracle::lstm(x, params.lstm));
        track(rwc::block_forward(s, params), oracle::block(s, params));
    }

    int increases = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 10 + rng.below(90), d = 1 + rng.below(8);
        const int k = 2 + static_cast<int>(rng.below(5));
        rwc::Matrix x(n, d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) x(i, j) = rng.normal() + static_cast<double>(i % 3);
        const auto res = rwc::kmeans_fit(x, {.k = k, .n_init = 1, .seed = rng.next()});
        for (std::size_t t = 1; t < res.inertia_trace.size(); ++t)
            increases += res.inertia_trace[t] > res.inertia_trace[t - 1];
    }
    return verdict(worst <= 1e-9 && increases == 0,
                   "max abs deviation " + std::to_string(worst) + ", inertia increases " +
                       std::to_string(increases));
}

Outcome elbow() {
    int hits = 0;
    std::string list;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto ds = rwc::generate_cbf(100, 128, seed);
        rwc::Hyperparams hp;
        hp.master_seed = seed;
        const auto curve = rwc::elbow_curve(ds, hp, {2, 3, 4, 5, 6, 7, 8});
        const int k = rwc::elbow_k(curve).value_or(-1);
        hits += k == 3;
        list += (list.empty() ? "" : " ") + std::to_string(k);
    }
    return verdict(hits >= 8, std::to_string(hits) + "/10 seeds with the elbow at k=3 [" + list + "]");
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "ensemble size bound", bound_closed_form},
        {2, "violation example", violation_example},
        {3, "rand index oracle", rand_index_fuzz},
        {4, "planted consensus", planted_consensus},
        {5, "CBF accuracy", cbf_accuracy},
        {6, "UCR spot check", ucr_spot_check},
        {7, "linear scaling in n", scaling_instances},
        {8, "linear scaling in m", scaling_length},
        {9, "determinism", determinism},
        {10, "kernel oracles", kernel_oracles},
        {11, "elbow", elbow},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {Status::fail, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
        std::cout << "AC" << c.id << ' ' << tag << ' ' << c.name << ": " << o.detail << " ("
                  << fmt(secs, 1) << " s)" << std::endl;
        failures += o.status == Status::fail;
    }
    return failures == 0 ? 0 : 1;
}
