#include "rwc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "rwc/feature_extractor.hpp"
#include "rwc/hbgf_ensemble.hpp"
#include "rwc/kmeans.hpp"
#include "rwc/metrics.hpp"
#include "rwc/rng.hpp"
#include "rwc/selection.hpp"

namespace rwc {

namespace {

void check_run_inputs(const TimeSeriesDataset& dataset, const Hyperparams& hp) {
    hp.validate();
    if (dataset.size() < static_cast<std::size_t>(hp.k)) {
        throw std::invalid_argument("dataset has " + std::to_string(dataset.size()) +
                                    " instances, fewer than k = " + std::to_string(hp.k));
    }
    if (dataset.length() < 2) throw std::invalid_argument("series length must be at least 2");
}

// Runs fn(i) for i in [begin, end) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, int jobs, Fn&& fn) {
    const std::size_t count = end > begin ? end - begin : 0;
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1 || count <= 1) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{begin};
    std::vector<std::thread> pool;
    const std::size_t spawn = std::min(workers, count);
    pool.reserve(spawn);
    for (std::size_t w = 0; w < spawn; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < end; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

ClusteringEnsemble run_branches_checked(const TimeSeriesDataset& dataset, const Hyperparams& hp,
                                        std::size_t begin, std::size_t end, int jobs) {
    const std::size_t count = end > begin ? end - begin : 0;
    std::vector<ClusterAssignment> results(count);
    std::vector<std::exception_ptr> errors(count);
    parallel_for(begin, end, jobs, [&](std::size_t i) {
        try {
            results[i - begin] = run_branch(dataset, hp, i);
        } catch (...) {
            errors[i - begin] = std::current_exception();
        }
    });
    for (std::size_t j = 0; j < count; ++j) {
        if (!errors[j]) continue;
        try {
            std::rethrow_exception(errors[j]);
        } catch (const std::exception& e) {
            throw BranchError(begin + j, e.what());
        }
    }
    const auto bounds = size_bounds(dataset.size(), hp);
    ClusteringEnsemble ensemble;
    for (auto& c : results) {
        const double v = count_violations(c, bounds.lower, bounds.upper);
        ensemble.add(std::move(c), v);
    }
    return ensemble;
}

}  // namespace

FeatureMatrix branch_features(const TimeSeriesDataset& dataset, const Hyperparams& hp,
                              std::size_t branch_index) {
    const std::uint64_t seed = branch_seed(hp.master_seed, branch_index);
    const auto params =
        make_block_params(stream_seed(seed, Stream::network_params), dataset.length(), hp);
    return extract_features(dataset, params);
}

ClusterAssignment run_branch(const TimeSeriesDataset& dataset, const Hyperparams& hp,
                             std::size_t branch_index) {
    const std::uint64_t seed = branch_seed(hp.master_seed, branch_index);
    const auto features = branch_features(dataset, hp, branch_index);
    KmeansConfig cfg;
    cfg.k = hp.k;
    cfg.n_init = hp.kmeans_n_init;
    cfg.max_iter = hp.kmeans_max_iter;
    cfg.tol = hp.kmeans_tol;
    cfg.seed = stream_seed(seed, Stream::branch_kmeans);
    return kmeans_fit(features, cfg).assignment;
}

ClusteringEnsemble run_branches(const TimeSeriesDataset& dataset, const Hyperparams& hp,
                                std::size_t begin, std::size_t end, int jobs) {
    check_run_inputs(dataset, hp);
    return run_branches_checked(dataset, hp, begin, end, jobs);
}

RunReport run(const TimeSeriesDataset& dataset, const Hyperparams& hp, const RunOptions& options) {
    check_run_inputs(dataset, hp);
    const auto start = std::chrono::steady_clock::now();
    const auto total = static_cast<std::size_t>(hp.branches);
    const auto bounds = size_bounds(dataset.size(), hp);

    ClusteringEnsemble ensemble;
    if (options.checkpoint) {
        const CheckpointHeader header{dataset.size(), dataset.length(), hp.k, hp.master_seed};
        if (std::filesystem::exists(*options.checkpoint)) {
            CheckpointHeader found;
            ensemble = read_checkpoint(*options.checkpoint, found);
            if (!(found == header)) {
                throw std::invalid_argument("checkpoint " + options.checkpoint->string() +
                                            " was written for a different run");
            }
            if (ensemble.size() > total) {
                ensemble.clusterings.resize(total);
                ensemble.violations.resize(total);
            }
            for (std::size_t i = 0; i < ensemble.size(); ++i) {
                if (ensemble.clusterings[i].size() != dataset.size() ||
                    ensemble.clusterings[i].k != hp.k) {
                    throw std::invalid_argument("checkpoint line " + std::to_string(i + 2) +
                                                " does not match the dataset");
                }
                ensemble.violations[i] =
                    count_violations(ensemble.clusterings[i], bounds.lower, bounds.upper);
            }
        } else {
            write_checkpoint(*options.checkpoint, header, {});
        }
        const std::size_t chunk = static_cast<std::size_t>(std::max(1, options.jobs)) * 8;
        for (std::size_t b = ensemble.size(); b < total; b += chunk) {
            const auto part = run_branches_checked(dataset, hp, b, std::min(total, b + chunk),
                                                   options.jobs);
            append_checkpoint(*options.checkpoint, part);
            ensemble.append(part);
        }
    } else {
        ensemble = run_branches_checked(dataset, hp, 0, total, options.jobs);
    }

    RunReport report;
    report.hyperparams = hp;
    report.bounds = bounds;
    for (double v : ensemble.violations) ++report.violation_histogram[v];

    const auto picked = select_indices(ensemble, SelectionConfig::from(hp, dataset.size()));
    report.selected_count = picked.indices.size();
    report.zero_violation = picked.zero_violation;

    if (hp.k == 1) {
        report.assignment = ClusterAssignment(std::vector<int>(dataset.size(), 0), 1);
    } else {
        std::vector<ClusterAssignment> selected;
        selected.reserve(picked.indices.size());
        for (std::size_t i : picked.indices) selected.push_back(ensemble.clusterings[i]);
        report.assignment =
            consensus(selected, hp.k, stream_seed(hp.master_seed, Stream::consensus));
    }

    if (dataset.has_labels() && dataset.size() >= 2) {
        report.rand_index_vs_truth = rand_index(
            report.assignment, ClusterAssignment(*dataset.labels(), dataset.num_classes()));
    }
    report.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    return report;
}

std::string CheckpointHeader::format() const {
    std::ostringstream out;
    out << "# rwclust-ensemble n=" << n << " m=" << m << " k=" << k << " seed=" << seed;
    return out.str();
}

CheckpointHeader CheckpointHeader::parse(const std::string& line) {
    std::istringstream in(line);
    std::string hash, tag;
    in >> hash >> tag;
    if (hash != "#" || tag != "rwclust-ensemble") {
        throw std::invalid_argument("not a checkpoint header: " + line);
    }
    CheckpointHeader h;
    bool seen[4] = {false, false, false, false};
    std::string field;
    while (in >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad checkpoint field: " + field);
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "n") {
            h.n = std::stoull(value);
            seen[0] = true;
        } else if (key == "m") {
            h.m = std::stoull(value);
            seen[1] = true;
        } else if (key == "k") {
            h.k = std::stoi(value);
            seen[2] = true;
        } else if (key == "seed") {
            h.seed = std::stoull(value);
            seen[3] = true;
        }
    }
    if (!(seen[0] && seen[1] && seen[2] && seen[3])) {
        throw std::invalid_argument("incomplete checkpoint header: " + line);
    }
    return h;
}

void write_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                      const ClusteringEnsemble& ensemble) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
    out << header.format() << '\n';
    for (const auto& c : ensemble.clusterings) out << c.serialize() << '\n';
}

void append_checkpoint(const std::filesystem::path& path, const ClusteringEnsemble& ensemble) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to checkpoint " + path.string());
    for (const auto& c : ensemble.clusterings) out << c.serialize() << '\n';
    out.flush();
}

ClusteringEnsemble read_checkpoint(const std::filesystem::path& path, CheckpointHeader& header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read checkpoint " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty checkpoint " + path.string());
    header = CheckpointHeader::parse(line);
    ClusteringEnsemble ensemble;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ensemble.add(ClusterAssignment::deserialize(line), 0.0);
    }
    return ensemble;
}

}  // namespace rwc
