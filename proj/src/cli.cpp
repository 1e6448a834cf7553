#include "rwc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rwc/io_ucr.hpp"
#include "rwc/metrics.hpp"
#include "rwc/pipeline.hpp"
#include "rwc/rng.hpp"
#include "rwc/simd/kernels.hpp"

namespace rwc::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PipelineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SourceOptions {
    std::string train;
    std::string test;
    int cbf_per_class = 0;
    int cbf_length = 128;
    std::uint64_t data_seed = 0;
    bool znorm = false;
};

struct ModelOptions {
    int k = 0;
    int branches = 800;
    double sr = 0.1;
    double lower = 0.3;
    double upper = 1.5;
    std::uint64_t seed = 42;
    bool fast = false;
    bool no_bias = false;
    int jobs = 1;
    std::string isa = "auto";
    CLI::Option* branches_opt = nullptr;
};

void add_source(CLI::App* cmd, SourceOptions& s) {
    cmd->add_option("--train", s.train, "UCR-format training file");
    cmd->add_option("--test", s.test, "UCR-format test file, fused after --train");
    cmd->add_option("--cbf", s.cbf_per_class,
                    "Use synthetic cylinder-bell-funnel data with this many series per class")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--cbf-length", s.cbf_length, "Length of synthetic CBF series")
        ->check(CLI::Range(16, 1 << 24));
    cmd->add_option("--data-seed", s.data_seed, "Seed for synthetic data");
    cmd->add_flag("--znorm", s.znorm, "z-normalise every series after loading");
}

void add_model(CLI::App* cmd, ModelOptions& o, bool with_k) {
    if (with_k) cmd->add_option("--k", o.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
    o.branches_opt = cmd->add_option("--branches", o.branches, "Number of branches B")
                         ->check(CLI::PositiveNumber);
    cmd->add_option("--sr", o.sr, "Selection rate")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--lower-mult", o.lower, "Lower cluster-size bound, as a multiple of n/k");
    cmd->add_option("--upper-mult", o.upper, "Upper cluster-size bound, as a multiple of n/k");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_flag("--fast", o.fast, "Scaling-study profile: 1 k-means init, 100 branches");
    cmd->add_flag("--no-bias", o.no_bias, "Zero all network biases");
    cmd->add_option("--jobs", o.jobs, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--isa", o.isa, "Kernel set")->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

Hyperparams make_hyperparams(const ModelOptions& o, int k) {
    Hyperparams hp;
    hp.k = k;
    hp.branches = o.branches;
    hp.selection_rate = o.sr;
    hp.lower_mult = o.lower;
    hp.upper_mult = o.upper;
    hp.master_seed = o.seed;
    hp.use_bias = !o.no_bias;
    if (o.fast) {
        hp = Hyperparams::fast_profile(hp);
        if (o.branches_opt && o.branches_opt->count() > 0) hp.branches = o.branches;
    }
    try {
        hp.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return hp;
}

void apply_isa(const std::string& name) {
    if (name == "auto") {
        simd::reset_active_isa();
        return;
    }
    const auto isa = simd::parse_isa(name);
    if (!isa || !simd::isa_available(*isa)) {
        throw UsageError("kernel set '" + name + "' is not available on this machine");
    }
    simd::set_active_isa(*isa);
}

TimeSeriesDataset load_source(const SourceOptions& s) {
    const bool from_file = !s.train.empty();
    const bool synthetic = s.cbf_per_class > 0;
    if (from_file == synthetic) throw UsageError("give exactly one of --train or --cbf");
    if (!s.test.empty() && !from_file) throw UsageError("--test requires --train");
    TimeSeriesDataset ds;
    if (synthetic) {
        ds = generate_cbf(static_cast<std::size_t>(s.cbf_per_class),
                          static_cast<std::size_t>(s.cbf_length), s.data_seed);
    } else {
        try {
            std::optional<std::filesystem::path> test;
            if (!s.test.empty()) test = s.test;
            ds = load_ucr(s.train, test);
        } catch (const std::exception& e) {
            throw IoError(e.what());
        }
    }
    return s.znorm ? znormalize(ds) : ds;
}

void require_k_fits(int k, const TimeSeriesDataset& ds) {
    if (static_cast<std::size_t>(k) > ds.size()) {
        throw UsageError("k = " + std::to_string(k) + " exceeds the " + std::to_string(ds.size()) +
                         " instances in " + ds.name());
    }
}

RunReport run_pipeline(const TimeSeriesDataset& ds, const Hyperparams& hp, const RunOptions& opts) {
    try {
        return rwc::run(ds, hp, opts);
    } catch (const std::exception& e) {
        throw PipelineError(e.what());
    }
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::trunc) {
    std::ofstream f(path, std::ios::out | mode);
    if (!f) throw IoError("cannot write " + path);
    return f;
}

// Writes CSV text to --out if given, else to stdout.
void emit_csv(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    auto f = open_output(path);
    f << text;
    if (!f) throw IoError("failed writing " + path);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// ---- cluster ---------------------------------------------------------------

struct ClusterCmd {
    SourceOptions source;
    ModelOptions model;
    std::string out;
    std::string labels_out;
    std::string checkpoint;
};

int cmd_cluster(const ClusterCmd& c, std::ostream& out) {
    apply_isa(c.model.isa);
    const auto ds = load_source(c.source);
    require_k_fits(c.model.k, ds);
    const auto hp = make_hyperparams(c.model, c.model.k);
    if (ds.length() < 2) throw UsageError("series must have length >= 2");

    RunOptions opts;
    opts.jobs = c.model.jobs;
    if (!c.checkpoint.empty()) opts.checkpoint = c.checkpoint;
    const auto report = run_pipeline(ds, hp, opts);

    RunRecord rec;
    rec.dataset = ds.name();
    rec.n = ds.size();
    rec.m = ds.length();
    rec.k = hp.k;
    rec.branches = hp.branches;
    rec.selection_rate = hp.selection_rate;
    rec.seed = hp.master_seed;
    rec.rand_index = report.rand_index_vs_truth;
    rec.selected = report.selected_count;
    rec.wall_time_ms = report.wall_time_ms;

    if (!c.out.empty()) append_record(c.out, rec);
    if (!c.labels_out.empty()) {
        auto f = open_output(c.labels_out);
        for (int l : report.assignment.labels) f << l << '\n';
        if (!f) throw IoError("failed writing " + c.labels_out);
    }
    out << "selected_S=" << report.selected_count << '\n';
    if (report.rand_index_vs_truth) out << "rand_index=" << format_double(*report.rand_index_vs_truth) << '\n';
    return ExitCode::ok;
}

// ---- elbow -----------------------------------------------------------------

struct ElbowCmd {
    SourceOptions source;
    ModelOptions model;
    int k_min = 2;
    int k_max = 8;
    std::string out;
};

int cmd_elbow(const ElbowCmd& c, std::ostream& out) {
    apply_isa(c.model.isa);
    if (c.k_min > c.k_max) throw UsageError("--k-min must not exceed --k-max");
    const auto ds = load_source(c.source);
    require_k_fits(c.k_max, ds);
    const auto hp = make_hyperparams(c.model, c.k_min);
    std::vector<int> ks;
    for (int k = c.k_min; k <= c.k_max; ++k) ks.push_back(k);

    ElbowCurve curve;
    try {
        curve = elbow_curve(ds, hp, ks, c.model.jobs);
    } catch (const std::exception& e) {
        throw PipelineError(e.what());
    }
    std::ostringstream csv;
    csv << "k,wcss\n";
    for (std::size_t i = 0; i < curve.ks.size(); ++i) {
        csv << curve.ks[i] << ',' << format_double(curve.wcss[i]) << '\n';
    }
    emit_csv(c.out, csv.str(), out);
    if (const auto best = elbow_k(curve)) out << "elbow_k=" << *best << '\n';
    return ExitCode::ok;
}

// ---- scale-test ------------------------------------------------------------

struct ScaleCmd {
    std::string mode = "instances";
    std::vector<int> sizes;
    ModelOptions model;
    int reps = 3;
    int fixed_n = 120;
    int base_length = 128;
    std::uint64_t data_seed = 0;
    std::string out;
};

int cmd_scale_test(const ScaleCmd& c, std::ostream& out) {
    apply_isa(c.model.isa);
    if (c.sizes.size() < 4) throw UsageError("--sizes needs at least 4 values");
    if (!std::is_sorted(c.sizes.begin(), c.sizes.end()) ||
        std::adjacent_find(c.sizes.begin(), c.sizes.end()) != c.sizes.end()) {
        throw UsageError("--sizes must be strictly ascending");
    }
    const bool by_length = c.mode == "length";
    if (by_length && c.sizes.front() < c.base_length) {
        throw UsageError("length sizes must be at least the base length " +
                         std::to_string(c.base_length));
    }
    ModelOptions model = c.model;
    model.fast = true;
    model.k = 3;
    const auto hp = make_hyperparams(model, 3);

    std::vector<double> xs, ys;
    std::ostringstream csv;
    csv << "size,n,m,mean_ms,rand_index\n";
    for (int size : c.sizes) {
        TimeSeriesDataset ds;
        if (by_length) {
            const auto per_class = static_cast<std::size_t>(std::max(1, c.fixed_n / 3));
            ds = pad_with_noise(generate_cbf(per_class, static_cast<std::size_t>(c.base_length), c.data_seed),
                                static_cast<std::size_t>(size),
                                stream_seed(c.data_seed, Stream::noise));
        } else {
            const auto per_class = static_cast<std::size_t>(std::max(1L, std::lround(size / 3.0)));
            ds = generate_cbf(per_class, static_cast<std::size_t>(c.base_length), c.data_seed);
        }
        RunOptions opts;
        opts.jobs = model.jobs;
        double total_ms = 0.0;
        std::optional<double> ri;
        for (int r = 0; r < c.reps; ++r) {
            const auto start = std::chrono::steady_clock::now();
            const auto report = run_pipeline(ds, hp, opts);
            total_ms += elapsed_ms(start);
            ri = report.rand_index_vs_truth;
        }
        const double mean_ms = total_ms / c.reps;
        xs.push_back(static_cast<double>(by_length ? ds.length() : ds.size()));
        ys.push_back(mean_ms);
        csv << size << ',' << ds.size() << ',' << ds.length() << ',' << format_double(mean_ms) << ','
            << (ri ? format_double(*ri) : "") << '\n';
    }
    emit_csv(c.out, csv.str(), out);
    const auto fit = fit_line(xs, ys);
    out << "slope=" << format_double(fit.slope) << " intercept=" << format_double(fit.intercept)
        << " r2=" << format_double(fit.r2) << '\n';
    return ExitCode::ok;
}

// ---- noise-test ------------------------------------------------------------

struct NoiseCmd {
    SourceOptions source;
    ModelOptions model;
    std::vector<double> scales = default_noise_scales();
    int seeds = 10;
    std::string out;
};

int cmd_noise_test(const NoiseCmd& c, std::ostream& out) {
    apply_isa(c.model.isa);
    const auto ds = load_source(c.source);
    if (!ds.has_labels()) throw UsageError("noise-test needs ground-truth labels");
    require_k_fits(c.model.k, ds);
    for (double s : c.scales) {
        if (!(s >= 0.0)) throw UsageError("noise scales must be non-negative");
    }
    std::ostringstream csv;
    csv << "scale,mean_rand_index\n";
    for (double scale : c.scales) {
        double sum = 0.0;
        for (int j = 0; j < c.seeds; ++j) {
            ModelOptions model = c.model;
            model.seed = c.model.seed + static_cast<std::uint64_t>(j);
            const auto hp = make_hyperparams(model, c.model.k);
            const auto noisy = inject_noise(ds, scale, stream_seed(model.seed, Stream::noise));
            RunOptions opts;
            opts.jobs = model.jobs;
            sum += run_pipeline(noisy, hp, opts).rand_index_vs_truth.value_or(0.0);
        }
        csv << format_double(scale) << ',' << format_double(sum / c.seeds) << '\n';
    }
    emit_csv(c.out, csv.str(), out);
    return ExitCode::ok;
}

std::optional<double> parse_optional_double(const std::string& field) {
    if (field.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::invalid_argument("bad number '" + field + "'");
    }
    return v;
}

}  // namespace

const char* RunRecord::header() {
    return "dataset,n,m,k,B,sr,seed,rand_index,selected_S,wall_time_ms";
}

std::string RunRecord::to_row() const {
    std::ostringstream o;
    o << dataset << ',' << n << ',' << m << ',' << k << ',' << branches << ','
      << format_double(selection_rate) << ',' << seed << ','
      << (rand_index ? format_double(*rand_index) : "") << ',' << selected << ',' << wall_time_ms;
    return o.str();
}

RunRecord RunRecord::parse(const std::string& row) {
    std::vector<std::string> f;
    std::string cell;
    std::istringstream in(row);
    while (std::getline(in, cell, ',')) f.push_back(cell);
    if (!row.empty() && row.back() == ',') f.emplace_back();
    if (f.size() != 10) throw std::invalid_argument("run record needs 10 fields: " + row);
    RunRecord r;
    r.dataset = f[0];
    r.n = std::stoull(f[1]);
    r.m = std::stoull(f[2]);
    r.k = std::stoi(f[3]);
    r.branches = std::stoi(f[4]);
    r.selection_rate = parse_optional_double(f[5]).value_or(0.0);
    r.seed = std::stoull(f[6]);
    r.rand_index = parse_optional_double(f[7]);
    r.selected = std::stoull(f[8]);
    r.wall_time_ms = std::stoll(f[9]);
    return r;
}

void append_record(const std::string& path, const RunRecord& record) {
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
    auto f = open_output(path, std::ios::app);
    if (fresh) f << RunRecord::header() << '\n';
    f << record.to_row() << '\n';
    if (!f) throw IoError("failed writing " + path);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("linear fit needs two or more paired points");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("linear fit needs distinct x values");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<double> default_noise_scales() { return {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}; }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Training-free time series clustering with random-weight CNN-LSTM ensembles",
                 "rwclust"};
    app.require_subcommand(1);

    ClusterCmd cluster;
    auto* c = app.add_subcommand("cluster", "Cluster a dataset and write labels / a results row");
    add_source(c, cluster.source);
    add_model(c, cluster.model, true);
    c->add_option("--out", cluster.out, "Results CSV (appended; header written when new)");
    c->add_option("--labels-out", cluster.labels_out, "Consensus labels, one per line");
    c->add_option("--checkpoint", cluster.checkpoint, "Resumable branch-clustering file");

    ElbowCmd elbow;
    auto* e = app.add_subcommand("elbow", "WCSS curve over a range of k");
    add_source(e, elbow.source);
    add_model(e, elbow.model, false);
    e->add_option("--k-min", elbow.k_min, "Smallest k")->required()->check(CLI::PositiveNumber);
    e->add_option("--k-max", elbow.k_max, "Largest k")->required()->check(CLI::PositiveNumber);
    e->add_option("--out", elbow.out, "Curve CSV (k,wcss); stdout when omitted");

    ScaleCmd scale;
    auto* s = app.add_subcommand("scale-test", "Runtime versus dataset size on synthetic CBF data");
    s->add_option("--mode", scale.mode, "instances or length")
        ->check(CLI::IsMember({"instances", "length"}));
    s->add_option("--sizes", scale.sizes, "Ascending sizes, comma separated")
        ->required()
        ->delimiter(',');
    add_model(s, scale.model, false);
    s->add_option("--reps", scale.reps, "Timed repetitions per size")->check(CLI::PositiveNumber);
    s->add_option("--n", scale.fixed_n, "Instances in length mode")->check(CLI::Range(3, 1 << 24));
    s->add_option("--base-length", scale.base_length, "CBF length before noise padding")
        ->check(CLI::Range(16, 1 << 24));
    s->add_option("--data-seed", scale.data_seed, "Seed for synthetic data");
    s->add_option("--out", scale.out, "Timing CSV; stdout when omitted");

    NoiseCmd noise;
    auto* nz = app.add_subcommand("noise-test", "Mean Rand Index under added Gaussian noise");
    add_source(nz, noise.source);
    add_model(nz, noise.model, true);
    nz->add_option("--scales", noise.scales, "Noise standard deviations, comma separated")
        ->delimiter(',');
    nz->add_option("--seeds", noise.seeds, "Master seeds per scale (seed, seed+1, ...)")
        ->check(CLI::PositiveNumber);
    nz->add_option("--out", noise.out, "Result CSV; stdout when omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        if (code != 0) err << app.help();
        return code == 0 ? ExitCode::ok : ExitCode::bad_flags;
    }

    try {
        if (*c) return cmd_cluster(cluster, out);
        if (*e) return cmd_elbow(elbow, out);
        if (*s) return cmd_scale_test(scale, out);
        if (*nz) return cmd_noise_test(noise, out);
    } catch (const UsageError& ex) {
        err << "error: " << ex.what() << '\n';
        return ExitCode::bad_flags;
    } catch (const IoError& ex) {
        err << "error: " << ex.what() << '\n';
        return ExitCode::io_failure;
    } catch (const PipelineError& ex) {
        err << "error: " << ex.what() << '\n';
        return ExitCode::pipeline_failure;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return ExitCode::pipeline_failure;
    }
    return ExitCode::bad_flags;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rwc::cli
