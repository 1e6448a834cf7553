#include "doctest.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rwc/cli.hpp"
#include "temp_dir.hpp"

using namespace rwc::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "rwclust");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string golden(const std::string& name) {
    return slurp(std::filesystem::path(RWC_GOLDEN_DIR) / name);
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string value_of(const std::string& out, const std::string& key) {
    const auto pos = out.find(key + "=");
    REQUIRE(pos != std::string::npos);
    const auto start = pos + key.size() + 1;
    return out.substr(start, out.find_first_of(" \n", start) - start);
}

}  // namespace

TEST_CASE("usage errors match the golden text") {
    auto r = invoke({"cluster", "--cbf", "10"});
    CHECK(r.code == ExitCode::bad_flags);
    CHECK(r.err == golden("cluster_missing_k.txt"));

    r = invoke({});
    CHECK(r.code == ExitCode::bad_flags);
    CHECK(r.err == golden("no_subcommand.txt"));

    r = invoke({"cluster", "--cbf", "10", "--k", "2", "--isa", "neon"});
    CHECK(r.code == ExitCode::bad_flags);
    CHECK(r.err == golden("bad_isa.txt"));
}

TEST_CASE("help exits cleanly") {
    const auto r = invoke({"--help"});
    CHECK(r.code == ExitCode::ok);
    CHECK(r.out.find("scale-test") != std::string::npos);
}

TEST_CASE("flag validation") {
    CHECK(invoke({"elbow", "--cbf", "2", "--k-min", "2", "--k-max", "9"}).code == ExitCode::bad_flags);
    CHECK(invoke({"scale-test", "--sizes", "1,2,3"}).code == ExitCode::bad_flags);
    CHECK(invoke({"scale-test", "--sizes", "200,100,300,400"}).code == ExitCode::bad_flags);
    CHECK(invoke({"cluster", "--k", "2"}).code == ExitCode::bad_flags);
    CHECK(invoke({"cluster", "--cbf", "3", "--k", "2", "--lower-mult", "2", "--upper-mult", "1"}).code ==
          ExitCode::bad_flags);
    CHECK(invoke({"cluster", "--cbf", "3", "--k", "2", "--sr", "1.5"}).code == ExitCode::bad_flags);
}

TEST_CASE("input and output failures") {
    TempDir dir;
    CHECK(invoke({"cluster", "--train", (dir / "none.tsv").string(), "--k", "2"}).code ==
          ExitCode::io_failure);
    std::ofstream(dir / "bad.csv") << "1,5,3\n2,abc,4\n";
    const auto r = invoke({"cluster", "--train", (dir / "bad.csv").string(), "--k", "2"});
    CHECK(r.code == ExitCode::io_failure);
    CHECK(r.err.find("bad.csv:2:") != std::string::npos);
    CHECK(invoke({"cluster", "--cbf", "3", "--k", "2", "--branches", "2", "--out",
                  (dir / "no" / "such" / "x.csv").string()})
              .code == ExitCode::io_failure);
}

TEST_CASE("a checkpoint from another run is a pipeline failure") {
    TempDir dir;
    const auto ck = (dir / "ck.txt").string();
    const std::vector<std::string> base{"cluster", "--cbf", "4", "--cbf-length", "32", "--k", "2",
                                        "--branches", "3", "--checkpoint", ck};
    auto first = base;
    first.insert(first.end(), {"--seed", "1"});
    CHECK(invoke(first).code == ExitCode::ok);
    auto second = base;
    second.insert(second.end(), {"--seed", "2"});
    CHECK(invoke(second).code == ExitCode::pipeline_failure);
}

TEST_CASE("single-branch cluster run writes labels and a results row") {
    TempDir dir;
    const auto csv = (dir / "runs.csv").string();
    const auto labels = (dir / "labels.txt").string();
    const std::vector<std::string> args{"cluster", "--cbf", "5", "--cbf-length", "64", "--k", "3",
                                        "--branches", "1", "--seed", "4", "--out", csv,
                                        "--labels-out", labels};
    const auto r = invoke(args);
    REQUIRE(r.code == ExitCode::ok);
    CHECK(value_of(r.out, "selected_S") == "1");
    CHECK(lines(slurp(labels)).size() == 15);

    REQUIRE(invoke(args).code == ExitCode::ok);
    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == RunRecord::header());
    const auto a = RunRecord::parse(rows[1]);
    const auto b = RunRecord::parse(rows[2]);
    CHECK(a.dataset == "CBF");
    CHECK(a.n == 15);
    CHECK(a.m == 64);
    CHECK(a.k == 3);
    CHECK(a.branches == 1);
    CHECK(a.seed == 4);
    CHECK(a.selected == 1);
    REQUIRE(a.rand_index.has_value());
    CHECK(*a.rand_index == *b.rand_index);
    CHECK(format_double(*a.rand_index) == value_of(r.out, "rand_index"));
}

TEST_CASE("results rows round trip") {
    RunRecord r{"Coffee", 56, 286, 2, 800, 0.1, 18446744073709551615ULL, 0.1 + 0.2, 80, 1234};
    CHECK(RunRecord::parse(r.to_row()) == r);
    r.rand_index.reset();
    CHECK(RunRecord::parse(r.to_row()) == r);
    CHECK_THROWS(RunRecord::parse("a,b,c"));
}

TEST_CASE("number formatting is shortest round trip") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1 + 0.2) == "0.30000000000000004");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("least squares line") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{3, 5, 7, 9};
    const auto fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
    CHECK(fit.r2 == doctest::Approx(1.0));
    const std::vector<double> noisy{1, 3, 2, 4};
    // Hand computation: slope 0.8, intercept 0.5, r2 0.64.
    const auto f2 = fit_line(x, noisy);
    CHECK(f2.slope == doctest::Approx(0.8));
    CHECK(f2.intercept == doctest::Approx(0.5));
    CHECK(f2.r2 == doctest::Approx(0.64));
}

TEST_CASE("elbow with a single k writes one row") {
    TempDir dir;
    const auto out = (dir / "curve.csv").string();
    const auto r = invoke({"elbow", "--cbf", "4", "--cbf-length", "32", "--branches", "4", "--k-min",
                           "3", "--k-max", "3", "--out", out});
    REQUIRE(r.code == ExitCode::ok);
    const auto rows = lines(slurp(out));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "k,wcss");
    CHECK(rows[1].rfind("3,", 0) == 0);
}

TEST_CASE("scale test rand index columns repeat across runs") {
    TempDir dir;
    const auto run_once = [&](const std::string& name) {
        const auto out = (dir / name).string();
        const auto r = invoke({"scale-test", "--mode", "instances", "--sizes", "12,15,18,21", "--reps",
                               "1", "--branches", "4", "--base-length", "32", "--out", out});
        REQUIRE(r.code == ExitCode::ok);
        CHECK(r.out.find("r2=") != std::string::npos);
        std::vector<std::string> ri;
        for (const auto& row : lines(slurp(out))) ri.push_back(row.substr(row.rfind(',') + 1));
        return ri;
    };
    const auto a = run_once("a.csv");
    const auto b = run_once("b.csv");
    REQUIRE(a.size() == 5);
    CHECK(a.front() == "rand_index");
    CHECK(a == b);
}

TEST_CASE("noise test writes one row per scale") {
    TempDir dir;
    const auto out = (dir / "noise.csv").string();
    const auto r = invoke({"noise-test", "--cbf", "4", "--cbf-length", "32", "--k", "3", "--branches",
                           "3", "--seeds", "2", "--scales", "0.1,0.5", "--out", out});
    REQUIRE(r.code == ExitCode::ok);
    const auto rows = lines(slurp(out));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "scale,mean_rand_index");
    CHECK(rows[1].rfind("0.1,", 0) == 0);
    CHECK(rows[2].rfind("0.5,", 0) == 0);
    CHECK(default_noise_scales() == std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4, 0.5});
}
