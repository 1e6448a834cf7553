#pragma once

// Batch command-line harness: cluster, elbow, scale-test, noise-test.
//
// Exit codes: 0 ok, 1 bad flags, 2 input/output failure, 3 pipeline failure.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace rwc::cli {

enum ExitCode : int { ok = 0, bad_flags = 1, io_failure = 2, pipeline_failure = 3 };

/// One row of the results CSV.
struct RunRecord {
    std::string dataset;
    std::size_t n = 0;
    std::size_t m = 0;
    int k = 0;
    int branches = 0;
    double selection_rate = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> rand_index;  // empty field when no ground truth
    std::size_t selected = 0;
    std::int64_t wall_time_ms = 0;

    static const char* header();
    std::string to_row() const;
    static RunRecord parse(const std::string& row);

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Appends `record` to a CSV, writing the header first if the file is new or empty.
void append_record(const std::string& path, const RunRecord& record);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Default noise levels for noise-test.
std::vector<double> default_noise_scales();

/// Entry point shared by the executable and the tests; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rwc::cli
