#pragma once

// UCR-format text loading, CSV writing, and synthetic/noise data sources.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rwc/core_data.hpp"
#include "rwc/rng.hpp"

namespace rwc {

/// Malformed input; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
          source_(std::move(source)), line_(line) {}

    const std::string& source() const { return source_; }
    std::size_t line() const { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

/// One row per series: class label, then values. Tab, comma or whitespace
/// delimited (detected from the first data line). Blank or "NaN" values count
/// as missing: trailing ones shorten the row, interior ones become 0.0. Rows
/// are zero-padded at the end to the longest row. Labels are remapped to
/// 0..k-1 in ascending order of their numeric value.
TimeSeriesDataset parse_ucr(std::istream& in, const std::string& name);

/// Loads a train file and optionally a test file, train rows first.
TimeSeriesDataset load_ucr(const std::filesystem::path& train,
                           const std::optional<std::filesystem::path>& test = std::nullopt);

/// Writes `label,v1,...,vm` rows with shortest round-trip number formatting.
/// Labels are written as their original values when known.
void write_ucr_csv(const TimeSeriesDataset& dataset, std::ostream& out);

/// Cylinder-bell-funnel sample with its event window [a, b].
struct CbfSample {
    TimeSeries series;
    std::size_t a = 0;
    std::size_t b = 0;
};

/// cls: 0 cylinder, 1 bell, 2 funnel.
CbfSample cbf_sample(int cls, std::size_t m, Rng& rng);

/// n_per_class samples of each class, grouped by class (labels 0, 1, 2).
TimeSeriesDataset generate_cbf(std::size_t n_per_class, std::size_t m, std::uint64_t seed);

/// Adds i.i.d. N(0, scale^2) to every value.
TimeSeriesDataset inject_noise(const TimeSeriesDataset& dataset, double scale, std::uint64_t seed);

/// Appends N(0, 1) values to every series up to target_m.
TimeSeriesDataset pad_with_noise(const TimeSeriesDataset& dataset, std::size_t target_m,
                                 std::uint64_t seed);

/// Per-series z-normalisation; constant series become all zeros.
TimeSeriesDataset znormalize(const TimeSeriesDataset& dataset);

}  // namespace rwc
