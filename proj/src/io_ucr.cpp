#include "rwc/io_ucr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string_view>
#include <vector>

namespace rwc {

namespace {

struct RawRow {
    double label = 0.0;
    std::vector<double> values;
};

struct RawTable {
    std::vector<RawRow> rows;
    std::size_t missing = 0;
};

enum class Delimiter { tab, comma, whitespace };

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

Delimiter detect(std::string_view line) {
    if (line.find('\t') != std::string_view::npos) return Delimiter::tab;
    if (line.find(',') != std::string_view::npos) return Delimiter::comma;
    return Delimiter::whitespace;
}

std::vector<std::string_view> split(std::string_view line, Delimiter delim) {
    std::vector<std::string_view> out;
    if (delim == Delimiter::whitespace) {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            if (i >= line.size()) break;
            const std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
            out.push_back(line.substr(start, i - start));
        }
        return out;
    }
    const char sep = delim == Delimiter::tab ? '\t' : ',';
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool is_missing(std::string_view token) {
    if (token.empty()) return true;
    std::string lower(token);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower == "nan" || lower == "?";
}

std::optional<double> parse_number(std::string_view token) {
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

void parse_rows(std::istream& in, const std::string& source, RawTable& table) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<Delimiter> delim;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty()) continue;
        if (!delim) delim = detect(body);
        const auto tokens = split(delim == Delimiter::whitespace ? body : std::string_view(line), *delim);
        if (tokens.size() < 2) {
            throw ParseError(source, line_no, "expected a label and at least one value");
        }
        const auto label = parse_number(tokens.front());
        if (!label) {
            throw ParseError(source, line_no,
                             "class label '" + std::string(tokens.front()) + "' is not a number");
        }
        RawRow row;
        row.label = *label;
        std::size_t last_present = 0;
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            if (!is_missing(tokens[t])) last_present = t;
        }
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            if (is_missing(tokens[t])) {
                ++table.missing;
                if (t < last_present) row.values.push_back(0.0);
                continue;
            }
            const auto v = parse_number(tokens[t]);
            if (!v) {
                throw ParseError(source, line_no,
                                 "value '" + std::string(tokens[t]) + "' in field " +
                                     std::to_string(t + 1) + " is not a finite number");
            }
            row.values.push_back(*v);
        }
        table.rows.push_back(std::move(row));
    }
}

TimeSeriesDataset finish(RawTable table, const std::string& name) {
    if (table.rows.empty()) throw std::invalid_argument("dataset '" + name + "' has no rows");
    std::size_t m = 0;
    for (const auto& r : table.rows) m = std::max(m, r.values.size());
    if (m == 0) throw std::invalid_argument("dataset '" + name + "' has no values");

    std::map<double, int> ids;
    for (const auto& r : table.rows) ids.emplace(r.label, 0);
    std::vector<double> originals;
    for (auto& [value, id] : ids) {
        id = static_cast<int>(originals.size());
        originals.push_back(value);
    }

    std::vector<TimeSeries> series;
    std::vector<int> labels;
    series.reserve(table.rows.size());
    labels.reserve(table.rows.size());
    for (auto& r : table.rows) {
        r.values.resize(m, 0.0);
        series.push_back({std::move(r.values)});
        labels.push_back(ids.at(r.label));
    }
    TimeSeriesDataset ds(name, std::move(series), std::move(labels));
    ds.set_original_labels(std::move(originals));
    ds.set_missing_values(table.missing);
    return ds;
}

std::string dataset_name(const std::filesystem::path& train) {
    std::string stem = train.stem().string();
    for (const std::string suffix : {"_TRAIN", "_train"}) {
        if (stem.size() > suffix.size() && stem.ends_with(suffix)) {
            stem.resize(stem.size() - suffix.size());
        }
    }
    return stem;
}

void read_file(const std::filesystem::path& path, RawTable& table) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    parse_rows(in, path.string(), table);
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

TimeSeriesDataset parse_ucr(std::istream& in, const std::string& name) {
    RawTable table;
    parse_rows(in, name, table);
    return finish(std::move(table), name);
}

TimeSeriesDataset load_ucr(const std::filesystem::path& train,
                           const std::optional<std::filesystem::path>& test) {
    RawTable table;
    read_file(train, table);
    if (test) read_file(*test, table);
    return finish(std::move(table), dataset_name(train));
}

void write_ucr_csv(const TimeSeriesDataset& dataset, std::ostream& out) {
    const auto& originals = dataset.original_labels();
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        double label = 0.0;
        if (dataset.has_labels()) {
            const int l = (*dataset.labels())[i];
            label = static_cast<std::size_t>(l) < originals.size() ? originals[static_cast<std::size_t>(l)]
                                                                   : static_cast<double>(l);
        }
        out << format_number(label);
        for (double v : dataset[i].values) out << ',' << format_number(v);
        out << '\n';
    }
}

CbfSample cbf_sample(int cls, std::size_t m, Rng& rng) {
    if (cls < 0 || cls > 2) throw std::invalid_argument("CBF class must be 0, 1 or 2");
    if (m < 16) throw std::invalid_argument("CBF series need length >= 16");
    const auto lm = static_cast<long long>(m);
    CbfSample s;
    s.a = static_cast<std::size_t>(rng.uniform_int(lm / 8, lm / 4));
    const auto width = static_cast<std::size_t>(rng.uniform_int(lm / 4, lm / 2));
    s.b = std::min(m - 1, s.a + width);
    const double amplitude = 6.0 + rng.normal();
    const double span = static_cast<double>(s.b - s.a);
    s.series.values.resize(m);
    for (std::size_t t = 0; t < m; ++t) {
        double shape = 0.0;
        if (t >= s.a && t <= s.b) {
            const double td = static_cast<double>(t);
            switch (cls) {
                case 0: shape = 1.0; break;
                case 1: shape = (td - static_cast<double>(s.a)) / span; break;
                default: shape = (static_cast<double>(s.b) - td) / span; break;
            }
        }
        s.series.values[t] = amplitude * shape + rng.normal();
    }
    return s;
}

TimeSeriesDataset generate_cbf(std::size_t n_per_class, std::size_t m, std::uint64_t seed) {
    if (n_per_class < 1) throw std::invalid_argument("CBF needs at least one series per class");
    Rng rng(seed);
    std::vector<TimeSeries> series;
    std::vector<int> labels;
    series.reserve(3 * n_per_class);
    for (int cls = 0; cls < 3; ++cls) {
        for (std::size_t i = 0; i < n_per_class; ++i) {
            series.push_back(cbf_sample(cls, m, rng).series);
            labels.push_back(cls);
        }
    }
    TimeSeriesDataset ds("CBF", std::move(series), std::move(labels));
    ds.set_original_labels({1.0, 2.0, 3.0});
    return ds;
}

TimeSeriesDataset inject_noise(const TimeSeriesDataset& dataset, double scale, std::uint64_t seed) {
    if (!(scale >= 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("noise scale must be a finite non-negative number");
    }
    if (scale == 0.0) return dataset;
    Rng rng(seed);
    std::vector<TimeSeries> series = dataset.series();
    for (auto& s : series) {
        for (auto& v : s.values) v += scale * rng.normal();
    }
    TimeSeriesDataset out(dataset.name(), std::move(series), dataset.labels());
    out.set_original_labels(dataset.original_labels());
    return out;
}

TimeSeriesDataset pad_with_noise(const TimeSeriesDataset& dataset, std::size_t target_m,
                                 std::uint64_t seed) {
    if (target_m < dataset.length()) {
        throw std::invalid_argument("pad target " + std::to_string(target_m) +
                                    " is shorter than the series length " +
                                    std::to_string(dataset.length()));
    }
    Rng rng(seed);
    std::vector<TimeSeries> series = dataset.series();
    for (auto& s : series) {
        s.values.reserve(target_m);
        while (s.values.size() < target_m) s.values.push_back(rng.normal());
    }
    TimeSeriesDataset out(dataset.name(), std::move(series), dataset.labels());
    out.set_original_labels(dataset.original_labels());
    return out;
}

TimeSeriesDataset znormalize(const TimeSeriesDataset& dataset) {
    std::vector<TimeSeries> series = dataset.series();
    for (auto& s : series) {
        const double n = static_cast<double>(s.values.size());
        double mean = 0.0;
        for (double v : s.values) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : s.values) var += (v - mean) * (v - mean);
        const double sd = std::sqrt(var / n);
        for (auto& v : s.values) v = sd > 1e-12 ? (v - mean) / sd : 0.0;
    }
    TimeSeriesDataset out(dataset.name(), std::move(series), dataset.labels());
    out.set_original_labels(dataset.original_labels());
    return out;
}

}  // namespace rwc
