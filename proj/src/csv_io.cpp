#include "tempres/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "tempres/errors.hpp"

namespace tempres {

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_fisher_csv(std::ostream& os, std::span<const FisherReport> rows) {
    os << kFisherHeader << '\n';
    for (const auto& r : rows) {
        os << format_number(r.tau) << ',' << format_number(r.gamma) << ',' << format_number(r.fi_s) << ','
           << format_number(r.fi_a) << ',' << format_number(r.fi_total) << ',' << format_number(r.qfi) << ','
           << format_number(r.fi_intensity_s) << ',' << format_number(r.fi_intensity_a) << ','
           << format_number(r.fi_intensity_incoherent) << ',' << format_number(r.crb_per_event) << '\n';
    }
}

void write_records_csv(std::ostream& os, std::span<const DetectionRecord> records) {
    os << kRecordsHeader << '\n';
    for (const auto& rec : records) {
        const auto prefix = format_number(rec.tau_true) + ',' + format_number(rec.gamma) + ',' +
                            std::to_string(rec.run_index) + ',';
        for (Channel c : {Channel::symmetric, Channel::antisymmetric}) {
            for (int n = 0; n < kRecordedModes; ++n) {
                os << prefix << channel_label(c) << ',' << n << ',' << rec.counts(c)[static_cast<std::size_t>(n)]
                   << '\n';
            }
        }
    }
}

void write_estimates_csv(std::ostream& os, std::span<const RunEstimate> estimates) {
    os << kEstimatesHeader << '\n';
    for (const auto& e : estimates) {
        os << format_number(e.tau_true) << ',' << format_number(e.gamma) << ',' << e.run_index << ','
           << format_number(e.tau_hat) << '\n';
    }
}

void write_stats_csv(std::ostream& os, std::span<const EstimateStats> stats) {
    os << kStatsHeader << '\n';
    for (const auto& s : stats) {
        os << format_number(s.tau_true) << ',' << format_number(s.gamma) << ',' << s.n_runs << ','
           << format_number(s.mean) << ',' << (s.variance ? format_number(*s.variance) : "") << ','
           << format_number(s.bias) << ','
           << (s.variance_per_detection ? format_number(*s.variance_per_detection) : "") << '\n';
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <class T>
T parse_field(const std::string& s, int line_no, const char* what) {
    T v{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw DataMismatchError("records line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    }
    return v;
}

template <class Grid>
int match_index(const Grid& grid, double value) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(grid[i].value() - value) <= 1e-9 * std::max(1.0, std::abs(value))) return static_cast<int>(i);
    }
    return -1;
}

} // namespace

std::vector<DetectionRecord> read_records_csv(std::istream& is, const ExperimentConfig& config) {
    std::string line;
    if (!std::getline(is, line) || line != kRecordsHeader) {
        throw DataMismatchError("records file must start with header '" + std::string(kRecordsHeader) + "'");
    }
    // (tau index, gamma index, run) -> record, plus a mask of filled (channel, n) slots.
    std::map<std::tuple<int, int, int>, std::pair<DetectionRecord, unsigned>> cells;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 6) throw DataMismatchError("records line " + std::to_string(line_no) + ": expected 6 fields");
        const double tau = parse_field<double>(f[0], line_no, "tau_true");
        const double gamma = parse_field<double>(f[1], line_no, "gamma");
        const int run = parse_field<int>(f[2], line_no, "run");
        Channel channel;
        try {
            channel = parse_channel(f[3]);
        } catch (const ParameterError&) {
            throw DataMismatchError("records line " + std::to_string(line_no) + ": bad channel '" + f[3] + "'");
        }
        const int n = parse_field<int>(f[4], line_no, "n");
        const auto counts = parse_field<std::int64_t>(f[5], line_no, "counts");

        const int ti = match_index(config.tau_grid, tau);
        const int gi = match_index(config.gammas, gamma);
        if (ti < 0) throw DataMismatchError("records line " + std::to_string(line_no) + ": tau " + f[0] + " not in config grid");
        if (gi < 0) throw DataMismatchError("records line " + std::to_string(line_no) + ": gamma " + f[1] + " not in config grid");
        if (run < 0 || run >= config.repetitions) {
            throw DataMismatchError("records line " + std::to_string(line_no) + ": run " + f[2] + " outside repetitions");
        }
        if (n < 0 || n >= kRecordedModes || counts < 0) {
            throw DataMismatchError("records line " + std::to_string(line_no) + ": bad projection or count");
        }
        auto& [rec, mask] = cells[{ti, gi, run}];
        rec.tau_true = config.tau_grid[static_cast<std::size_t>(ti)].value();
        rec.gamma = config.gammas[static_cast<std::size_t>(gi)].value();
        rec.tau_index = ti;
        rec.gamma_index = gi;
        rec.run_index = run;
        const unsigned bit = 1u << response_index(channel, n);
        if (mask & bit) throw DataMismatchError("records line " + std::to_string(line_no) + ": duplicate entry");
        mask |= bit;
        (channel == Channel::symmetric ? rec.counts_s : rec.counts_a)[static_cast<std::size_t>(n)] = counts;
    }
    const std::size_t expected = config.tau_grid.size() * config.gammas.size() * static_cast<std::size_t>(config.repetitions);
    if (cells.size() != expected) {
        throw DataMismatchError("records cover " + std::to_string(cells.size()) + " runs, config grid expects " +
                                std::to_string(expected));
    }
    std::vector<DetectionRecord> out;
    out.reserve(cells.size());
    for (auto& [key, entry] : cells) {
        if (entry.second != (1u << kResponseCount) - 1) {
            throw DataMismatchError("records are missing projections for a run");
        }
        out.push_back(entry.first);
    }
    return out;
}

} // namespace tempres
