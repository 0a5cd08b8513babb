#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tempres/estimator.hpp"
#include "tempres/information.hpp"
#include "tempres/montecarlo.hpp"

namespace tempres {

// Column order is part of the file contract.
inline constexpr const char* kFisherHeader =
    "tau,gamma,fi_s,fi_a,fi_total,qfi,fi_int_s,fi_int_a,fi_int_incoh,crb_per_event";
inline constexpr const char* kRecordsHeader = "tau_true,gamma,run,channel,n,counts";
inline constexpr const char* kEstimatesHeader = "tau_true,gamma,run,tau_hat";
inline constexpr const char* kStatsHeader = "tau_true,gamma,n_runs,mean,variance,bias,variance_per_detection";

/// 12 significant digits, shortest form ("%.12g"); infinities print as "inf".
std::string format_number(double v);

void write_fisher_csv(std::ostream& os, std::span<const FisherReport> rows);
void write_records_csv(std::ostream& os, std::span<const DetectionRecord> records);
void write_estimates_csv(std::ostream& os, std::span<const RunEstimate> estimates);
/// Absent variances are written as empty fields.
void write_stats_csv(std::ostream& os, std::span<const EstimateStats> stats);

/// Reads records.csv and maps every row onto the config grid. Throws DataMismatchError
/// on malformed rows, separations or gammas outside the grid, or missing cells/runs.
std::vector<DetectionRecord> read_records_csv(std::istream& is, const ExperimentConfig& config);

} // namespace tempres
