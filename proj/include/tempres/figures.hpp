#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tempres/estimator.hpp"

namespace tempres {

struct FigureSeries {
    std::string name;
    bool is_bound = false;  // drawn as a line rather than markers
    std::vector<double> tau;
    std::vector<double> value;
    std::vector<double> error;  // 0 where not applicable
};

struct Figure {
    std::string id;
    std::string title;
    std::string y_label;
    bool log_y = false;
    std::vector<FigureSeries> series;
};

inline constexpr const char* kFigureHeader = "series,tau,value,error";

/// Mean +/- std of the estimates vs tau for gamma in {0, 1/4, 1/2} (those present in the config).
Figure figure_estimates(const ExperimentConfig& config, const Analysis& analysis);

/// Variance per detection vs tau for every configured gamma, plus the quantum and
/// incoherent intensity-only bounds. Error is the standard error of the variance.
Figure figure_variances(const ExperimentConfig& config, const Analysis& analysis);

/// gamma = 0 variance per total detection and per antisymmetric-channel detection, plus both bounds.
Figure figure_resources(const ExperimentConfig& config, const Analysis& analysis);

/// Intensity-only CRB per detection, 1 / F_int of the incoherent mixture; +inf at tau = 0.
double intensity_crb(const PulseSpec& spec, double tau);

void write_figure_csv(std::ostream& os, const Figure& fig);

/// Self-contained SVG: axes, one series per legend entry, error bars where given.
std::string render_svg(const Figure& fig);

} // namespace tempres
