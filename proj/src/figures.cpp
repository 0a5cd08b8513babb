#include "tempres/figures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "tempres/csv_io.hpp"
#include "tempres/errors.hpp"
#include "tempres/information.hpp"

namespace tempres {

namespace {

std::string gamma_name(double g) { return "gamma=" + format_number(g); }

const EstimateStats* find_stats(const Analysis& a, double tau, double gamma) {
    for (const auto& s : a.stats) {
        if (s.tau_true == tau && s.gamma == gamma) return &s;
    }
    return nullptr;
}

void add_bounds(const ExperimentConfig& config, Figure& fig) {
    FigureSeries quantum{"quantum_crb", true, {}, {}, {}};
    FigureSeries intensity{"intensity_crb", true, {}, {}, {}};
    for (const auto& t : config.tau_grid) {
        quantum.tau.push_back(t.value());
        quantum.value.push_back(quantum_crb_per_event(config.pulse));
        quantum.error.push_back(0.0);
        const double crb = intensity_crb(config.pulse, t.value());
        if (std::isfinite(crb)) {
            intensity.tau.push_back(t.value());
            intensity.value.push_back(crb);
            intensity.error.push_back(0.0);
        }
    }
    fig.series.push_back(std::move(quantum));
    fig.series.push_back(std::move(intensity));
}

} // namespace

double intensity_crb(const PulseSpec& spec, double tau) {
    const auto grid = TimeGrid::standard(spec, tau + 1.0);
    const auto fi = intensity_fi(
        [&](double x) { return IntensityProfile{Channel::symmetric, grid, incoherent_intensity(spec, x, grid)}; },
        TimeOffset(tau));
    return fi.value > 1e-12 ? 1.0 / fi.value : std::numeric_limits<double>::infinity();
}

Figure figure_estimates(const ExperimentConfig& config, const Analysis& analysis) {
    Figure fig{"fig2", "Estimates vs true separation", "mean tau_hat / sigma_t", false, {}};
    for (double g : {0.0, 0.25, 0.5}) {
        const bool present =
            std::any_of(config.gammas.begin(), config.gammas.end(), [&](const CoherenceParam& c) { return c.value() == g; });
        if (!present) continue;
        FigureSeries s{gamma_name(g), false, {}, {}, {}};
        for (const auto& t : config.tau_grid) {
            const auto* st = find_stats(analysis, t.value(), g);
            if (!st) continue;
            s.tau.push_back(t.value());
            s.value.push_back(st->mean);
            s.error.push_back(st->variance ? std::sqrt(*st->variance) : 0.0);
        }
        fig.series.push_back(std::move(s));
    }
    return fig;
}

Figure figure_variances(const ExperimentConfig& config, const Analysis& analysis) {
    Figure fig{"fig3", "Estimator variance per detection", "variance x detections / sigma_t^2", true, {}};
    for (const auto& g : config.gammas) {
        FigureSeries s{gamma_name(g.value()), false, {}, {}, {}};
        for (const auto& t : config.tau_grid) {
            const auto* st = find_stats(analysis, t.value(), g.value());
            if (!st || !st->variance_per_detection) continue;
            s.tau.push_back(t.value());
            s.value.push_back(*st->variance_per_detection);
            s.error.push_back(*st->variance_per_detection * std::sqrt(2.0 / (st->n_runs - 1)));
        }
        fig.series.push_back(std::move(s));
    }
    add_bounds(config, fig);
    return fig;
}

Figure figure_resources(const ExperimentConfig& config, const Analysis& analysis) {
    const bool has_coherent = std::any_of(config.gammas.begin(), config.gammas.end(),
                                          [](const CoherenceParam& c) { return c.value() == 0.0; });
    if (!has_coherent) throw ConfigError("fig4 needs gamma 0 in the config gammas");
    Figure fig{"fig4", "Resource counting at full coherence", "variance x detections / sigma_t^2", true, {}};
    FigureSeries total{"per_total_detection", false, {}, {}, {}};
    FigureSeries anti{"per_antisymmetric_detection", false, {}, {}, {}};
    for (const auto& t : config.tau_grid) {
        const auto* st = find_stats(analysis, t.value(), 0.0);
        if (!st || !st->variance) continue;
        const double rel_err = std::sqrt(2.0 / (st->n_runs - 1));
        const double per_total = *st->variance * config.mean_total_detections;
        const double per_anti = per_total * antisymmetric_norm(config.pulse, t.value());
        total.tau.push_back(t.value());
        total.value.push_back(per_total);
        total.error.push_back(per_total * rel_err);
        anti.tau.push_back(t.value());
        anti.value.push_back(per_anti);
        anti.error.push_back(per_anti * rel_err);
    }
    fig.series.push_back(std::move(total));
    fig.series.push_back(std::move(anti));
    add_bounds(config, fig);
    return fig;
}

void write_figure_csv(std::ostream& os, const Figure& fig) {
    os << kFigureHeader << '\n';
    for (const auto& s : fig.series) {
        for (std::size_t i = 0; i < s.tau.size(); ++i) {
            os << s.name << ',' << format_number(s.tau[i]) << ',' << format_number(s.value[i]) << ','
               << format_number(s.error[i]) << '\n';
        }
    }
}

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 480;
constexpr double kLeft = 80;
constexpr double kRight = 200;
constexpr double kTop = 40;
constexpr double kBottom = 60;

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Axes {
    double x0, x1, y0, y1;
    bool log_y;

    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const {
        const double v = log_y ? std::log10(y) : y;
        return kHeight - kBottom - (v - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
    }
    bool plottable(double y) const { return std::isfinite(y) && (!log_y || y > 0.0); }
};

} // namespace

std::string render_svg(const Figure& fig) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : fig.series) {
        for (std::size_t i = 0; i < s.tau.size(); ++i) {
            xmin = std::min(xmin, s.tau[i]);
            xmax = std::max(xmax, s.tau[i]);
            for (double y : {s.value[i] - s.error[i], s.value[i] + s.error[i], s.value[i]}) {
                if (!std::isfinite(y) || (fig.log_y && y <= 0.0)) continue;
                const double v = fig.log_y ? std::log10(y) : y;
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        }
    }
    if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0;
    if (!std::isfinite(ymin)) ymin = 0.0, ymax = 1.0;
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    const Axes ax{xmin, xmax, fig.log_y ? std::floor(ymin) : ymin - pad, fig.log_y ? std::ceil(ymax) : ymax + pad,
                  fig.log_y};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"15\">" << escape(fig.title) << "</text>\n";
    const double plot_right = kWidth - kRight;
    const double plot_bottom = kHeight - kBottom;
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_right - kLeft << "\" height=\""
       << plot_bottom - kTop << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double x = ax.x0 + (ax.x1 - ax.x0) * i / 5.0;
        os << "<line x1=\"" << ax.px(x) << "\" y1=\"" << plot_bottom << "\" x2=\"" << ax.px(x) << "\" y2=\""
           << plot_bottom + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ax.px(x) << "\" y=\"" << plot_bottom + 18 << "\" text-anchor=\"middle\">"
           << format_number(std::round(x * 1000) / 1000) << "</text>\n";
    }
    const int y_ticks = fig.log_y ? static_cast<int>(ax.y1 - ax.y0) : 5;
    for (int i = 0; i <= y_ticks; ++i) {
        const double v = ax.y0 + (ax.y1 - ax.y0) * i / std::max(y_ticks, 1);
        const double y = fig.log_y ? std::pow(10.0, v) : v;
        os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << ax.py(y) << "\" x2=\"" << kLeft << "\" y2=\"" << ax.py(y)
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << ax.py(y) + 4 << "\" text-anchor=\"end\">"
           << (fig.log_y ? "1e" + format_number(v) : format_number(std::round(y * 1000) / 1000)) << "</text>\n";
    }
    os << "<text x=\"" << (kLeft + plot_right) / 2 << "\" y=\"" << kHeight - 15
       << "\" text-anchor=\"middle\">tau / sigma_t</text>\n";
    os << "<text transform=\"translate(18," << (kTop + plot_bottom) / 2
       << ") rotate(-90)\" text-anchor=\"middle\">" << escape(fig.y_label) << "</text>\n";

    for (std::size_t k = 0; k < fig.series.size(); ++k) {
        const auto& s = fig.series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        if (s.is_bound) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
               << (s.name == "intensity_crb" ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
            for (std::size_t i = 0; i < s.tau.size(); ++i) {
                if (ax.plottable(s.value[i])) os << ax.px(s.tau[i]) << ',' << ax.py(s.value[i]) << ' ';
            }
            os << "\"/>\n";
        } else {
            for (std::size_t i = 0; i < s.tau.size(); ++i) {
                if (!ax.plottable(s.value[i])) continue;
                const double x = ax.px(s.tau[i]);
                if (s.error[i] > 0.0) {
                    const double lo = s.value[i] - s.error[i];
                    const double hi = s.value[i] + s.error[i];
                    const double y_lo = ax.plottable(lo) ? ax.py(lo) : plot_bottom;
                    os << "<line x1=\"" << x << "\" y1=\"" << y_lo << "\" x2=\"" << x << "\" y2=\"" << ax.py(hi)
                       << "\" stroke=\"" << color << "\"/>\n";
                }
                os << "<circle cx=\"" << x << "\" cy=\"" << ax.py(s.value[i]) << "\" r=\"3.5\" fill=\"" << color
                   << "\"/>\n";
            }
        }
        const double ly = kTop + 16 + 18.0 * static_cast<double>(k);
        os << "<rect x=\"" << plot_right + 14 << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"12\" fill=\""
           << color << "\"/>\n";
        os << "<text x=\"" << plot_right + 32 << "\" y=\"" << ly + 1 << "\">" << escape(s.name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace tempres
