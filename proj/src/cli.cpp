#include "tempres/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "tempres/config_io.hpp"
#include "tempres/csv_io.hpp"
#include "tempres/errors.hpp"
#include "tempres/estimator.hpp"
#include "tempres/figures.hpp"
#include "tempres/information.hpp"
#include "tempres/manifest.hpp"

#ifndef TEMPRES_VERSION
#define TEMPRES_VERSION "0.0.0"
#endif

namespace tempres {

const char* tool_version() noexcept { return TEMPRES_VERSION; }

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
};

ToolConfig resolve_config(const CommonOptions& opts) {
    ToolConfig cfg = opts.config_path.empty() ? ToolConfig{} : load_config(opts.config_path);
    if (opts.seed) cfg.experiment.master_seed = *opts.seed;
    return cfg;
}

// Collects output files under one directory and records their digests.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) {
            throw IoError("cannot create output directory '" + dir_.string() + "'");
        }
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path path = dir_ / name;
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        os << content;
        os.flush();
        if (!os) throw IoError("cannot write '" + path.string() + "'");
        files_.push_back({name, sha256_hex(content), content.size()});
    }

    void write_manifest(const std::string& command, const ToolConfig& config) {
        RunManifest m{command, tool_version(), utc_timestamp(), config, files_};
        const std::string name = command + ".manifest.json";
        const fs::path path = dir_ / name;
        std::ofstream os(path, std::ios::trunc);
        os << m.to_json().dump(2) << '\n';
        if (!os) throw IoError("cannot write '" + path.string() + "'");
    }

    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<OutputFile> files_;
};

template <class Fn>
std::string to_text(Fn&& fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

int cmd_fisher(const CommonOptions& opts, std::ostream& out) {
    const auto cfg = resolve_config(opts);
    const auto& e = cfg.experiment;
    double tau_max = 0.0;
    for (const auto& t : e.tau_grid) tau_max = std::max(tau_max, t.value());
    std::vector<FisherReport> rows;
    for (const auto& t : e.tau_grid) {
        for (const auto& g : e.gammas) rows.push_back(fisher_report(e.pulse, t, g, {cfg.fd_step, tau_max}));
    }
    OutputSet files(opts.out_dir);
    files.write("fisher_report.csv", to_text([&](std::ostream& os) { write_fisher_csv(os, rows); }));
    files.write_manifest("fisher", cfg);
    const auto unconverged = std::count_if(rows.begin(), rows.end(), [](const FisherReport& r) { return !r.converged; });
    if (unconverged > 0) {
        out << "warning: " << unconverged << " rows failed the step-halving check; consider a smaller fd_step\n";
    }
    out << "wrote " << (files.dir() / "fisher_report.csv").string() << " (" << rows.size() << " rows)\n";
    return kExitOk;
}

int cmd_simulate(const CommonOptions& opts, std::ostream& out) {
    const auto cfg = resolve_config(opts);
    const auto records = run_experiment(cfg.experiment);
    OutputSet files(opts.out_dir);
    files.write("records.csv", to_text([&](std::ostream& os) { write_records_csv(os, records); }));
    files.write_manifest("simulate", cfg);
    out << "wrote " << (files.dir() / "records.csv").string() << " (" << records.size() << " runs)\n";
    return kExitOk;
}

int cmd_estimate(const CommonOptions& opts, const std::string& records_path, std::ostream& out) {
    const auto cfg = resolve_config(opts);
    std::ifstream in(records_path);
    if (!in) throw IoError("cannot open records file '" + records_path + "'");
    auto records = read_records_csv(in, cfg.experiment);
    const auto analysis = analyze(cfg.experiment, std::move(records));
    OutputSet files(opts.out_dir);
    files.write("estimates.csv", to_text([&](std::ostream& os) { write_estimates_csv(os, analysis.estimates); }));
    files.write("stats.csv", to_text([&](std::ostream& os) { write_stats_csv(os, analysis.stats); }));
    files.write_manifest("estimate", cfg);
    out << "wrote " << (files.dir() / "estimates.csv").string() << " and stats.csv (" << analysis.stats.size()
        << " groups)\n";
    return kExitOk;
}

int cmd_reproduce(const CommonOptions& opts, const std::string& figure, bool svg, std::ostream& out) {
    if (figure != "fig2" && figure != "fig3" && figure != "fig4") {
        throw ConfigError("unknown figure id '" + figure + "' (expected fig2, fig3 or fig4)");
    }
    const auto cfg = resolve_config(opts);
    const auto analysis = analyze(cfg.experiment);
    const Figure fig = figure == "fig2"   ? figure_estimates(cfg.experiment, analysis)
                       : figure == "fig3" ? figure_variances(cfg.experiment, analysis)
                                          : figure_resources(cfg.experiment, analysis);
    OutputSet files(opts.out_dir);
    files.write(figure + ".csv", to_text([&](std::ostream& os) { write_figure_csv(os, fig); }));
    if (svg) files.write(figure + ".svg", render_svg(fig));
    files.write_manifest("reproduce_" + figure, cfg);
    out << "wrote " << (files.dir() / (figure + ".csv")).string() << (svg ? " and " + figure + ".svg" : "") << '\n';
    return kExitOk;
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_seed) {
    cmd->add_option("--config", opts.config_path, "JSON config file (defaults apply when omitted)");
    cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    if (with_seed) cmd->add_option("--seed", opts.seed, "Override the config master_seed");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Temporal-separation estimation toolkit: Fisher information, Monte Carlo and GLS estimation"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    CommonOptions opts;
    std::string records_path;
    std::string figure;
    bool svg = false;

    auto* fisher = app.add_subcommand("fisher", "Fisher information and CRB table over the config grid");
    add_common(fisher, opts, false);
    auto* simulate = app.add_subcommand("simulate", "Simulate photon-counting runs to records.csv");
    add_common(simulate, opts, true);
    auto* estimate = app.add_subcommand("estimate", "Calibrate and estimate tau from records.csv");
    add_common(estimate, opts, true);
    estimate->add_option("--records", records_path, "records.csv produced by `simulate`")->required();
    auto* reproduce = app.add_subcommand("reproduce", "Regenerate the data behind a figure (fig2, fig3, fig4)");
    add_common(reproduce, opts, true);
    reproduce->add_option("figure", figure, "fig2, fig3 or fig4")->required();
    reproduce->add_flag("--svg", svg, "Also render an SVG plot");

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*fisher) return cmd_fisher(opts, out);
        if (*simulate) return cmd_simulate(opts, out);
        if (*estimate) return cmd_estimate(opts, records_path, out);
        if (*reproduce) return cmd_reproduce(opts, figure, svg, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParameterError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const CalibrationError& e) {
        err << "calibration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const DataMismatchError& e) {
        err << "data mismatch: " << e.what() << '\n';
        return kExitDataMismatch;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}

} // namespace tempres
