#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tempres/channels.hpp"
#include "tempres/cli.hpp"
#include "tempres/config_io.hpp"
#include "tempres/errors.hpp"
#include "tempres/estimator.hpp"
#include "tempres/figures.hpp"
#include "tempres/information.hpp"
#include "tempres/montecarlo.hpp"

#include <sstream>

namespace py = pybind11;
using namespace tempres;

namespace {

ExperimentConfig config_from(const std::string& json_text) {
    return json_text.empty() ? ExperimentConfig::defaults() : parse_config(json_text, "<python>").experiment;
}

py::dict stats_dict(const EstimateStats& s) {
    py::dict d;
    d["tau_true"] = s.tau_true;
    d["gamma"] = s.gamma;
    d["n_runs"] = s.n_runs;
    d["mean"] = s.mean;
    d["variance"] = s.variance ? py::cast(*s.variance) : py::none();
    d["bias"] = s.bias;
    d["variance_per_detection"] = s.variance_per_detection ? py::cast(*s.variance_per_detection) : py::none();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Temporal-separation estimation core (C++)";
    m.attr("__version__") = tool_version();

    // later registrations are tried first, so the base class goes first
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<DataMismatchError>(m, "DataMismatchError", PyExc_ValueError);

    m.def("qfi", [](double sigma_t) { return qfi_constant(PulseSpec(sigma_t)); }, py::arg("sigma_t") = 1.0);

    m.def(
        "projection_probs",
        [](double tau, double gamma, double sigma_t, int mode_cutoff) {
            const PulseSpec spec(sigma_t, mode_cutoff);
            const auto p = mixed_projection_probs(hg_projection_probs(spec, TimeOffset(tau)), CoherenceParam(gamma));
            return py::make_tuple(p.symmetric.probs, p.antisymmetric.probs);
        },
        py::arg("tau"), py::arg("gamma") = 0.0, py::arg("sigma_t") = 1.0, py::arg("mode_cutoff") = 8,
        "Mixed HG detection probabilities (symmetric, antisymmetric).");

    m.def(
        "channel_fi",
        [](double tau, double gamma, double sigma_t) {
            const auto f = mixed_channel_fi(PulseSpec(sigma_t), TimeOffset(tau), CoherenceParam(gamma));
            return py::make_tuple(f.symmetric, f.antisymmetric);
        },
        py::arg("tau"), py::arg("gamma") = 0.0, py::arg("sigma_t") = 1.0);

    m.def(
        "channel_fi_analytic",
        [](double tau, double sigma_t) {
            const auto f = coherent_channel_fi_analytic(PulseSpec(sigma_t), TimeOffset(tau));
            return py::make_tuple(f.symmetric, f.antisymmetric);
        },
        py::arg("tau"), py::arg("sigma_t") = 1.0);

    m.def(
        "fisher_report",
        [](double tau, double gamma, double sigma_t) {
            const auto r = fisher_report(PulseSpec(sigma_t), TimeOffset(tau), CoherenceParam(gamma));
            py::dict d;
            d["tau"] = r.tau;
            d["gamma"] = r.gamma;
            d["fi_s"] = r.fi_s;
            d["fi_a"] = r.fi_a;
            d["fi_total"] = r.fi_total;
            d["qfi"] = r.qfi;
            d["fi_int_s"] = r.fi_intensity_s;
            d["fi_int_a"] = r.fi_intensity_a;
            d["fi_int_incoh"] = r.fi_intensity_incoherent;
            d["crb_per_event"] = r.crb_per_event;
            d["converged"] = r.converged;
            return d;
        },
        py::arg("tau"), py::arg("gamma") = 0.0, py::arg("sigma_t") = 1.0);

    m.def(
        "intensity_crb", [](double tau, double sigma_t) { return intensity_crb(PulseSpec(sigma_t), tau); },
        py::arg("tau"), py::arg("sigma_t") = 1.0);

    m.def(
        "simulate",
        [](const std::string& config_json, int threads) {
            const auto recs = run_experiment(config_from(config_json), threads);
            py::list out;
            for (const auto& r : recs) {
                py::dict d;
                d["tau_true"] = r.tau_true;
                d["gamma"] = r.gamma;
                d["run"] = r.run_index;
                d["counts_s"] = r.counts_s;
                d["counts_a"] = r.counts_a;
                out.append(d);
            }
            return out;
        },
        py::arg("config_json") = "", py::arg("threads") = 0,
        "Simulated detection records; config_json uses the CLI config schema.");

    m.def(
        "analyze",
        [](const std::string& config_json) {
            const auto cfg = config_from(config_json);
            Analysis a;
            {
                py::gil_scoped_release release;
                a = analyze(cfg);
            }
            py::list stats;
            for (const auto& s : a.stats) stats.append(stats_dict(s));
            py::list est;
            for (const auto& e : a.estimates) est.append(py::make_tuple(e.tau_true, e.gamma, e.run_index, e.tau_hat));
            py::dict d;
            d["stats"] = stats;
            d["estimates"] = est;
            return d;
        },
        py::arg("config_json") = "", "Simulate, calibrate, estimate and aggregate.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            std::vector<std::string> full{"tempres"};
            full.insert(full.end(), args.begin(), args.end());
            const int code = run_cli(full, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
