#include "tempres/config_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "tempres/errors.hpp"

namespace tempres {

using nlohmann::json;

namespace {

class Reader {
public:
    Reader(std::string_view text, std::string_view source) : text_(text), source_(source) {}

    // 1-based line of the first occurrence of "key", or of the document start.
    int line_of(std::string_view key) const {
        const std::string quoted = "\"" + std::string(key) + "\"";
        const auto pos = text_.find(quoted);
        if (pos == std::string_view::npos) return 1;
        return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
    }

    [[noreturn]] void fail(std::string_view key, const std::string& what) const {
        throw ConfigError(std::string(source_) + ":" + std::to_string(line_of(key)) + ": " + what);
    }

    void reject_unknown(const json& obj, std::string_view where, const std::set<std::string>& allowed) const {
        if (!obj.is_object()) fail(where, "'" + std::string(where) + "' must be an object");
        for (const auto& [k, v] : obj.items()) {
            if (!allowed.contains(k)) fail(k, "unknown key '" + k + "' in " + std::string(where));
        }
    }

    double number(const json& obj, const char* key, double fallback) const {
        if (!obj.contains(key)) return fallback;
        const auto& v = obj.at(key);
        if (!v.is_number()) fail(key, std::string("'") + key + "' must be a number");
        return v.get<double>();
    }

    int integer(const json& obj, const char* key, int fallback) const {
        if (!obj.contains(key)) return fallback;
        const auto& v = obj.at(key);
        if (!v.is_number_integer()) fail(key, std::string("'") + key + "' must be an integer");
        return v.get<int>();
    }

    bool boolean(const json& obj, const char* key, bool fallback) const {
        if (!obj.contains(key)) return fallback;
        const auto& v = obj.at(key);
        if (!v.is_boolean()) fail(key, std::string("'") + key + "' must be true or false");
        return v.get<bool>();
    }

    std::vector<double> numbers(const json& obj, const char* key) const {
        const auto& v = obj.at(key);
        if (!v.is_array()) fail(key, std::string("'") + key + "' must be an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) fail(key, std::string("'") + key + "' must contain only numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    // Runs a constructor that validates its inputs, attributing failures to `key`.
    template <class Fn>
    auto guarded(std::string_view key, Fn&& fn) const {
        try {
            return fn();
        } catch (const ParameterError& e) {
            fail(key, e.what());
        }
    }

private:
    std::string_view text_;
    std::string_view source_;
};

} // namespace

ToolConfig parse_config(std::string_view text, std::string_view source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(source) + ": " + e.what());
    }
    const Reader r(text, source);
    r.reject_unknown(doc, "config",
                     {"mode_cutoff", "tau_grid", "gammas", "repetitions", "calibration_repetitions",
                      "reuse_calibration_runs", "mean_total_detections", "device", "drift", "master_seed",
                      "estimator", "fd_step"});

    ToolConfig out;
    auto& e = out.experiment;
    e.pulse = r.guarded("mode_cutoff", [&] { return PulseSpec(1.0, r.integer(doc, "mode_cutoff", e.pulse.mode_cutoff())); });
    if (doc.contains("tau_grid")) {
        e.tau_grid.clear();
        for (double t : r.numbers(doc, "tau_grid")) e.tau_grid.push_back(r.guarded("tau_grid", [&] { return TimeOffset(t); }));
    }
    if (doc.contains("gammas")) {
        e.gammas.clear();
        for (double g : r.numbers(doc, "gammas")) e.gammas.push_back(r.guarded("gammas", [&] { return CoherenceParam(g); }));
    }
    e.repetitions = r.integer(doc, "repetitions", e.repetitions);
    e.calibration_repetitions = r.integer(doc, "calibration_repetitions", e.calibration_repetitions);
    e.reuse_calibration_runs = r.boolean(doc, "reuse_calibration_runs", e.reuse_calibration_runs);
    e.mean_total_detections = r.number(doc, "mean_total_detections", e.mean_total_detections);

    if (doc.contains("device")) {
        const auto& d = doc.at("device");
        r.reject_unknown(d, "device", {"crosstalk", "efficiency", "dark_rate"});
        e.device = r.guarded("device", [&] {
            return DeviceModel(r.number(d, "crosstalk", e.device.crosstalk()),
                               r.number(d, "efficiency", e.device.efficiency()),
                               r.number(d, "dark_rate", e.device.dark_rate()));
        });
    }
    if (doc.contains("drift") && !doc.at("drift").is_null()) {
        const auto& d = doc.at("drift");
        r.reject_unknown(d, "drift", {"std", "recenter_period", "bound"});
        DriftSpec spec;
        spec.step_std = r.number(d, "std", spec.step_std);
        spec.recenter_period = r.integer(d, "recenter_period", spec.recenter_period);
        spec.bound = r.number(d, "bound", spec.bound);
        e.drift = spec;
    }
    if (doc.contains("master_seed")) {
        const auto& v = doc.at("master_seed");
        if (!v.is_number_unsigned()) r.fail("master_seed", "'master_seed' must be a non-negative integer");
        e.master_seed = v.get<std::uint64_t>();
    }
    if (doc.contains("estimator")) {
        const auto& est = doc.at("estimator");
        r.reject_unknown(est, "estimator", {"tau_max", "grid_points"});
        e.estimator.tau_max = r.number(est, "tau_max", e.estimator.tau_max);
        e.estimator.grid_points = r.integer(est, "grid_points", e.estimator.grid_points);
    }
    out.fd_step = r.number(doc, "fd_step", out.fd_step);
    if (!(out.fd_step > 0.0)) r.fail("fd_step", "'fd_step' must be positive");

    try {
        e.validate();
    } catch (const ParameterError& err) {
        throw ConfigError(std::string(source) + ":1: " + err.what());
    }
    return out;
}

ToolConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

json config_to_json(const ToolConfig& config) {
    const auto& e = config.experiment;
    json j;
    j["mode_cutoff"] = e.pulse.mode_cutoff();
    j["tau_grid"] = json::array();
    for (const auto& t : e.tau_grid) j["tau_grid"].push_back(t.value());
    j["gammas"] = json::array();
    for (const auto& g : e.gammas) j["gammas"].push_back(g.value());
    j["repetitions"] = e.repetitions;
    j["calibration_repetitions"] = e.calibration_repetitions;
    j["reuse_calibration_runs"] = e.reuse_calibration_runs;
    j["mean_total_detections"] = e.mean_total_detections;
    j["device"] = {{"crosstalk", e.device.crosstalk()},
                   {"efficiency", e.device.efficiency()},
                   {"dark_rate", e.device.dark_rate()}};
    if (e.drift) {
        j["drift"] = {{"std", e.drift->step_std},
                      {"recenter_period", e.drift->recenter_period},
                      {"bound", e.drift->bound}};
    } else {
        j["drift"] = nullptr;
    }
    j["master_seed"] = e.master_seed;
    j["estimator"] = {{"tau_max", e.estimator.tau_max}, {"grid_points", e.estimator.grid_points}};
    j["fd_step"] = config.fd_step;
    return j;
}

} // namespace tempres
