#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tempres/cli.hpp"
#include "tempres/config_io.hpp"
#include "tempres/csv_io.hpp"
#include "tempres/errors.hpp"
#include "tempres/figures.hpp"
#include "tempres/manifest.hpp"

using namespace tempres;
namespace fs = std::filesystem;

namespace {

std::string message_of(const std::string& text) {
    try {
        parse_config(text, "cfg.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("tempres_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

int run(std::vector<std::string> args) {
    std::ostringstream out, err;
    args.insert(args.begin(), "tempres");
    return run_cli(args, out, err);
}

} // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse_config("{}");
    CHECK(cfg.experiment.tau_grid.size() == 7);
    const auto c2 = parse_config(R"({"tau_grid": [0, 0.5, 1, 1.5, 2], "gammas": [0.25], "master_seed": 7,
        "device": {"crosstalk": 0.02}, "drift": {"std": 0.05}})");
    CHECK(c2.experiment.tau_grid.size() == 5);
    CHECK(c2.experiment.master_seed == 7);
    CHECK(c2.experiment.device.crosstalk() == 0.02);
    REQUIRE(c2.experiment.drift.has_value());
    CHECK(c2.experiment.drift->step_std == 0.05);

    CHECK(message_of("{\n  \"repetitions\": 10,\n  \"bogus\": 1\n}").rfind("cfg.json:3:", 0) == 0);
    CHECK(message_of("{\n\n  \"gammas\": [0.9]\n}").rfind("cfg.json:3:", 0) == 0);
    CHECK(message_of("{\n  \"repetitions\": \"ten\"\n}").rfind("cfg.json:2:", 0) == 0);
    CHECK(message_of("{\n  \"repetitions\": 1,\n").rfind("cfg.json:", 0) == 0);

    const auto echo = parse_config(config_to_json(c2).dump());
    CHECK(echo.experiment.master_seed == 7);
    CHECK(echo.experiment.tau_grid.size() == 5);
    CHECK(echo.experiment.drift->step_std == 0.05);
}

TEST_CASE("records round trip and mismatch detection") {
    auto cfg = ExperimentConfig::defaults();
    cfg.repetitions = 3;
    const auto recs = run_experiment(cfg);
    std::ostringstream os;
    write_records_csv(os, recs);
    const std::string text = os.str();
    CHECK(text.rfind(std::string(kRecordsHeader) + "\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 3 * 35 * 8);
    std::istringstream is(text);
    CHECK(read_records_csv(is, cfg) == recs);

    auto other = cfg;
    other.tau_grid[3] = TimeOffset(0.45);
    std::istringstream is2(text);
    CHECK_THROWS_AS(read_records_csv(is2, other), DataMismatchError);
    auto more = cfg;
    more.repetitions = 4;
    std::istringstream is3(text);
    CHECK_THROWS_AS(read_records_csv(is3, more), DataMismatchError);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.25) == "0.25");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("sha256 digest") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cli exit codes and outputs") {
    const auto dir = scratch("cli");
    const auto cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"repetitions": 5, "calibration_repetitions": 50})";

    CHECK(run({"simulate", "--config", cfg.string(), "--out", (dir / "a").string()}) == kExitOk);
    CHECK(run({"simulate", "--config", cfg.string(), "--out", (dir / "b").string()}) == kExitOk);
    CHECK(slurp(dir / "a" / "records.csv") == slurp(dir / "b" / "records.csv"));
    CHECK(fs::exists(dir / "a" / "simulate.manifest.json"));

    CHECK(run({"simulate", "--config", cfg.string(), "--seed", "99", "--out", (dir / "c").string()}) == kExitOk);
    CHECK(slurp(dir / "c" / "records.csv") != slurp(dir / "a" / "records.csv"));
    CHECK(slurp(dir / "c" / "simulate.manifest.json").find("\"master_seed\": 99") != std::string::npos);

    CHECK(run({"estimate", "--config", cfg.string(), "--records", (dir / "a" / "records.csv").string(), "--out",
               (dir / "a").string()}) == kExitOk);
    const auto stats = slurp(dir / "a" / "stats.csv");
    CHECK(std::count(stats.begin(), stats.end(), '\n') == 36);

    // records made under one grid, estimated under another
    const auto cfg2 = dir / "cfg2.json";
    std::ofstream(cfg2) << R"({"repetitions": 5, "tau_grid": [0, 0.1, 0.2, 0.4, 0.6, 0.8, 1.2]})";
    CHECK(run({"estimate", "--config", cfg2.string(), "--records", (dir / "a" / "records.csv").string(), "--out",
               (dir / "d").string()}) == kExitDataMismatch);

    const auto bad = dir / "bad.json";
    std::ofstream(bad) << "{\n  \"unknown_key\": 1\n}";
    CHECK(run({"fisher", "--config", bad.string(), "--out", (dir / "e").string()}) == kExitConfig);
    CHECK(run({"fisher", "--config", (dir / "missing.json").string()}) == kExitConfig);
    CHECK(run({"reproduce", "fig9", "--out", (dir / "e").string()}) == kExitConfig);
    CHECK(run({"frobnicate"}) == kExitConfig);
    CHECK(run({"estimate", "--records", (dir / "nope.csv").string()}) == kExitIo);

    // an existing file where the output directory should go
    std::ofstream(dir / "blocker") << "x";
    CHECK(run({"simulate", "--config", cfg.string(), "--out", (dir / "blocker").string()}) == kExitIo);
}

TEST_CASE("figure series") {
    auto cfg = ExperimentConfig::defaults();
    cfg.repetitions = 10;
    cfg.calibration_repetitions = 100;
    const auto a = analyze(cfg);
    const auto f3 = figure_variances(cfg, a);
    int bounds = 0, data = 0;
    for (const auto& s : f3.series) (s.is_bound ? bounds : data)++;
    CHECK(data == 5);
    CHECK(bounds == 2);
    const auto svg = render_svg(f3);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("href") == std::string::npos);
    CHECK(figure_estimates(cfg, a).series.size() == 3);
    auto no_coherent = cfg;
    no_coherent.gammas = {CoherenceParam(0.5)};
    CHECK_THROWS_AS(figure_resources(no_coherent, a), ConfigError);
}
