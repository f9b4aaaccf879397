// qbsc: run, validate and plot comparator-oracle experiments.
//
// Exit codes: 0 success, 1 invalid config, 2 runtime error.

#include "qbsc/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

void report(const qbsc::ConfigError& e)
{
    for (const auto& d : e.diagnostics()) {
        std::cerr << "error: " << qbsc::to_string(d) << '\n';
    }
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) {
        throw qbsc::Error("cannot write '" + path + "'");
    }
    out << text;
    if (!out.flush()) {
        throw qbsc::Error("write to '" + path + "' failed");
    }
}

int run(const std::string& config_path, const std::string& out_path, std::optional<std::uint64_t> seed,
        std::optional<std::uint64_t> shots)
{
    qbsc::ExperimentConfig config;
    try {
        nlohmann::json document = qbsc::load_json_file(config_path);
        if (document.is_object() && seed) {
            document["seed"] = *seed;
        }
        if (document.is_object() && shots) {
            document["shots"] = *shots;
        }
        config = qbsc::parse_config(document);
    } catch (const qbsc::ConfigError& e) {
        report(e);
        return kExitInvalid;
    }
    try {
        const nlohmann::json result = qbsc::run_experiment(config);
        write_text(out_path, result.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

int validate(const std::string& config_path)
{
    try {
        const auto diagnostics = qbsc::validate_config(qbsc::load_json_file(config_path));
        for (const auto& d : diagnostics) {
            std::cerr << "error: " << qbsc::to_string(d) << '\n';
        }
        if (!diagnostics.empty()) {
            return kExitInvalid;
        }
    } catch (const qbsc::ConfigError& e) {
        report(e);
        return kExitInvalid;
    }
    std::cout << "ok\n";
    return kExitOk;
}

int plot(const std::string& result_path, const std::string& out_path)
{
    try {
        write_text(out_path, qbsc::plot_csv(qbsc::load_json_file(result_path)));
    } catch (const qbsc::ConfigError& e) {
        report(e);
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Grover search experiments with a quantum bit-string comparator oracle"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string result_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;

    auto* run_cmd = app.add_subcommand("run", "Run an experiment config and write a JSON result");
    run_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run_cmd->add_option("--out", out_path, "Result file to write")->required();
    run_cmd->add_option("--seed", seed, "Override the config seed");
    run_cmd->add_option("--shots", shots, "Override the number of sampled shots");

    auto* validate_cmd = app.add_subcommand("validate", "Check a config without running it");
    validate_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();

    auto* plot_cmd = app.add_subcommand("plot", "Write outcome,probability CSV from a result");
    plot_cmd->add_option("--result", result_path, "Result file from 'run'")->required();
    plot_cmd->add_option("--out", out_path, "CSV file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    if (*run_cmd) {
        return run(config_path, out_path, seed, shots);
    }
    if (*validate_cmd) {
        return validate(config_path);
    }
    return plot(result_path, out_path);
}
