#pragma once

// Experiment configs and results as JSON documents.
//
// A config names a kind, a seed, optional shots and a kind-specific
// "params" object. Results echo the config and carry the exact outcome
// distribution, derived scalars and notes. Only the "timing" member varies
// between runs of the same config.

#include "qbsc/errors.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qbsc {

struct Diagnostic {
    std::string field;
    std::string message;
};

std::string to_string(const Diagnostic& diagnostic);

class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

inline const std::vector<std::string> kExperimentKinds{"compare", "threshold", "minimum", "zero",
                                                       "prime",   "factor",    "conditional"};

struct ExperimentConfig {
    std::string kind;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> shots;
    nlohmann::json params = nlohmann::json::object();

    nlohmann::json to_json() const;
};

/// Every precondition violation found in the document; empty when valid.
std::vector<Diagnostic> validate_config(const nlohmann::json& document);

/// Throws ConfigError with all diagnostics when the document is invalid.
ExperimentConfig parse_config(const nlohmann::json& document);

/// Reads a JSON file; throws ConfigError naming the file on I/O or syntax errors.
nlohmann::json load_json_file(const std::filesystem::path& path);

nlohmann::json run_experiment(const ExperimentConfig& config);

/// "outcome,probability" rows sorted by outcome, from a result's distribution.
std::string plot_csv(const nlohmann::json& result);

} // namespace qbsc
