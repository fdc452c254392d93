/// @file config.hpp
/// @brief JSON experiment configuration: strict schema, typed result.
///
/// Top-level keys: "domain", "field", "field2", "flow", "grid", "times",
/// "options". Unknown keys anywhere are rejected.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "helicity/transport.hpp"

namespace helicity {

/// Schema or I/O problem with a configuration; maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double h = 0.1;
    int padding = 2;
};

struct ExperimentConfig {
    nlohmann::json resolved;  // input with defaults filled in
    std::optional<Domain> domain;
    std::optional<AnalyticField> field;
    std::optional<AnalyticField> field2;
    std::optional<FlowFamily> flow;
    GridSpec grid;
    std::vector<double> times;
    nlohmann::json options = nlohmann::json::object();
};

ExperimentConfig parse_config(const nlohmann::json& j, std::optional<double> h_override = std::nullopt);
ExperimentConfig load_config(const std::string& path, std::optional<double> h_override = std::nullopt);

Domain parse_domain(const nlohmann::json& j);
/// `domain` resolves "harmonic_torus" fields given by torus index.
AnalyticField parse_field(const nlohmann::json& j, const std::optional<Domain>& domain);
FlowFamily parse_flow(const nlohmann::json& j);
PolylineCurve parse_curve(const nlohmann::json& j);

/// Typed access to command options with defaults; throws ConfigError on a
/// missing required key or a type mismatch.
class OptionReader {
public:
    explicit OptionReader(const nlohmann::json& options, std::string context = "options");

    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
    bool has(const std::string& key) const { return j_.contains(key); }
    const nlohmann::json& child(const std::string& key) const;
    /// Rejects keys outside `allowed`.
    void only(std::initializer_list<const char*> allowed) const;

private:
    const nlohmann::json& j_;
    std::string ctx_;
};

}  // namespace helicity
