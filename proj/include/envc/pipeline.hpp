// Run orchestration behind the CLI subcommands: resolved configuration,
// deterministic file outputs (CSV + JSON report + optional SVG), and the
// verification pipeline over a previously written contour CSV. Kept in the
// library so the end-to-end paths are testable in-process.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "envc/contour.hpp"
#include "envc/model.hpp"
#include "envc/risk.hpp"
#include "envc/verify.hpp"

namespace envc {

struct RunConfig {
    std::string model = "swell"; // preset name; "custom" uses custom_model
    std::optional<JointMetoceanModel> custom_model;

    std::optional<double> pe;
    std::optional<double> return_period_years;
    double states_per_hour = 1.0;

    std::size_t samples = 1'000'000;
    std::size_t directions = 360;
    std::uint64_t seed = 1;

    bool buffered = false;
    double scale_a = 1.0;
    std::size_t min_tail = 20;

    std::string out_dir = ".";
    bool svg = false;
    int threads = 0;

    // verify-specific
    std::string contour_csv;
    std::size_t n_verify = 1'000'000;
    std::uint64_t verify_seed = 2;
    std::size_t gamma_directions = 8;

    // Exactly one of {pe, return_period_years} must be set.
    double resolved_pe() const;
    void validate_common() const;
};

// JSON document mirroring RunConfig; unknown keys and wrong types raise
// usage_error naming the field.
RunConfig load_config_file(const std::string& path);

JointMetoceanModel resolve_model(const RunConfig& config);

struct ContourOutputs {
    std::string csv_path;
    std::string report_path;
    std::string svg_path; // empty unless requested
    bool classical_convex = false;
    bool buffered_convex = false;
    std::optional<bool> classical_inside_buffered;
    nlohmann::json report;
};

ContourOutputs run_contour(const RunConfig& config);

struct RiskcalcSpec {
    std::string input_path; // empty -> synthetic normal sample
    double normal_mu = -2.5;
    double normal_sigma = 1.5;
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 1;
    std::string out_dir = ".";

    bool synthetic() const { return input_path.empty(); }
};

struct RiskcalcOutputs {
    std::string report_path;
    RiskReport report;
    nlohmann::json json;
};

RiskcalcOutputs run_riskcalc(const RiskcalcSpec& spec);

struct VerifyOutputs {
    std::string report_path;
    bool pass = false;
    std::vector<std::string> warnings;
    nlohmann::json report;
};

VerifyOutputs run_verify(const RunConfig& config);

struct SampleOutputs {
    std::string csv_path;
    std::size_t n = 0;
};

SampleOutputs run_sample(const RunConfig& config);

} // namespace envc
