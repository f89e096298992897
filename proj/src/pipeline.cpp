#include "envc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "envc/errors.hpp"
#include "envc/io.hpp"
#include "envc/rng.hpp"

namespace envc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json num_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open output file: " + path);
    out << doc.dump(2) << '\n';
}

std::string join_path(const std::string& dir, const char* name) {
    return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw input_error("cannot create output directory '" + dir + "': " + ec.message());
}

json risk_to_json(const RiskReport& r, std::size_t n) {
    return json{{"n", n},
                {"p_f", r.p_f},
                {"reliability", r.reliability},
                {"alpha", r.alpha},
                {"q_alpha", num_or_null(r.q_alpha)},
                {"superquantile_at_alpha", num_or_null(r.superquantile_at_alpha)},
                {"p_f_buffered", r.p_f_buffered},
                {"reliability_buffered", r.reliability_buffered}};
}

json verification_to_json(const VerificationReport& rep) {
    json dirs = json::array();
    for (const auto& d : rep.directions) {
        dirs.push_back(json{{"direction", d.direction},
                            {"estimate", d.estimate},
                            {"standard_error", d.standard_error},
                            {"pass", d.pass}});
    }
    return json{{"check", rep.check_name},    {"target_pe", rep.target_pe},
                {"n_verify", rep.n_verify},   {"seed", rep.seed},
                {"max_estimate", rep.max_estimate}, {"pass", rep.pass},
                {"directions", std::move(dirs)}};
}

json model_to_json(const JointMetoceanModel& m) {
    return json{{"id", m.id},
                {"weibull",
                 {{"location", m.marginal.location},
                  {"scale", m.marginal.scale},
                  {"shape", m.marginal.shape}}},
                {"lognormal",
                 {{"a1", m.conditional.a1},
                  {"a2", m.conditional.a2},
                  {"a3", m.conditional.a3},
                  {"b1", m.conditional.b1},
                  {"b2", m.conditional.b2},
                  {"b3", m.conditional.b3}}}};
}

json config_echo(const RunConfig& c, double pe) {
    json j{{"model", c.model},
           {"pe", pe},
           {"states_per_hour", c.states_per_hour},
           {"samples", c.samples},
           {"directions", c.directions},
           {"seed", c.seed},
           {"buffered", c.buffered},
           {"scale_a", c.scale_a},
           {"min_tail", c.min_tail},
           {"out_dir", c.out_dir},
           {"svg", c.svg},
           {"threads", c.threads}};
    if (c.return_period_years) j["return_period_years"] = *c.return_period_years;
    if (c.custom_model) j["custom_model"] = model_to_json(*c.custom_model);
    return j;
}

} // namespace

double RunConfig::resolved_pe() const {
    if (pe && return_period_years) {
        throw usage_error("give either 'pe' or 'return_period_years', not both");
    }
    if (pe) {
        if (!(*pe > 0.0 && *pe < 1.0)) {
            throw usage_error("field 'pe' must lie strictly in (0,1)");
        }
        return *pe;
    }
    if (return_period_years) {
        ReturnPeriodSpec spec;
        spec.return_period_years = *return_period_years;
        spec.states_per_hour = states_per_hour;
        return return_period_to_pe(spec);
    }
    throw usage_error("one of 'pe' or 'return_period_years' is required");
}

void RunConfig::validate_common() const {
    if (samples < 1) throw usage_error("field 'samples' must be >= 1");
    if (directions < 3) throw usage_error("field 'directions' must be >= 3");
    if (!(scale_a > 0.0)) throw usage_error("field 'scale_a' must be positive");
    if (min_tail < 1) throw usage_error("field 'min_tail' must be >= 1");
    if (out_dir.empty()) throw usage_error("field 'out_dir' must not be empty");
}

JointMetoceanModel resolve_model(const RunConfig& config) {
    if (config.model == "swell") return swell_model();
    if (config.model == "windsea") return windsea_model();
    if (config.model == "custom") {
        if (!config.custom_model) {
            throw usage_error("field 'model' is \"custom\" but no custom model parameters given");
        }
        return *config.custom_model;
    }
    throw usage_error("field 'model': unknown preset '" + config.model +
                      "' (expected swell, windsea or custom)");
}

namespace {

double require_number(const json& j, const char* field) {
    if (!j.is_number()) {
        throw usage_error(std::string("config field '") + field + "' must be a number");
    }
    return j.get<double>();
}

std::size_t require_count(const json& j, const char* field) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
        throw usage_error(std::string("config field '") + field +
                          "' must be a non-negative integer");
    }
    return j.get<std::size_t>();
}

JointMetoceanModel model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("weibull") || !j.contains("lognormal")) {
        throw usage_error("config field 'model': custom model needs 'weibull' and 'lognormal' objects");
    }
    JointMetoceanModel m;
    const json& w = j.at("weibull");
    m.marginal.location = require_number(w.at("location"), "model.weibull.location");
    m.marginal.scale = require_number(w.at("scale"), "model.weibull.scale");
    m.marginal.shape = require_number(w.at("shape"), "model.weibull.shape");
    const json& l = j.at("lognormal");
    m.conditional.a1 = require_number(l.at("a1"), "model.lognormal.a1");
    m.conditional.a2 = require_number(l.at("a2"), "model.lognormal.a2");
    m.conditional.a3 = require_number(l.at("a3"), "model.lognormal.a3");
    m.conditional.b1 = require_number(l.at("b1"), "model.lognormal.b1");
    m.conditional.b2 = require_number(l.at("b2"), "model.lognormal.b2");
    m.conditional.b3 = require_number(l.at("b3"), "model.lognormal.b3");
    m.id = j.value("id", std::string("custom"));
    return m;
}

} // namespace

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw usage_error("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw usage_error("config file must hold a JSON object");

    RunConfig c;
    for (const auto& [key, value] : doc.items()) {
        if (key == "model") {
            if (value.is_string()) {
                c.model = value.get<std::string>();
            } else {
                c.custom_model = model_from_json(value);
                c.model = "custom";
            }
        } else if (key == "pe") {
            c.pe = require_number(value, "pe");
        } else if (key == "return_period_years") {
            c.return_period_years = require_number(value, "return_period_years");
        } else if (key == "states_per_hour") {
            c.states_per_hour = require_number(value, "states_per_hour");
        } else if (key == "samples") {
            c.samples = require_count(value, "samples");
        } else if (key == "directions") {
            c.directions = require_count(value, "directions");
        } else if (key == "seed") {
            c.seed = static_cast<std::uint64_t>(require_count(value, "seed"));
        } else if (key == "buffered") {
            if (!value.is_boolean()) throw usage_error("config field 'buffered' must be a boolean");
            c.buffered = value.get<bool>();
        } else if (key == "scale_a") {
            c.scale_a = require_number(value, "scale_a");
        } else if (key == "min_tail") {
            c.min_tail = require_count(value, "min_tail");
        } else if (key == "out_dir") {
            if (!value.is_string()) throw usage_error("config field 'out_dir' must be a string");
            c.out_dir = value.get<std::string>();
        } else if (key == "svg") {
            if (!value.is_boolean()) throw usage_error("config field 'svg' must be a boolean");
            c.svg = value.get<bool>();
        } else if (key == "threads") {
            c.threads = static_cast<int>(require_number(value, "threads"));
        } else if (key == "contour_csv") {
            if (!value.is_string()) throw usage_error("config field 'contour_csv' must be a string");
            c.contour_csv = value.get<std::string>();
        } else if (key == "n_verify") {
            c.n_verify = require_count(value, "n_verify");
        } else if (key == "verify_seed") {
            c.verify_seed = static_cast<std::uint64_t>(require_count(value, "verify_seed"));
        } else if (key == "gamma_directions") {
            c.gamma_directions = require_count(value, "gamma_directions");
        } else {
            throw usage_error("config file has unknown field '" + key + "'");
        }
    }
    return c;
}

ContourOutputs run_contour(const RunConfig& config) {
    config.validate_common();
    const double pe = config.resolved_pe();
    const JointMetoceanModel model = resolve_model(config);

    const SampleSet samples = joint_sample(model, config.samples, config.seed);
    const DirectionGrid grid(config.directions);
    const DirectionalSupport support =
        build_support(samples, grid, {pe, config.min_tail, config.threads});

    std::vector<double> scaled(support.buffered.size());
    for (std::size_t j = 0; j < scaled.size(); ++j) {
        scaled[j] = scale_support(support.buffered[j], config.scale_a);
    }
    const ContourPolygon classical =
        build_polygon(support, grid, ContourKind::classical);
    const ContourPolygon buffered =
        build_polygon(std::span<const double>(scaled), grid, ContourKind::buffered);

    ensure_out_dir(config.out_dir);
    ContourOutputs out;
    out.csv_path = join_path(config.out_dir, "contour.csv");
    out.report_path = join_path(config.out_dir, "contour_report.json");
    out.classical_convex = classical.all_convex();
    out.buffered_convex = buffered.all_convex();

    write_contour_csv(out.csv_path,
                      make_contour_table(grid, support, config.scale_a, classical, buffered));

    if (config.buffered && out.classical_convex && out.buffered_convex) {
        out.classical_inside_buffered = polygon_contains(buffered, classical);
    }
    if (config.svg) {
        out.svg_path = join_path(config.out_dir, "contour.svg");
        write_contour_svg(out.svg_path, classical, config.buffered ? &buffered : nullptr);
    }

    const auto [cmin, cmax] =
        std::minmax_element(support.classical.begin(), support.classical.end());
    const auto [bmin, bmax] =
        std::minmax_element(support.buffered.begin(), support.buffered.end());
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < support.classical.size(); ++j) {
        min_gap = std::min(min_gap, support.buffered[j] - support.classical[j]);
    }

    json flagged = json::array();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (!classical.convex_ok[j] || !buffered.convex_ok[j]) flagged.push_back(j);
    }

    out.report = json{
        {"command", "contour"},
        {"config", config_echo(config, pe)},
        {"model", model_to_json(model)},
        {"pe", pe},
        {"samples", config.samples},
        {"directions", config.directions},
        {"seed", config.seed},
        {"tail_count", support.tail_count},
        {"support",
         {{"classical_min", *cmin},
          {"classical_max", *cmax},
          {"buffered_min", *bmin},
          {"buffered_max", *bmax},
          {"min_buffered_minus_classical", min_gap}}},
        {"convexity",
         {{"classical_ok", out.classical_convex},
          {"buffered_ok", out.buffered_convex},
          {"flagged_directions", std::move(flagged)}}},
        {"outputs", {{"csv", out.csv_path}, {"svg", out.svg_path}}},
    };
    if (out.classical_inside_buffered) {
        out.report["containment"] = {{"classical_inside_buffered", *out.classical_inside_buffered}};
    } else {
        out.report["containment"] = nullptr;
    }
    write_json_file(out.report_path, out.report);
    return out;
}

RiskcalcOutputs run_riskcalc(const RiskcalcSpec& spec) {
    std::vector<double> values;
    json input;
    if (spec.synthetic()) {
        if (spec.samples < 1) throw usage_error("field 'samples' must be >= 1");
        if (!(spec.normal_sigma > 0.0)) throw usage_error("field 'normal_sigma' must be positive");
        const CounterRng rng(spec.seed);
        values.resize(spec.samples);
        for (std::size_t i = 0; i < spec.samples; ++i) {
            values[i] = spec.normal_mu + spec.normal_sigma * rng.normal(i);
        }
        input = json{{"synthetic_normal",
                      {{"mu", spec.normal_mu},
                       {"sigma", spec.normal_sigma},
                       {"samples", spec.samples},
                       {"seed", spec.seed}}}};
    } else {
        values = read_scalar_file(spec.input_path);
        input = json{{"file", spec.input_path}};
    }

    const ScalarSample sample = ScalarSample::from_unsorted(std::move(values));
    RiskcalcOutputs out;
    out.report = buffered_failure_probability(sample);
    out.json = json{{"command", "riskcalc"},
                    {"input", std::move(input)},
                    {"report", risk_to_json(out.report, sample.size())}};

    if (spec.synthetic() && spec.normal_mu < 0.0) {
        const NormalCvarSolution oracle = normal_cvar_oracle(spec.normal_mu, spec.normal_sigma);
        out.json["oracle"] = json{{"alpha", oracle.alpha},
                                  {"q_alpha", oracle.q_alpha},
                                  {"p_f_buffered", oracle.p_f_buffered},
                                  {"p_f", stats::normal_sf(-spec.normal_mu / spec.normal_sigma)},
                                  {"z", oracle.z}};
    }

    ensure_out_dir(spec.out_dir);
    out.report_path = join_path(spec.out_dir, "risk_report.json");
    write_json_file(out.report_path, out.json);
    return out;
}

VerifyOutputs run_verify(const RunConfig& config) {
    if (config.contour_csv.empty()) {
        throw usage_error("field 'contour_csv' is required for verify");
    }
    const double pe = config.resolved_pe();
    const JointMetoceanModel model = resolve_model(config);

    const ContourTable table = read_contour_csv(config.contour_csv);
    const DirectionGrid grid = grid_from_table(table);
    const DirectionalSupport support = support_from_table(table, pe, 0);

    VerifyOutputs out;
    if (config.verify_seed == config.seed) {
        out.warnings.push_back(
            "verification seed equals construction seed; calibration will be "
            "optimistically biased");
    }

    const SamplerFn sampler = metocean_sampler(model);
    const VerificationReport exceedence = check_exceedence(
        sampler, support, grid, pe, config.n_verify, config.verify_seed, config.threads);

    MarginCheckOptions margin_opt;
    margin_opt.min_tail = config.min_tail;
    margin_opt.threads = config.threads;
    margin_opt.direction_stride =
        std::max<std::size_t>(1, grid.size() / std::max<std::size_t>(1, config.gamma_directions));
    const VerificationReport margin = check_margin_buffered(
        sampler, support, grid, pe, config.n_verify, config.verify_seed, margin_opt);

    out.pass = exceedence.pass && margin.pass;
    out.report = json{{"command", "verify"},
                      {"config", config_echo(config, pe)},
                      {"contour_csv", config.contour_csv},
                      {"construction_seed", config.seed},
                      {"exceedence", verification_to_json(exceedence)},
                      {"margin_buffered", verification_to_json(margin)},
                      {"warnings", out.warnings},
                      {"pass", out.pass}};

    ensure_out_dir(config.out_dir);
    out.report_path = join_path(config.out_dir, "verify_report.json");
    write_json_file(out.report_path, out.report);
    return out;
}

SampleOutputs run_sample(const RunConfig& config) {
    config.validate_common();
    const JointMetoceanModel model = resolve_model(config);
    const SampleSet samples = joint_sample(model, config.samples, config.seed);
    ensure_out_dir(config.out_dir);
    SampleOutputs out;
    out.csv_path = join_path(config.out_dir, "samples.csv");
    out.n = samples.size();
    write_sample_csv(out.csv_path, samples);
    return out;
}

} // namespace envc
