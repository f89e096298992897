// envcontour — Monte Carlo environmental contours and buffered risk measures.
//
// Subcommands:
//   contour   sample a metocean model, build classical + buffered contours
//   riskcalc  risk measures of a scalar performance sample (file or synthetic)
//   verify    re-simulate and check a written contour against its target
//   sample    write raw (t, h) draws
//
// Exit codes: 0 ok, 2 usage, 3 insufficient tail, 4 geometry,
//             5 verification failure, 6 bad input file, 1 internal.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "envc/errors.hpp"
#include "envc/pipeline.hpp"

namespace {

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_usage = 2,
    exit_insufficient_tail = 3,
    exit_geometry = 4,
    exit_verification = 5,
    exit_input = 6,
};

struct CommonFlags {
    std::optional<std::string> config_path;
    std::optional<std::string> model;
    std::optional<double> pe;
    std::optional<double> return_period_years;
    std::optional<double> states_per_hour;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> directions;
    std::optional<std::uint64_t> seed;
    std::optional<bool> buffered;
    std::optional<double> scale_a;
    std::optional<std::size_t> min_tail;
    std::optional<std::string> out_dir;
    std::optional<bool> svg;
    std::optional<int> threads;
    std::optional<std::string> contour_csv;
    std::optional<std::size_t> n_verify;
    std::optional<std::uint64_t> verify_seed;
    std::optional<std::size_t> gamma_directions;
};

void add_common_options(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file; flags override its values");
    cmd->add_option("--model", f.model, "model preset: swell, windsea (custom via --config)");
    cmd->add_option("--pe", f.pe, "target exceedence probability");
    cmd->add_option("--return-period-years", f.return_period_years,
                    "return period; converted to P_e via sea-state counting");
    cmd->add_option("--states-per-hour", f.states_per_hour, "sea states per hour (default 1)");
    cmd->add_option("--samples", f.samples, "Monte Carlo sample size N");
    cmd->add_option("--directions", f.directions, "number of contour directions m");
    cmd->add_option("--seed", f.seed, "construction seed");
    cmd->add_option("--scale-a", f.scale_a, "inflation factor for the buffered supports");
    cmd->add_option("--min-tail", f.min_tail, "minimum tail sample count per direction");
    cmd->add_option("--out-dir", f.out_dir, "output directory");
    cmd->add_option("--threads", f.threads, "worker threads (0 = hardware)");
}

envc::RunConfig merge_config(const CommonFlags& f) {
    envc::RunConfig c;
    if (f.config_path) c = envc::load_config_file(*f.config_path);
    if (f.model) c.model = *f.model;
    if (f.pe) c.pe = *f.pe;
    if (f.return_period_years) c.return_period_years = *f.return_period_years;
    if (f.states_per_hour) c.states_per_hour = *f.states_per_hour;
    if (f.samples) c.samples = *f.samples;
    if (f.directions) c.directions = *f.directions;
    if (f.seed) c.seed = *f.seed;
    if (f.buffered) c.buffered = *f.buffered;
    if (f.scale_a) c.scale_a = *f.scale_a;
    if (f.min_tail) c.min_tail = *f.min_tail;
    if (f.out_dir) c.out_dir = *f.out_dir;
    if (f.svg) c.svg = *f.svg;
    if (f.threads) c.threads = *f.threads;
    if (f.contour_csv) c.contour_csv = *f.contour_csv;
    if (f.n_verify) c.n_verify = *f.n_verify;
    if (f.verify_seed) c.verify_seed = *f.verify_seed;
    if (f.gamma_directions) c.gamma_directions = *f.gamma_directions;
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo environmental contours with buffered failure probabilities"};
    app.require_subcommand(1);

    CommonFlags contour_flags;
    bool contour_buffered = false, contour_svg = false;
    CLI::App* contour = app.add_subcommand("contour", "build classical and buffered contours");
    add_common_options(contour, contour_flags);
    contour->add_flag("--buffered", contour_buffered,
                      "report the buffered contour and the containment verdict");
    contour->add_flag("--svg", contour_svg, "emit an SVG overlay plot");

    struct {
        std::optional<std::string> input;
        std::optional<double> mu, sigma;
        std::optional<std::size_t> samples;
        std::optional<std::uint64_t> seed;
        std::optional<std::string> out_dir;
    } risk_flags;
    CLI::App* riskcalc = app.add_subcommand("riskcalc", "risk measures of a scalar sample");
    riskcalc->add_option("--input", risk_flags.input, "file with one value per line");
    riskcalc->add_option("--normal-mu", risk_flags.mu, "synthetic normal mean");
    riskcalc->add_option("--normal-sigma", risk_flags.sigma, "synthetic normal standard deviation");
    riskcalc->add_option("--samples", risk_flags.samples, "synthetic sample size");
    riskcalc->add_option("--seed", risk_flags.seed, "synthetic sample seed");
    riskcalc->add_option("--out-dir", risk_flags.out_dir, "output directory");

    CommonFlags verify_flags;
    CLI::App* verify = app.add_subcommand("verify", "verify a contour CSV by fresh simulation");
    add_common_options(verify, verify_flags);
    verify->add_option("--contour", verify_flags.contour_csv, "contour CSV from a contour run");
    verify->add_option("--n-verify", verify_flags.n_verify, "fresh draws per check");
    verify->add_option("--verify-seed", verify_flags.verify_seed, "verification seed");
    verify->add_option("--gamma-directions", verify_flags.gamma_directions,
                       "number of directions for the margin check");

    CommonFlags sample_flags;
    CLI::App* sample = app.add_subcommand("sample", "write raw (t, h) draws");
    add_common_options(sample, sample_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (contour->parsed()) {
            if (contour_buffered) contour_flags.buffered = true;
            if (contour_svg) contour_flags.svg = true;
            const envc::ContourOutputs out = envc::run_contour(merge_config(contour_flags));
            std::cout << out.report.dump(2) << '\n';
            return exit_ok;
        }
        if (riskcalc->parsed()) {
            envc::RiskcalcSpec spec;
            if (risk_flags.input) spec.input_path = *risk_flags.input;
            if (risk_flags.mu) spec.normal_mu = *risk_flags.mu;
            if (risk_flags.sigma) spec.normal_sigma = *risk_flags.sigma;
            if (risk_flags.samples) spec.samples = *risk_flags.samples;
            if (risk_flags.seed) spec.seed = *risk_flags.seed;
            if (risk_flags.out_dir) spec.out_dir = *risk_flags.out_dir;
            if (spec.synthetic() && (!risk_flags.mu || !risk_flags.sigma)) {
                throw envc::usage_error(
                    "riskcalc needs --input FILE or both --normal-mu and --normal-sigma");
            }
            const envc::RiskcalcOutputs out = envc::run_riskcalc(spec);
            std::cout << out.json.dump(2) << '\n';
            return exit_ok;
        }
        if (verify->parsed()) {
            const envc::VerifyOutputs out = envc::run_verify(merge_config(verify_flags));
            for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
            std::cout << out.report.dump(2) << '\n';
            return out.pass ? exit_ok : exit_verification;
        }
        if (sample->parsed()) {
            const envc::SampleOutputs out = envc::run_sample(merge_config(sample_flags));
            std::cout << "wrote " << out.n << " draws to " << out.csv_path << '\n';
            return exit_ok;
        }
    } catch (const envc::usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const envc::parameter_error& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return exit_usage;
    } catch (const envc::conditional_model_error& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return exit_usage;
    } catch (const envc::insufficient_tail_error& e) {
        std::cerr << "insufficient tail: " << e.what() << '\n';
        return exit_insufficient_tail;
    } catch (const envc::geometry_error& e) {
        std::cerr << "geometry error: " << e.what() << '\n';
        return exit_geometry;
    } catch (const envc::input_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_usage;
}
