// Independent-simulation verification of constructed contours: per-direction
// exceedence calibration against the target probability, and the buffered
// failure probability of the boundary performance functions
// u'V - Cbar(u), which should equal the target exactly in distribution.
// Also hosts the analytic normal CVaR oracle used by the acceptance tests.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "envc/contour.hpp"
#include "envc/model.hpp"
#include "envc/risk.hpp"

namespace envc {

// Anything that can produce a fresh SampleSet for a given (n, seed); lets the
// checks run against the metocean model or synthetic Gaussian test models.
using SamplerFn = std::function<SampleSet(std::size_t n, std::uint64_t seed)>;

SamplerFn metocean_sampler(const JointMetoceanModel& model);
// Independent N(mean_x, sd_x) x N(mean_y, sd_y); the isotropic default is the
// rotational-invariance test model.
SamplerFn bivariate_normal_sampler(double mean_x = 0.0, double mean_y = 0.0,
                                   double sd_x = 1.0, double sd_y = 1.0);

struct DirectionCheck {
    std::size_t direction = 0;
    double estimate = 0.0;       // exceedence fraction or buffered failure prob
    double standard_error = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::string check_name;
    double target_pe = 0.0;
    std::size_t n_verify = 0;
    std::uint64_t seed = 0;
    std::vector<DirectionCheck> directions;
    double max_estimate = 0.0;
    bool pass = false; // every per-direction check within 3 standard errors
};

// Fraction of fresh draws with u_j'V > C_j per direction, compared against
// pe at 3 binomial standard errors. The verification seed must differ from
// the construction seed (the caller enforces/warns; this function trusts it).
VerificationReport check_exceedence(const SamplerFn& sampler,
                                    const DirectionalSupport& support,
                                    const DirectionGrid& grid, double pe,
                                    std::size_t n_verify, std::uint64_t seed,
                                    int threads = 0);

// Sorted sample of the boundary performance function u'V - cbar.
ScalarSample support_margin_sample(const SampleSet& samples, double ux, double uy,
                                   double cbar);

struct MarginCheckOptions {
    std::size_t bootstrap_reps = 200;
    std::size_t min_tail = 20;
    std::size_t direction_stride = 1; // check every stride-th grid direction
    int threads = 0;
};

// Buffered failure probability of u'V - Cbar(u) on fresh draws, per checked
// direction, compared against pe at 3 standard errors. The standard error is
// a multinomial bootstrap estimate floored by the binomial bound, and is
// recorded per direction in the report.
VerificationReport check_margin_buffered(const SamplerFn& sampler,
                                         const DirectionalSupport& support,
                                         const DirectionGrid& grid, double pe,
                                         std::size_t n_verify, std::uint64_t seed,
                                         const MarginCheckOptions& opt = {});

// Verifies the superquantile ordering (over alpha_grid) and the buffered
// failure probability ordering for a pointwise-dominated pair g1 <= g2.
// Pairing is by index before sorting; violations of the premise raise
// input_error. Alpha levels where either tail degenerates are skipped.
bool check_monotonicity(const std::vector<double>& g1, const std::vector<double>& g2,
                        std::span<const double> alpha_grid);

struct NormalCvarSolution {
    double z = 0.0;       // standardized crossing point
    double alpha = 0.0;   // Phi(z)
    double q_alpha = 0.0; // mu + sigma * z
    double p_f_buffered = 0.0;
};

// Analytic buffered failure probability of N(mu, sigma^2) with mu < 0:
// solves hazard(z) = -mu/sigma by bisection to |dz| <= 1e-10.
NormalCvarSolution normal_cvar_oracle(double mu, double sigma);

// Multinomial bootstrap standard error of the buffered failure probability
// estimator on a sorted sample. Exposed for the acceptance suite.
double bootstrap_pbar_se(std::span<const double> sorted_values, std::size_t reps,
                         const CounterRng& rng);

} // namespace envc
