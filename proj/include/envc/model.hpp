// Joint long-term metocean model: a three-parameter Weibull marginal for
// significant wave height H and a conditional log-normal for wave period T,
//
//     f_TH(t,h) = f_H(h) * f_T|H(t|h),
//     ln T | H=h  ~  N(mu(h), sigma(h)^2),
//     mu(h)    = a1 + a2 * h^a3,
//     sigma(h) = b1 + b2 * exp(b3 * h).
//
// Sampling is exact: inverse-CDF for the marginal, a log-space Gaussian
// transform for the conditional. Both are driven by a counter-based stream,
// so a SampleSet is a pure function of (model, n, seed).

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "envc/rng.hpp"

namespace envc {

struct Weibull3Params {
    double location = 0.0; // gamma, same units as wave height (m)
    double scale = 1.0;    // alpha > 0 (m)
    double shape = 1.0;    // beta > 0

    void validate() const; // throws parameter_error
};

// Density query result. `divergent` marks the unbounded left endpoint of a
// shape < 1 Weibull (density -> inf as h -> location+), reported instead of
// returning a non-finite value.
struct Density {
    double value = 0.0;
    bool divergent = false;
};

Density weibull3_pdf(double h, const Weibull3Params& p);
double weibull3_cdf(double h, const Weibull3Params& p);
double weibull3_quantile(double prob, const Weibull3Params& p);
double weibull3_mean(const Weibull3Params& p);
double weibull3_variance(const Weibull3Params& p);

// n inverse-CDF draws; draw i consumes stream index i.
std::vector<double> weibull3_sample(const Weibull3Params& p, std::size_t n,
                                    const CounterRng& stream);

struct CondLognormalParams {
    double a1 = 0.0, a2 = 0.0, a3 = 1.0; // log-mean coefficients
    double b1 = 1.0, b2 = 0.0, b3 = 0.0; // log-sd coefficients
};

struct LogMoments {
    double mu;
    double sigma;
};

// mu(h), sigma(h). Throws conditional_model_error when sigma(h) <= 0 — the
// contract is checked where the model is actually used, not at construction.
LogMoments cond_lognormal_moments(double h, const CondLognormalParams& p);

struct JointMetoceanModel {
    Weibull3Params marginal;
    CondLognormalParams conditional;
    std::string id = "custom";
};

// Presets with the fitted North West Australia parameters.
JointMetoceanModel swell_model();
JointMetoceanModel windsea_model();

// N environmental states (t, h), column layout. Immutable after creation;
// regenerating from (model, seed, n) reproduces the rows bit-exactly.
struct SampleSet {
    std::vector<double> t; // wave period (s)
    std::vector<double> h; // wave height (m)
    std::uint64_t seed = 0;
    std::string model_id;

    std::size_t size() const { return t.size(); }
};

SampleSet joint_sample(const JointMetoceanModel& m, std::size_t n,
                       std::uint64_t seed);

// Product density; zero outside {t > 0, h >= location}. Divergence at the
// marginal's left endpoint propagates through `divergent`.
Density joint_pdf(double t, double h, const JointMetoceanModel& m);

} // namespace envc
