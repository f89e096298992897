#include "envc/model.hpp"

#include <cmath>

#include "envc/errors.hpp"

namespace envc {

void Weibull3Params::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw parameter_error("weibull: scale must be positive, got " + std::to_string(scale));
    }
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw parameter_error("weibull: shape must be positive, got " + std::to_string(shape));
    }
    if (!std::isfinite(location)) {
        throw parameter_error("weibull: location must be finite");
    }
}

Density weibull3_pdf(double h, const Weibull3Params& p) {
    p.validate();
    if (h < p.location) return {0.0, false};
    if (h == p.location) {
        if (p.shape > 1.0) return {0.0, false};
        if (p.shape == 1.0) return {1.0 / p.scale, false};
        return {0.0, true}; // density unbounded at the left endpoint
    }
    const double x = (h - p.location) / p.scale;
    const double xb = std::pow(x, p.shape);
    return {p.shape / p.scale * std::pow(x, p.shape - 1.0) * std::exp(-xb), false};
}

double weibull3_cdf(double h, const Weibull3Params& p) {
    p.validate();
    if (h <= p.location) return 0.0;
    const double x = (h - p.location) / p.scale;
    return -std::expm1(-std::pow(x, p.shape));
}

double weibull3_quantile(double prob, const Weibull3Params& p) {
    p.validate();
    if (!(prob >= 0.0 && prob < 1.0)) {
        throw input_error("weibull quantile: probability must lie in [0,1)");
    }
    if (prob == 0.0) return p.location;
    return p.location + p.scale * std::pow(-std::log1p(-prob), 1.0 / p.shape);
}

double weibull3_mean(const Weibull3Params& p) {
    p.validate();
    return p.location + p.scale * std::tgamma(1.0 + 1.0 / p.shape);
}

double weibull3_variance(const Weibull3Params& p) {
    p.validate();
    const double g1 = std::tgamma(1.0 + 1.0 / p.shape);
    const double g2 = std::tgamma(1.0 + 2.0 / p.shape);
    return p.scale * p.scale * (g2 - g1 * g1);
}

std::vector<double> weibull3_sample(const Weibull3Params& p, std::size_t n,
                                    const CounterRng& stream) {
    p.validate();
    if (n == 0) throw input_error("weibull sample: need n >= 1");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = weibull3_quantile(stream.uniform(i), p);
    }
    return out;
}

LogMoments cond_lognormal_moments(double h, const CondLognormalParams& p) {
    if (!(h >= 0.0)) throw input_error("conditional moments: wave height must be >= 0");
    const LogMoments m{p.a1 + p.a2 * std::pow(h, p.a3), p.b1 + p.b2 * std::exp(p.b3 * h)};
    if (!(m.sigma > 0.0)) {
        throw conditional_model_error("conditional log-sd is non-positive at h = " +
                                      std::to_string(h));
    }
    return m;
}

JointMetoceanModel swell_model() {
    JointMetoceanModel m;
    m.marginal = {0.132, 0.450, 1.580};
    m.conditional = {0.010, 2.543, 0.032, 0.137, 0.000, 0.000};
    m.id = "swell";
    return m;
}

JointMetoceanModel windsea_model() {
    JointMetoceanModel m;
    m.marginal = {0.322, 0.605, 0.867};
    m.conditional = {0.000, 1.798, 0.134, 0.042, 0.224, -0.500};
    m.id = "windsea";
    return m;
}

SampleSet joint_sample(const JointMetoceanModel& m, std::size_t n, std::uint64_t seed) {
    m.marginal.validate();
    if (n == 0) throw input_error("joint_sample: need n >= 1");
    const CounterRng rng(seed);
    SampleSet s;
    s.t.resize(n);
    s.h.resize(n);
    s.seed = seed;
    s.model_id = m.id;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = weibull3_quantile(rng.uniform(2 * i), m.marginal);
        const LogMoments lm = cond_lognormal_moments(h, m.conditional);
        const double z = stats::normal_quantile(rng.uniform(2 * i + 1));
        s.h[i] = h;
        s.t[i] = std::exp(lm.mu + lm.sigma * z);
    }
    return s;
}

Density joint_pdf(double t, double h, const JointMetoceanModel& m) {
    if (t <= 0.0 || h < m.marginal.location) return {0.0, false};
    const Density fh = weibull3_pdf(h, m.marginal);
    if (fh.divergent) return {0.0, true};
    if (fh.value == 0.0) return {0.0, false};
    const LogMoments lm = cond_lognormal_moments(h, m.conditional);
    const double d = (std::log(t) - lm.mu) / lm.sigma;
    const double ft = std::exp(-0.5 * d * d) / (t * lm.sigma * 2.5066282746310005024);
    return {fh.value * ft, false};
}

} // namespace envc
