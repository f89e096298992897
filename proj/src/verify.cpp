#include "envc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "envc/errors.hpp"
#include "envc/parallel.hpp"
#include "envc/stats.hpp"

namespace envc {

SamplerFn metocean_sampler(const JointMetoceanModel& model) {
    return [model](std::size_t n, std::uint64_t seed) {
        return joint_sample(model, n, seed);
    };
}

SamplerFn bivariate_normal_sampler(double mean_x, double mean_y, double sd_x,
                                   double sd_y) {
    if (!(sd_x > 0.0) || !(sd_y > 0.0)) {
        throw parameter_error("bivariate normal sampler: standard deviations must be positive");
    }
    return [=](std::size_t n, std::uint64_t seed) {
        if (n == 0) throw input_error("sampler: need n >= 1");
        const CounterRng rng(seed);
        SampleSet s;
        s.t.resize(n);
        s.h.resize(n);
        s.seed = seed;
        s.model_id = "bivariate-normal";
        for (std::size_t i = 0; i < n; ++i) {
            s.t[i] = mean_x + sd_x * rng.normal(2 * i);
            s.h[i] = mean_y + sd_y * rng.normal(2 * i + 1);
        }
        return s;
    };
}

VerificationReport check_exceedence(const SamplerFn& sampler,
                                    const DirectionalSupport& support,
                                    const DirectionGrid& grid, double pe,
                                    std::size_t n_verify, std::uint64_t seed,
                                    int threads) {
    if (grid.size() != support.classical.size()) {
        throw input_error("support/grid direction counts differ");
    }
    const SampleSet fresh = sampler(n_verify, seed);
    const double n = static_cast<double>(n_verify);
    const double se = std::sqrt(pe * (1.0 - pe) / n);

    VerificationReport rep;
    rep.check_name = "exceedence";
    rep.target_pe = pe;
    rep.n_verify = n_verify;
    rep.seed = seed;
    rep.directions.resize(grid.size());

    parallel_for(grid.size(), threads, [&](std::size_t j) {
        const double cx = grid.ux[j];
        const double cy = grid.uy[j];
        const double c = support.classical[j];
        std::size_t count = 0;
        for (std::size_t i = 0; i < n_verify; ++i) {
            count += (cx * fresh.t[i] + cy * fresh.h[i] > c) ? 1u : 0u;
        }
        DirectionCheck& d = rep.directions[j];
        d.direction = j;
        d.estimate = static_cast<double>(count) / n;
        d.standard_error = se;
        d.pass = std::abs(d.estimate - pe) <= 3.0 * se;
    });

    rep.max_estimate = 0.0;
    rep.pass = true;
    for (const auto& d : rep.directions) {
        rep.max_estimate = std::max(rep.max_estimate, d.estimate);
        rep.pass = rep.pass && d.pass;
    }
    return rep;
}

ScalarSample support_margin_sample(const SampleSet& samples, double ux, double uy,
                                   double cbar) {
    if (samples.size() == 0) throw input_error("cannot project an empty sample set");
    std::vector<double> margin(samples.size());
    for (std::size_t i = 0; i < margin.size(); ++i) {
        margin[i] = ux * samples.t[i] + uy * samples.h[i] - cbar;
    }
    std::sort(margin.begin(), margin.end());
    return ScalarSample::from_sorted(std::move(margin));
}

namespace {

// Buffered failure probability of a sorted sample under multinomial weights;
// same suffix-mean crossing as the unweighted estimator.
double weighted_pbar(std::span<const double> values,
                     std::span<const std::uint32_t> weights, double total_weight) {
    double sum = 0.0;
    double best = -1.0;
    double w_acc = 0.0;
    for (std::size_t i = values.size(); i-- > 0;) {
        const double w = static_cast<double>(weights[i]);
        if (w == 0.0) continue;
        sum += w * values[i];
        w_acc += w;
        if (sum >= 0.0) {
            best = w_acc;
        } else {
            break;
        }
    }
    return (best < 0.0) ? 0.0 : best / total_weight;
}

} // namespace

double bootstrap_pbar_se(std::span<const double> sorted_values, std::size_t reps,
                         const CounterRng& rng) {
    const std::size_t n = sorted_values.size();
    if (n == 0 || reps < 2) throw input_error("bootstrap needs data and reps >= 2");
    std::vector<std::uint32_t> counts(n);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        std::fill(counts.begin(), counts.end(), 0u);
        const std::uint64_t base = static_cast<std::uint64_t>(r) * n;
        for (std::size_t i = 0; i < n; ++i) {
            counts[rng.bits(base + i) % n]++;
        }
        const double p = weighted_pbar(sorted_values, counts, static_cast<double>(n));
        sum += p;
        sum_sq += p * p;
    }
    const double k = static_cast<double>(reps);
    const double var = std::max(0.0, (sum_sq - sum * sum / k) / (k - 1.0));
    return std::sqrt(var);
}

VerificationReport check_margin_buffered(const SamplerFn& sampler,
                                         const DirectionalSupport& support,
                                         const DirectionGrid& grid, double pe,
                                         std::size_t n_verify, std::uint64_t seed,
                                         const MarginCheckOptions& opt) {
    if (grid.size() != support.buffered.size()) {
        throw input_error("support/grid direction counts differ");
    }
    const double expected_tail = static_cast<double>(n_verify) * pe;
    if (expected_tail < static_cast<double>(std::max<std::size_t>(opt.min_tail, 1))) {
        const auto required = static_cast<std::size_t>(
            std::ceil(static_cast<double>(opt.min_tail) / pe));
        char pe_str[32];
        std::snprintf(pe_str, sizeof pe_str, "%g", pe);
        throw insufficient_tail_error(
            "verification sample too small for P_e = " + std::string(pe_str) +
                ": need n_verify >= " + std::to_string(required),
            required);
    }

    const SampleSet fresh = sampler(n_verify, seed);
    const double binomial_se = std::sqrt(pe * (1.0 - pe) / static_cast<double>(n_verify));
    const CounterRng boot_root = CounterRng(seed).substream(0xB007);

    const std::size_t stride = std::max<std::size_t>(opt.direction_stride, 1);
    std::vector<std::size_t> checked;
    for (std::size_t j = 0; j < grid.size(); j += stride) checked.push_back(j);

    VerificationReport rep;
    rep.check_name = "margin_buffered";
    rep.target_pe = pe;
    rep.n_verify = n_verify;
    rep.seed = seed;
    rep.directions.resize(checked.size());

    parallel_for(checked.size(), opt.threads, [&](std::size_t idx) {
        const std::size_t j = checked[idx];
        const ScalarSample margin =
            support_margin_sample(fresh, grid.ux[j], grid.uy[j], support.buffered[j]);
        const RiskReport risk = buffered_failure_probability(margin);
        const double se_boot =
            bootstrap_pbar_se(margin.values(), opt.bootstrap_reps, boot_root.substream(j));
        DirectionCheck& d = rep.directions[idx];
        d.direction = j;
        d.estimate = risk.p_f_buffered;
        d.standard_error = std::max(se_boot, binomial_se);
        d.pass = std::abs(d.estimate - pe) <= 3.0 * d.standard_error;
    });

    rep.max_estimate = 0.0;
    rep.pass = true;
    for (const auto& d : rep.directions) {
        rep.max_estimate = std::max(rep.max_estimate, d.estimate);
        rep.pass = rep.pass && d.pass;
    }
    return rep;
}

bool check_monotonicity(const std::vector<double>& g1, const std::vector<double>& g2,
                        std::span<const double> alpha_grid) {
    if (g1.size() != g2.size() || g1.empty()) {
        throw input_error("monotonicity check needs two equally sized non-empty samples");
    }
    for (std::size_t i = 0; i < g1.size(); ++i) {
        if (!(g1[i] <= g2[i])) {
            throw input_error("domination premise violated at index " + std::to_string(i) +
                              ": " + std::to_string(g1[i]) + " > " + std::to_string(g2[i]));
        }
    }
    const ScalarSample s1 = ScalarSample::from_unsorted(g1);
    const ScalarSample s2 = ScalarSample::from_unsorted(g2);

    for (const double alpha : alpha_grid) {
        double q1, q2;
        try {
            q1 = superquantile(s1, alpha);
            q2 = superquantile(s2, alpha);
        } catch (const degenerate_tail_error&) {
            continue; // ties swallowed the tail at this level; ordering untestable
        }
        if (q1 > q2) return false;
    }
    return buffered_failure_probability(s1).p_f_buffered <=
           buffered_failure_probability(s2).p_f_buffered;
}

NormalCvarSolution normal_cvar_oracle(double mu, double sigma) {
    if (!(sigma > 0.0)) throw input_error("normal cvar oracle: sigma must be positive");
    if (!(mu < 0.0)) {
        throw input_error("normal cvar oracle: needs mu < 0 for a root with alpha in (0,1)");
    }
    const double target = -mu / sigma;
    // hazard(z) is increasing, ~0 far left and >= z on the right.
    double lo = -40.0;
    double hi = std::max(target, 1.0) + 1.0;
    while (stats::normal_hazard(hi) < target) hi *= 2.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // double resolution reached
        if (stats::normal_hazard(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    NormalCvarSolution sol;
    sol.z = 0.5 * (lo + hi);
    sol.p_f_buffered = stats::normal_sf(sol.z);
    sol.alpha = 1.0 - sol.p_f_buffered;
    sol.q_alpha = mu + sigma * sol.z;
    return sol;
}

} // namespace envc
