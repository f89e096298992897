// Empirical risk measures on sorted scalar samples: quantiles, superquantiles
// (conditional tail means), failure probability P(g > 0), and the buffered
// failure probability 1 - alpha at the level where the superquantile hits
// zero. All estimators are exact on the empirical distribution — no
// interpolation, no tolerance knobs.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace envc {

// Immutable ascending sample of performance-function or projection values.
class ScalarSample {
public:
    static ScalarSample from_unsorted(std::vector<double> values);
    // Validates ordering and finiteness; throws input_error on violation.
    static ScalarSample from_sorted(std::vector<double> values);

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

private:
    explicit ScalarSample(std::vector<double> v) : values_(std::move(v)) {}
    std::vector<double> values_;
};

struct RiskReport {
    double p_f = 0.0;
    double reliability = 1.0;
    double alpha = 0.0;                   // level where the tail mean crosses zero
    double q_alpha = 0.0;                 // NaN when alpha == 0 (no order statistic)
    double superquantile_at_alpha = 0.0;  // tail mean at the crossing; NaN when the tail is empty
    double p_f_buffered = 0.0;
    double reliability_buffered = 1.0;
};

// Order statistic Y_(k) with k = ceil(prob * n), clamped to [1, n].
double empirical_quantile(const ScalarSample& s, double prob);

// Mean of the values strictly greater than the alpha-quantile.
// Throws degenerate_tail_error when no value lies above it.
double superquantile(const ScalarSample& s, double alpha);

// Fraction of values strictly greater than zero.
double failure_probability(const ScalarSample& s);

// Scans the suffix tail means m(k) = mean(Y_(k+1..n)) for the smallest k with
// m(k) >= 0 and reports p_f_buffered = (n - k)/n together with the plain
// failure probability. All-negative samples give p_f_buffered = 0, alpha = 1;
// a non-negative full mean gives p_f_buffered = 1, alpha = 0.
RiskReport buffered_failure_probability(const ScalarSample& s);

struct ReturnPeriodSpec {
    double return_period_years = 25.0;
    double states_per_hour = 1.0;
    double hours_per_year = 365.25 * 24.0;
};

// P_e = 1 / (years * hours_per_year * states_per_hour).
// Throws input_error when the result would reach 1 (sub-state return period).
double return_period_to_pe(const ReturnPeriodSpec& spec);

namespace detail {
// k = ceil(prob * n) in [1, n], with a guard absorbing float dust just above
// an integer product (e.g. 0.6 * 5 evaluating to 3.0000000000000004).
std::size_t quantile_order_index(std::size_t n, double prob);
// Ascending-order mean of a sorted tail; shared so that every code path that
// claims "mean of the N-k largest values" produces bit-identical results.
double sorted_tail_mean(std::span<const double> ascending_tail);
} // namespace detail

} // namespace envc
