#include "envc/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "envc/errors.hpp"

namespace envc {

namespace {

void check_finite(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw input_error("sample contains a non-finite value at position " +
                              std::to_string(i));
        }
    }
}

} // namespace

ScalarSample ScalarSample::from_unsorted(std::vector<double> values) {
    if (values.empty()) throw input_error("scalar sample must be non-empty");
    check_finite(values);
    std::sort(values.begin(), values.end());
    return ScalarSample(std::move(values));
}

ScalarSample ScalarSample::from_sorted(std::vector<double> values) {
    if (values.empty()) throw input_error("scalar sample must be non-empty");
    check_finite(values);
    if (!std::is_sorted(values.begin(), values.end())) {
        throw input_error("scalar sample is not sorted ascending");
    }
    return ScalarSample(std::move(values));
}

namespace detail {

std::size_t quantile_order_index(std::size_t n, double prob) {
    const double x = prob * static_cast<double>(n);
    auto k = static_cast<std::size_t>(std::ceil(x));
    if (k > 1 && static_cast<double>(k - 1) >= x * (1.0 - 1e-12)) --k;
    if (k < 1) k = 1;
    if (k > n) k = n;
    return k;
}

double sorted_tail_mean(std::span<const double> ascending_tail) {
    double sum = 0.0;
    for (const double v : ascending_tail) sum += v;
    return sum / static_cast<double>(ascending_tail.size());
}

} // namespace detail

double empirical_quantile(const ScalarSample& s, double prob) {
    if (!(prob > 0.0 && prob < 1.0)) {
        throw input_error("quantile level must lie strictly in (0,1)");
    }
    const std::size_t k = detail::quantile_order_index(s.size(), prob);
    return s.values()[k - 1];
}

double superquantile(const ScalarSample& s, double alpha) {
    const double q = empirical_quantile(s, alpha);
    const auto v = s.values();
    const auto it = std::upper_bound(v.begin(), v.end(), q);
    if (it == v.end()) {
        throw degenerate_tail_error("no sample value lies strictly above the quantile " +
                                    std::to_string(q));
    }
    return detail::sorted_tail_mean(
        v.subspan(static_cast<std::size_t>(it - v.begin())));
}

double failure_probability(const ScalarSample& s) {
    const auto v = s.values();
    const auto it = std::upper_bound(v.begin(), v.end(), 0.0);
    return static_cast<double>(v.end() - it) / static_cast<double>(v.size());
}

RiskReport buffered_failure_probability(const ScalarSample& s) {
    const auto v = s.values();
    const auto n = v.size();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    RiskReport r;
    r.p_f = failure_probability(s);
    r.reliability = 1.0 - r.p_f;

    // Suffix sums from the top; m(k) >= 0 iff the partial sum is. The suffix
    // means are nondecreasing in k, so scanning downward can stop at the
    // first negative sum.
    double sum = 0.0;
    std::size_t k_star = n; // n = no crossing found
    for (std::size_t k = n; k-- > 0;) {
        sum += v[k];
        if (sum >= 0.0) {
            k_star = k;
        } else {
            break;
        }
    }

    if (k_star == n) {
        // max < 0: the empirical distribution has no level with zero tail mean.
        r.alpha = 1.0;
        r.q_alpha = v[n - 1];
        r.superquantile_at_alpha = nan;
        r.p_f_buffered = 0.0;
    } else {
        const std::size_t tail = n - k_star;
        r.alpha = static_cast<double>(k_star) / static_cast<double>(n);
        r.q_alpha = (k_star >= 1) ? v[k_star - 1] : nan;
        r.superquantile_at_alpha = detail::sorted_tail_mean(v.subspan(k_star, tail));
        r.p_f_buffered = static_cast<double>(tail) / static_cast<double>(n);
    }
    r.reliability_buffered = 1.0 - r.p_f_buffered;
    return r;
}

double return_period_to_pe(const ReturnPeriodSpec& spec) {
    if (!(spec.return_period_years > 0.0)) {
        throw input_error("return period must be positive");
    }
    if (!(spec.states_per_hour > 0.0) || !(spec.hours_per_year > 0.0)) {
        throw input_error("states_per_hour and hours_per_year must be positive");
    }
    const double pe =
        1.0 / (spec.return_period_years * spec.hours_per_year * spec.states_per_hour);
    if (pe >= 1.0) {
        throw input_error("return period shorter than one sea state (P_e >= 1)");
    }
    return pe;
}

} // namespace envc
