// Standard-normal helpers used across the sampler, the risk estimators and
// the analytic test oracles.

#pragma once

namespace envc::stats {

// Density of N(0,1).
double normal_pdf(double z);

// P(Z <= z), computed through erfc for full tail accuracy.
double normal_cdf(double z);

// P(Z > z). Keeps precision where 1 - normal_cdf(z) would cancel.
double normal_sf(double z);

// Inverse of normal_cdf on (0,1). Wichura's AS 241 rational approximation,
// accurate to about 1e-15 relative over the full open interval.
double normal_quantile(double p);

// Hazard rate pdf/sf. Switches to a continued-fraction Mills ratio for large
// z where pdf and sf both underflow.
double normal_hazard(double z);

} // namespace envc::stats
