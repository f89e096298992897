// Error taxonomy shared by all modules. Each class maps to a distinct
// process exit code in the CLI (see tools/envcontour.cpp).

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace envc {

class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad distribution parameters (alpha <= 0, beta <= 0, ...).
class parameter_error : public error {
public:
    using error::error;
};

// Malformed user input: empty samples, bad probability levels, unreadable
// files, schema mismatches.
class input_error : public error {
public:
    using error::error;
};

// Invalid run configuration (flag combinations, unknown presets, bad config
// file fields). Maps to the CLI usage exit code.
class usage_error : public error {
public:
    using error::error;
};

// The conditional log-normal model is unusable at a queried wave height
// (sigma(h) <= 0). Raised at evaluation/sampling time, not at construction.
class conditional_model_error : public error {
public:
    using error::error;
};

// Too few tail samples for the requested exceedence probability. Carries the
// minimum sample size that would satisfy the configured tail count.
class insufficient_tail_error : public error {
public:
    static constexpr std::size_t no_direction = static_cast<std::size_t>(-1);

    insufficient_tail_error(const std::string& msg, std::size_t required_n_,
                            std::size_t direction_ = no_direction)
        : error(msg), required_n(required_n_), direction(direction_) {}

    std::size_t required_n; // smallest N that meets the tail-count floor
    std::size_t direction;  // first failing direction, or no_direction
};

// Degenerate tail: no sample value lies strictly above the quantile, so the
// conditional tail mean is undefined.
class degenerate_tail_error : public error {
public:
    using error::error;
};

// Polygon construction / containment failures (singular systems, invalid
// polygons passed where valid ones are required).
class geometry_error : public error {
public:
    using error::error;
};

} // namespace envc
