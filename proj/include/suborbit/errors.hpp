#pragma once

#include <stdexcept>
#include <string>

namespace suborbit {

/// Bad numeric input (non-finite coefficient, invalid index, ...).
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A shift operator has no finite norm on the requested space.
class UnboundedOperatorError : public std::runtime_error {
public:
    UnboundedOperatorError(const std::string& which, const std::string& why)
        : std::runtime_error("shift operator " + which + " is unbounded: " + why),
          operator_name(which) {}
    std::string operator_name;
};

/// A parameter violates a hypothesis of the producing construction
/// (lambda too small, contraction factor >= 1, decay too slow, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Materializing a scaled vector would leave double range.
class ScaleRangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// A weight kind admits no closed-form sum for the requested series.
class UnsupportedWeightError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Measured data does not support the requested certificate.
class NoCertificateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grid parameters are incompatible (non-integer translate, mismatched steps).
class GridMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace suborbit
