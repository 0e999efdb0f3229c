#pragma once

#include <stdexcept>
#include <string>

namespace dualbbgky {

/// A size guard tripped (partition count, Hilbert-space dimension, ...).
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid user-supplied data; the message names the offending field.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A k-body potential was requested that the system does not configure.
/// Distinct from a zero potential: hierarchy sums skip absent orders,
/// but asking for the interaction generator of one is a caller bug.
class AbsentPotentialError : public std::runtime_error {
public:
    explicit AbsentPotentialError(const std::string& what) : std::runtime_error(what) {}
};

/// The grand-canonical normalizing factor is unusable (non-finite or <= 0).
class NormalizationError : public std::runtime_error {
public:
    explicit NormalizationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dualbbgky
