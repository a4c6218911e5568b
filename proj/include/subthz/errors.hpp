#pragma once

#include <stdexcept>
#include <string>

namespace subthz {

/// Invalid or inconsistent configuration (bad SCS, allocation too large, unknown key).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller passed data with the wrong shape or length.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An estimator could not produce a result (no pilot energy, rank deficiency, too few samples).
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A search or analysis could not satisfy its constraints.
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace subthz
