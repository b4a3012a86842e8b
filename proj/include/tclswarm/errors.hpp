#pragma once

#include <stdexcept>
#include <string>

namespace tclswarm {

/// Physical parameter or argument outside its mathematical domain.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched vector or series dimensions.
class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integration step too large for the requested accuracy.
class StepSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Signal window too short or featureless for spectral estimation.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Optimizer produced non-finite parameters.
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File read/write failure (CLI exit code 3).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tclswarm
