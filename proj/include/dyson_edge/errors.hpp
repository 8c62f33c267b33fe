#pragma once

#include <stdexcept>
#include <string>

namespace dyson_edge {

// All library failures derive from Error; the C API maps each subclass onto a
// status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed shapes: wrong row lengths, empty files, missing columns.
class StructuralError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Index or count outside the admissible range (e.g. k >= N).
class RangeError : public Error {
public:
    using Error::Error;
};

// A value failed a model invariant, e.g. an array that does not interlace.
class ValidationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Iterative solvers that fail to converge, integrators that cannot keep the
// state inside its cone.
class NumericalError : public Error {
public:
    using Error::Error;
};

class StepSizeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A condition that the algorithms guarantee cannot happen did happen.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace dyson_edge

namespace dyson_edge {

// Short lower-case name of the error class, "unknown" for foreign exceptions.
inline const char* error_kind(const std::exception& e) {
    if (dynamic_cast<const StepSizeError*>(&e)) return "step_size";
    if (dynamic_cast<const NumericalError*>(&e)) return "numerical";
    if (dynamic_cast<const StructuralError*>(&e)) return "structural";
    if (dynamic_cast<const DomainError*>(&e)) return "domain";
    if (dynamic_cast<const RangeError*>(&e)) return "range";
    if (dynamic_cast<const ValidationError*>(&e)) return "validation";
    if (dynamic_cast<const ConfigError*>(&e)) return "config";
    if (dynamic_cast<const IoError*>(&e)) return "io";
    if (dynamic_cast<const InternalError*>(&e)) return "internal";
    return "unknown";
}

}  // namespace dyson_edge
