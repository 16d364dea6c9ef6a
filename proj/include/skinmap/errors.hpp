#ifndef SKINMAP_ERRORS_HPP
#define SKINMAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace skinmap {

/// Broad failure classes. Each maps onto one CLI exit code.
enum class ErrorCategory {
    data,     // bad input files, manifests, specs (exit 2)
    numeric,  // degenerate fits, contract violations (exit 3)
    io,       // write failures (exit 4)
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

// Numeric / degenerate failures.

class ContractViolation : public Error {
public:
    explicit ContractViolation(const std::string& what) : Error(ErrorCategory::numeric, what) {}
};

class NumericDomainError : public Error {
public:
    explicit NumericDomainError(const std::string& what) : Error(ErrorCategory::numeric, what) {}
};

class InsufficientSamplesError : public Error {
public:
    explicit InsufficientSamplesError(const std::string& what) : Error(ErrorCategory::numeric, what) {}
};

class DegenerateClusterError : public Error {
public:
    DegenerateClusterError(int cluster, const std::string& what)
        : Error(ErrorCategory::numeric, what), cluster_(cluster) {}

    int cluster() const noexcept { return cluster_; }

private:
    int cluster_;
};

class DegenerateComponentError : public Error {
public:
    DegenerateComponentError(int component, const std::string& what)
        : Error(ErrorCategory::numeric, what), component_(component) {}

    int component() const noexcept { return component_; }

private:
    int component_;
};

/// A single-class ground truth cannot produce a ROC curve.
class DegenerateMaskError : public Error {
public:
    explicit DegenerateMaskError(const std::string& what) : Error(ErrorCategory::numeric, what) {}
};

// Input data failures.

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

class MissingFileError : public DataError {
public:
    explicit MissingFileError(const std::string& path) : DataError("file not found: " + path) {}
};

class DecodeError : public DataError {
public:
    using DataError::DataError;
};

class DimensionMismatchError : public DataError {
public:
    using DataError::DataError;
};

class EmptyTrainingSetError : public DataError {
public:
    using DataError::DataError;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

}  // namespace skinmap

#endif  // SKINMAP_ERRORS_HPP
