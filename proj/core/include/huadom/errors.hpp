#pragma once

#include <stdexcept>
#include <string>

namespace huadom {

/// Shape/size mismatch between operands, or an index out of range.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation
/// (non-Hermitian, non-positive-definite, point outside the closed domain, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what, double witness = 0.0)
        : std::domain_error(what), witness_(witness) {}

    /// Numeric witness of the violation (e.g. the offending minimum eigenvalue).
    double witness() const noexcept { return witness_; }

private:
    double witness_;
};

/// A fractional power or square-root continuation left the principal branch.
class BranchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Spec that violates a structural invariant (e.g. two exponents equal to 1).
class InvalidSpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Differential-geometric operation requested at a point where the boundary
/// is not smooth enough for it.
class NonSmoothPointError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace huadom
