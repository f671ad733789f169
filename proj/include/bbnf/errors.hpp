#pragma once

#include <stdexcept>
#include <string>

namespace bbnf {

/// Bad input: malformed config, inconsistent arguments, unsupported options.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation could not be carried out to the requested accuracy.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BasisMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Vanishing quadratic coefficient (A = 0) or parabolic orbit where a
/// nondegenerate one is required.
class Degenerate : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// e^{ik alpha} = 1 for a small order k hit by the classical normalization.
class LowOrderResonance : public NumericalError {
public:
    LowOrderResonance(int order, const std::string& what)
        : NumericalError(what), order_(order) {}
    int order() const { return order_; }

private:
    int order_;
};

/// Small divisor in a boundary value problem of the quantum normal form.
class NearResonance : public NumericalError {
public:
    NearResonance(int m, int n, const std::string& what)
        : NumericalError(what), m_(m), n_(n) {}
    int m() const { return m_; }
    int n() const { return n_; }

private:
    int m_, n_;
};

class TriangularBreakdown : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IntersectionFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoAdmissibleRoot : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace bbnf
