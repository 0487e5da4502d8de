#pragma once

#include <stdexcept>
#include <string>

namespace betaest {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature did not reach its tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A 2x2 system whose determinant fell below the guard.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace betaest
