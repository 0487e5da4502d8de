#pragma once

// Special functions on the positive real axis. All functions throw
// DomainError for non-positive or non-finite arguments.

namespace betaest::specfun {

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Digamma psi(x) = d/dx ln Gamma(x), x > 0.
double digamma(double x);

/// Trigamma psi_1(x) = d^2/dx^2 ln Gamma(x), x > 0.
double trigamma(double x);

/// ln B(a, b).
double log_beta_fn(double a, double b);

/// Euler beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
double beta_fn(double a, double b);

}  // namespace betaest::specfun
