#pragma once

#include <cstddef>
#include <utility>

#include "betaest/betadist.hpp"
#include "betaest/estimators.hpp"

namespace betaest {

/// Symmetric 2x2 covariance, scaled by n for asymptotic matrices.
struct Cov2 {
    double v_aa = 0.0;
    double v_bb = 0.0;
    double v_ab = 0.0;

    double determinant() const noexcept { return v_aa * v_bb - v_ab * v_ab; }
    /// Diagonals swapped; the matrix of the mirrored parameterization.
    Cov2 mirrored() const noexcept { return {v_bb, v_aa, v_ab}; }
};

/// Scalar building blocks of the refined score-adjusted covariance:
///   kappa_ab = psi(a) - psi(a+b)
///   tau_ab   = a/(b-1) [psi(a+1) - psi(a+b)]          (= E[X ln X/(1-X)])
///   omega_ab = E[(1 + a ln X - (b-1) M_X)^2]
///   rho      = 1 + tau_ab + tau_ba + (a+b-1)[psi_1(a+b) - kappa_ab kappa_ba]
/// and their mirror images. tau uses the analytic limit at b = 1, omega a
/// numeric limit about b = 2.
struct Sigma2Parts {
    double kappa_ab = 0.0;
    double kappa_ba = 0.0;
    double tau_ab = 0.0;
    double tau_ba = 0.0;
    double omega_ab = 0.0;
    double omega_ba = 0.0;
    double rho = 0.0;
};

/// Cramer-Rao bound: inverse Fisher information, the ML asymptotic covariance.
Cov2 crlb(const BetaParams& p);

/// Asymptotic covariance of the moment estimator.
Cov2 acov_mom(const BetaParams& p);

/// Asymptotic covariance of the mixed-moment (SAM) estimator.
Cov2 sigma1(const BetaParams& p);

Sigma2Parts sigma2_parts(const BetaParams& p);

/// rho with (a+b+1) in place of (a+b-1). That variant does not yield a valid
/// covariance; it is kept only to quantify its distance from the sandwich.
double rho_plus_one(const BetaParams& p);

/// Covariance assembled from the scalar parts; rho is the cross term.
Cov2 sigma2_from_parts(const Sigma2Parts& parts);

/// Closed-form covariance of the refined score-adjusted (RSA) estimator,
/// assembled from sigma2_parts.
Cov2 sigma2_closed(const BetaParams& p);

/// The same covariance as the GMM sandwich G^-1 Omega G^-T, with G and Omega
/// taken from the exact moment oracle. Throws SingularMatrixError if
/// |det G| <= 1e-14.
Cov2 sigma2_sandwich(const BetaParams& p);

/// Asymptotic covariance used for `method`: CRLB for MLE, acov_mom for MOM,
/// sigma1 for SAM, sigma2_sandwich for RSA.
Cov2 asymptotic_cov(Method method, const BetaParams& p);

/// Plug-in standard errors sqrt(diag(asymptotic_cov) / n).
std::pair<double, double> standard_errors(const BetaParams& p_hat, Method method, std::size_t n);

}  // namespace betaest
