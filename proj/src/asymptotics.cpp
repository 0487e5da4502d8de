#include "betaest/asymptotics.hpp"

#include <cmath>

#include "betaest/errors.hpp"
#include "betaest/specfun.hpp"

namespace betaest {

using specfun::digamma;
using specfun::trigamma;

Cov2 crlb(const BetaParams& p) {
    const double ta = trigamma(p.alpha());
    const double tb = trigamma(p.beta());
    const double ts = trigamma(p.alpha() + p.beta());
    const double det = ta * tb - (ta + tb) * ts;
    return {(tb - ts) / det, (ta - ts) / det, ts / det};
}

namespace {

double mom_m(double a, double b) {
    return a * (1.0 + (2.0 * b + 3.0) * a * a + (2.0 * b * b + 4.0 * b + 5.0) * b +
                (4.0 * b * b + 7.0 * b + 4.0) * a) /
           (b * (b + 1.0));
}

}  // namespace

Cov2 acov_mom(const BetaParams& p) {
    const double a = p.alpha(), b = p.beta(), s = a + b;
    const double scale = (a + 1.0) * (b + 1.0) * s / ((s + 1.0) * (s + 2.0) * (s + 3.0));
    return {scale * mom_m(a, b), scale * mom_m(b, a), scale * (1.0 + s + 2.0 * s * s)};
}

Cov2 sigma1(const BetaParams& p) {
    const double a = p.alpha(), b = p.beta(), s = a + b;
    const double t = trigamma(a) + trigamma(b);
    const double inv = 1.0 / (s + 1.0);
    return {
        inv * (a * a * a * b * t + a * a * (s + 1.0) - a * b),
        inv * (a * b * b * b * t + b * b * (s + 1.0) - a * b),
        inv * ((b - 1.0) * a * a + a * a * b * b * t + (a - 1.0) * b * b),
    };
}

namespace {

constexpr double kGuardBand = 1e-4;
constexpr double kLimitStep = 1e-3;

double omega_raw(double a, double b) {
    const double s = a + b;
    const double kappa = digamma(a) - digamma(s);
    return b / (b - 2.0) +
           a * (s - 1.0) / (b - 2.0) * (trigamma(a) - trigamma(s) + kappa * kappa) +
           2.0 * (2.0 * a + b - 1.0) / (b - 2.0) * kappa;
}

// omega_ab has a removable singularity at b = 2; inside the guard band it is
// replaced by its Richardson-extrapolated expansion about 2.
double omega(double a, double b) {
    if (std::abs(b - 2.0) >= kGuardBand) return omega_raw(a, b);
    const double h = kLimitStep;
    const double p1 = omega_raw(a, 2.0 + h), m1 = omega_raw(a, 2.0 - h);
    const double p2 = omega_raw(a, 2.0 + 2.0 * h), m2 = omega_raw(a, 2.0 - 2.0 * h);
    const double value = (4.0 * 0.5 * (p1 + m1) - 0.5 * (p2 + m2)) / 3.0;
    const double slope = (4.0 * (p1 - m1) / (2.0 * h) - (p2 - m2) / (4.0 * h)) / 3.0;
    return value + slope * (b - 2.0);
}

}  // namespace

Sigma2Parts sigma2_parts(const BetaParams& p) {
    const double a = p.alpha(), b = p.beta(), s = a + b;
    Sigma2Parts parts;
    parts.kappa_ab = digamma(a) - digamma(s);
    parts.kappa_ba = digamma(b) - digamma(s);
    parts.tau_ab = exact_moment(p, MomentKey::E_G1X);
    parts.tau_ba = exact_moment(p, MomentKey::E_G1Y);
    parts.omega_ab = omega(a, b);
    parts.omega_ba = omega(b, a);
    parts.rho = 1.0 + parts.tau_ab + parts.tau_ba +
                (s - 1.0) * (trigamma(s) - parts.kappa_ab * parts.kappa_ba);
    return parts;
}

double rho_plus_one(const BetaParams& p) {
    const Sigma2Parts parts = sigma2_parts(p);
    const double s = p.alpha() + p.beta();
    return 1.0 + parts.tau_ab + parts.tau_ba +
           (s + 1.0) * (trigamma(s) - parts.kappa_ab * parts.kappa_ba);
}

namespace {

// G^-1 Omega G^-T for G = [[g11, g12], [g21, g22]] and symmetric Omega.
Cov2 sandwich(double g11, double g12, double g21, double g22, double o11, double o12,
              double o22) {
    const double det = g11 * g22 - g12 * g21;
    if (!(std::abs(det) > 1e-14)) {
        throw SingularMatrixError("estimating-equation Jacobian is singular");
    }
    // L = adj(G) = [[g22, -g12], [-g21, g11]]; result = L Omega L^T / det^2
    const double l11 = g22, l12 = -g12, l21 = -g21, l22 = g11;
    const double r11 = l11 * (l11 * o11 + l12 * o12) + l12 * (l11 * o12 + l12 * o22);
    const double r22 = l21 * (l21 * o11 + l22 * o12) + l22 * (l21 * o12 + l22 * o22);
    const double r12 = l11 * (l21 * o11 + l22 * o12) + l12 * (l21 * o12 + l22 * o22);
    const double inv = 1.0 / (det * det);
    return {r11 * inv, r22 * inv, r12 * inv};
}

}  // namespace

Cov2 sigma2_from_parts(const Sigma2Parts& q) {
    // G = [[kappa_ab, -tau_ab], [-tau_ba, kappa_ba]]
    return sandwich(q.kappa_ab, -q.tau_ab, -q.tau_ba, q.kappa_ba, q.omega_ab, q.rho, q.omega_ba);
}

Cov2 sigma2_closed(const BetaParams& p) { return sigma2_from_parts(sigma2_parts(p)); }

Cov2 sigma2_sandwich(const BetaParams& p) {
    using K = MomentKey;
    const double a = p.alpha(), b = p.beta();
    const auto m = [&](K k) { return exact_moment(p, k); };

    // Jacobian of g(a, b) = (1 + a lnX - (b-1) M_X, 1 + b lnY - (a-1) M_Y).
    const double g11 = m(K::E_LNX), g12 = -m(K::E_G1X);
    const double g21 = -m(K::E_G1Y), g22 = m(K::E_LNY);

    // Omega = Var of the two estimating functions (both have mean zero).
    const double o11 = a * a * m(K::VAR_LNX) + (b - 1.0) * (b - 1.0) * m(K::VAR_G1X) -
                       2.0 * a * (b - 1.0) * m(K::COV_LNX_G1X);
    const double o22 = b * b * m(K::VAR_LNY) + (a - 1.0) * (a - 1.0) * m(K::VAR_G1Y) -
                       2.0 * b * (a - 1.0) * m(K::COV_LNY_G1Y);
    const double o12 = a * b * m(K::COV_LNX_LNY) - a * (a - 1.0) * m(K::COV_LNX_G1Y) -
                       b * (b - 1.0) * m(K::COV_LNY_G1X) +
                       (a - 1.0) * (b - 1.0) * m(K::COV_G1X_G1Y);
    return sandwich(g11, g12, g21, g22, o11, o12, o22);
}

Cov2 asymptotic_cov(Method method, const BetaParams& p) {
    switch (method) {
        case Method::MLE: return crlb(p);
        case Method::MOM: return acov_mom(p);
        case Method::SAM: return sigma1(p);
        case Method::RSA: return sigma2_sandwich(p);
    }
    return crlb(p);
}

std::pair<double, double> standard_errors(const BetaParams& p_hat, Method method, std::size_t n) {
    if (n == 0) throw DomainError("standard_errors: n must be >= 1");
    const Cov2 c = asymptotic_cov(method, p_hat);
    const double dn = static_cast<double>(n);
    return {std::sqrt(c.v_aa / dn), std::sqrt(c.v_bb / dn)};
}

}  // namespace betaest
