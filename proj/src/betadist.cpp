#include "betaest/betadist.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "betaest/errors.hpp"
#include "betaest/quadrature.hpp"
#include "betaest/specfun.hpp"

namespace betaest {

using specfun::digamma;
using specfun::trigamma;

BetaParams::BetaParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw DomainError("Beta parameters must be finite and > 0, got (" + std::to_string(alpha) +
                          ", " + std::to_string(beta) + ")");
    }
}

namespace {

constexpr double kLowest = std::numeric_limits<double>::denorm_min();
const double kHighest = std::nextafter(1.0, 0.0);

double clamp_open(double x) {
    if (x <= 0.0) return kLowest;
    if (x >= 1.0) return kHighest;
    return x;
}

}  // namespace

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("sample must contain at least one value");
    for (double v : values_) {
        if (!(v > 0.0 && v < 1.0)) {
            throw DomainError("sample value outside (0, 1): " + std::to_string(v));
        }
    }
}

Sample Sample::mirrored() const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (double v : values_) out.push_back(clamp_open(1.0 - v));
    return Sample(std::move(out));
}

double pdf(const BetaParams& p, double x) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("pdf: x outside (0, 1): " + std::to_string(x));
    const double log_density = (p.alpha() - 1.0) * std::log(x) +
                               (p.beta() - 1.0) * std::log1p(-x) -
                               specfun::log_beta_fn(p.alpha(), p.beta());
    return std::exp(log_density);
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

// Uniform on (0, 1] with 53 random bits.
double uniform_open_closed(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

// log of a Gamma(shape, 1) variate (Marsaglia-Tsang). Small shapes use the
// boost G(a) = G(a + 1) U^(1/a) in log space, so tiny variates cannot underflow.
double log_gamma_variate(double shape, std::mt19937_64& rng, std::normal_distribution<double>& normal) {
    if (shape < 1.0) {
        const double boost = std::log(uniform_open_closed(rng)) / shape;
        return log_gamma_variate(shape + 1.0, rng, normal) + boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double z = normal(rng);
        double v = 1.0 + c * z;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double log_u = std::log(uniform_open_closed(rng));
        if (log_u < 0.5 * z * z + d - d * v + d * std::log(v)) return std::log(d) + std::log(v);
    }
}

}  // namespace

Sample sample(const BetaParams& p, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("sample size must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> values;
    values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double log_ga = log_gamma_variate(p.alpha(), rng, normal);
        const double log_gb = log_gamma_variate(p.beta(), rng, normal);
        // G_a / (G_a + G_b) = 1 / (1 + exp(log G_b - log G_a))
        values.push_back(clamp_open(1.0 / (1.0 + std::exp(log_gb - log_ga))));
    }
    return Sample(std::move(values));
}

// ---------------------------------------------------------------------------
// Moment keys

const std::array<MomentKey, kMomentKeyCount>& all_moment_keys() {
    static constexpr std::array<MomentKey, kMomentKeyCount> keys = {
        MomentKey::E_X,          MomentKey::E_LNX,         MomentKey::E_LNY,
        MomentKey::E_XLNX,       MomentKey::E_XLNY,        MomentKey::E_G1X,
        MomentKey::E_G1Y,        MomentKey::VAR_X,         MomentKey::COV_X_LNX,
        MomentKey::COV_X_LNY,    MomentKey::COV_X_XLNX,    MomentKey::COV_X_XLNY,
        MomentKey::VAR_LNX,      MomentKey::VAR_LNY,       MomentKey::COV_LNX_LNY,
        MomentKey::COV_LNX_XLNX, MomentKey::COV_LNX_XLNY,  MomentKey::COV_LNY_XLNX,
        MomentKey::COV_LNY_XLNY, MomentKey::VAR_XLNX,      MomentKey::VAR_XLNY,
        MomentKey::COV_XLNX_XLNY, MomentKey::VAR_G1X,      MomentKey::VAR_G1Y,
        MomentKey::COV_G1X_G1Y,  MomentKey::COV_LNX_G1X,   MomentKey::COV_LNX_G1Y,
        MomentKey::COV_LNY_G1X,  MomentKey::COV_LNY_G1Y,
    };
    return keys;
}

std::string_view to_string(MomentKey key) {
    switch (key) {
        case MomentKey::E_X: return "E_X";
        case MomentKey::E_LNX: return "E_LNX";
        case MomentKey::E_LNY: return "E_LNY";
        case MomentKey::E_XLNX: return "E_XLNX";
        case MomentKey::E_XLNY: return "E_XLNY";
        case MomentKey::E_G1X: return "E_G1X";
        case MomentKey::E_G1Y: return "E_G1Y";
        case MomentKey::VAR_X: return "VAR_X";
        case MomentKey::COV_X_LNX: return "COV_X_LNX";
        case MomentKey::COV_X_LNY: return "COV_X_LNY";
        case MomentKey::COV_X_XLNX: return "COV_X_XLNX";
        case MomentKey::COV_X_XLNY: return "COV_X_XLNY";
        case MomentKey::VAR_LNX: return "VAR_LNX";
        case MomentKey::VAR_LNY: return "VAR_LNY";
        case MomentKey::COV_LNX_LNY: return "COV_LNX_LNY";
        case MomentKey::COV_LNX_XLNX: return "COV_LNX_XLNX";
        case MomentKey::COV_LNX_XLNY: return "COV_LNX_XLNY";
        case MomentKey::COV_LNY_XLNX: return "COV_LNY_XLNX";
        case MomentKey::COV_LNY_XLNY: return "COV_LNY_XLNY";
        case MomentKey::VAR_XLNX: return "VAR_XLNX";
        case MomentKey::VAR_XLNY: return "VAR_XLNY";
        case MomentKey::COV_XLNX_XLNY: return "COV_XLNX_XLNY";
        case MomentKey::VAR_G1X: return "VAR_G1X";
        case MomentKey::VAR_G1Y: return "VAR_G1Y";
        case MomentKey::COV_G1X_G1Y: return "COV_G1X_G1Y";
        case MomentKey::COV_LNX_G1X: return "COV_LNX_G1X";
        case MomentKey::COV_LNX_G1Y: return "COV_LNX_G1Y";
        case MomentKey::COV_LNY_G1X: return "COV_LNY_G1X";
        case MomentKey::COV_LNY_G1Y: return "COV_LNY_G1Y";
    }
    return "?";
}

std::optional<MomentKey> parse_moment_key(std::string_view name) {
    for (MomentKey k : all_moment_keys()) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

std::optional<MirrorImage> mirror_of(MomentKey key) {
    using K = MomentKey;
    switch (key) {
        case K::E_LNX: return MirrorImage{K::E_LNY, 1.0};
        case K::E_LNY: return MirrorImage{K::E_LNX, 1.0};
        case K::E_G1X: return MirrorImage{K::E_G1Y, 1.0};
        case K::E_G1Y: return MirrorImage{K::E_G1X, 1.0};
        case K::VAR_X: return MirrorImage{K::VAR_X, 1.0};
        // Cov(Y, ln Y) = -Cov(X, ln Y)
        case K::COV_X_LNX: return MirrorImage{K::COV_X_LNY, -1.0};
        case K::COV_X_LNY: return MirrorImage{K::COV_X_LNX, -1.0};
        case K::VAR_LNX: return MirrorImage{K::VAR_LNY, 1.0};
        case K::VAR_LNY: return MirrorImage{K::VAR_LNX, 1.0};
        case K::COV_LNX_LNY: return MirrorImage{K::COV_LNX_LNY, 1.0};
        case K::VAR_G1X: return MirrorImage{K::VAR_G1Y, 1.0};
        case K::VAR_G1Y: return MirrorImage{K::VAR_G1X, 1.0};
        case K::COV_G1X_G1Y: return MirrorImage{K::COV_G1X_G1Y, 1.0};
        case K::COV_LNX_G1X: return MirrorImage{K::COV_LNY_G1Y, 1.0};
        case K::COV_LNY_G1Y: return MirrorImage{K::COV_LNX_G1X, 1.0};
        case K::COV_LNX_G1Y: return MirrorImage{K::COV_LNY_G1X, 1.0};
        case K::COV_LNY_G1X: return MirrorImage{K::COV_LNX_G1Y, 1.0};
        default: return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

constexpr double kGuardBand = 1e-4;
constexpr double kLimitStep = 1e-3;

std::optional<double> singular_point_near(double x, std::initializer_list<double> points) {
    for (double c : points) {
        if (std::abs(x - c) < kGuardBand) return c;
    }
    return std::nullopt;
}

struct LimitExpansion {
    double value;  // limit at the singular point
    double slope;
};

// First-order expansion of f about c from symmetric offsets c +- h, c +- 2h,
// Richardson-combined so both value and slope are O(h^4) accurate.
template <class F>
LimitExpansion expand_about(F&& f, double c) {
    const double h = kLimitStep;
    const double p1 = f(c + h), m1 = f(c - h), p2 = f(c + 2.0 * h), m2 = f(c - 2.0 * h);
    const double mean1 = 0.5 * (p1 + m1), mean2 = 0.5 * (p2 + m2);
    const double slope1 = (p1 - m1) / (2.0 * h), slope2 = (p2 - m2) / (4.0 * h);
    return {(4.0 * mean1 - mean2) / 3.0, (4.0 * slope1 - slope2) / 3.0};
}

using RawMoment = double (*)(double a, double b);

// Evaluates raw(a, b), replacing it by its limit expansion wherever a or b
// sits inside the guard band of one of its singular values.
double regularized(RawMoment raw, double a, double b, std::initializer_list<double> singular_a,
                   std::initializer_list<double> singular_b) {
    auto along_b = [&](double aa) {
        if (auto c = singular_point_near(b, singular_b)) {
            const auto e = expand_about([&](double bb) { return raw(aa, bb); }, *c);
            return e.value + e.slope * (b - *c);
        }
        return raw(aa, b);
    };
    if (auto c = singular_point_near(a, singular_a)) {
        const auto e = expand_about(along_b, *c);
        return e.value + e.slope * (a - *c);
    }
    return along_b(a);
}

// The X-side formulas. Y-side keys are evaluated through mirror symmetry.

double e_g1x_raw(double a, double b) {
    return a / (b - 1.0) * (digamma(a + 1.0) - digamma(a + b));
}

double var_g1x_raw(double a, double b) {
    const double s = a + b;
    const double d2 = digamma(a + 2.0) - digamma(s);
    const double d1 = digamma(a + 1.0) - digamma(s);
    return a * (a + 1.0) / ((b - 1.0) * (b - 2.0)) * (trigamma(a + 2.0) - trigamma(s) + d2 * d2) -
           a * a / ((b - 1.0) * (b - 1.0)) * d1 * d1;
}

double cov_g1x_g1y_raw(double a, double b) {
    const double s = a + b;
    const double kappa_ab = digamma(a) - digamma(s);
    const double kappa_ba = digamma(b) - digamma(s);
    const double tau_ab = a / (b - 1.0) * (digamma(a + 1.0) - digamma(s));
    const double tau_ba = b / (a - 1.0) * (digamma(b + 1.0) - digamma(s));
    return -trigamma(s) + kappa_ab * kappa_ba - tau_ab * tau_ba;
}

double cov_lnx_g1x_raw(double a, double b) {
    const double s = a + b;
    return a / (b - 1.0) * (trigamma(a + 1.0) - trigamma(s)) +
           (digamma(a + 1.0) - digamma(s)) / (b - 1.0);
}

double cov_lny_g1x_raw(double a, double b) {
    const double s = a + b;
    return -a / (b - 1.0) * trigamma(s) -
           a / ((b - 1.0) * (b - 1.0)) * (digamma(a + 1.0) - digamma(s));
}

double x_side_moment(double a, double b, MomentKey key) {
    using K = MomentKey;
    const double s = a + b;
    // Recurring blocks.
    const auto d_a1 = [&] { return digamma(a + 1.0) - digamma(s + 1.0); };
    const auto d_a2 = [&] { return digamma(a + 2.0) - digamma(s + 2.0); };
    const auto d_b1 = [&] { return digamma(b) - digamma(s + 1.0); };
    const auto d_b2 = [&] { return digamma(b) - digamma(s + 2.0); };
    const double w1 = a / s;                          // E[X]
    const double w2 = a * (a + 1.0) / (s * (s + 1.0));  // E[X^2]

    switch (key) {
        case K::E_X: return w1;
        case K::E_LNX: return digamma(a) - digamma(s);
        case K::E_XLNX: return w1 * d_a1();
        case K::E_XLNY: return w1 * d_b1();
        case K::E_G1X: {
            if (auto c = singular_point_near(b, {1.0})) {
                // Analytic limit at beta = 1, plus the numeric slope inside the band.
                const auto e = expand_about([&](double bb) { return e_g1x_raw(a, bb); }, *c);
                return -a * trigamma(a + 1.0) + e.slope * (b - *c);
            }
            return e_g1x_raw(a, b);
        }
        case K::VAR_X: return a * b / (s * s * (s + 1.0));
        case K::COV_X_LNX: return b / (s * s);
        case K::COV_X_LNY: return -a / (s * s);
        case K::COV_X_XLNX: return w2 * d_a2() - w1 * w1 * d_a1();
        case K::COV_X_XLNY: return w2 * d_b2() - w1 * w1 * d_b1();
        case K::VAR_LNX: return trigamma(a) - trigamma(s);
        case K::COV_LNX_LNY: return -trigamma(s);
        case K::COV_LNX_XLNX: return b / (s * s) * d_a1() + w1 * (trigamma(a + 1.0) - trigamma(s + 1.0));
        case K::COV_LNX_XLNY:
            return b / s * trigamma(s + 1.0) - b / (s * s) * (digamma(s + 1.0) - digamma(b + 1.0)) -
                   trigamma(s);
        case K::COV_LNY_XLNX: return -a / (s * s) * d_a1() - w1 * trigamma(s + 1.0);
        case K::COV_LNY_XLNY:
            return trigamma(b) - trigamma(s) - b / s * (trigamma(b + 1.0) - trigamma(s + 1.0)) -
                   a / (s * s) * (digamma(b + 1.0) - digamma(s + 1.0));
        case K::VAR_XLNX: {
            const double d1 = d_a1(), d2 = d_a2();
            return w2 * (d2 * d2 + trigamma(a + 2.0) - trigamma(s + 2.0)) - w1 * w1 * d1 * d1;
        }
        case K::VAR_XLNY: {
            const double d1 = d_b1(), d2 = d_b2();
            return w2 * (d2 * d2 + trigamma(b) - trigamma(s + 2.0)) - w1 * w1 * d1 * d1;
        }
        case K::COV_XLNX_XLNY:
            return -w1 * w1 * d_a1() * d_b1() + w2 * (d_a2() * d_b2() - trigamma(s + 2.0));
        case K::VAR_G1X: return regularized(var_g1x_raw, a, b, {}, {1.0, 2.0});
        case K::COV_G1X_G1Y: return regularized(cov_g1x_g1y_raw, a, b, {1.0}, {1.0});
        case K::COV_LNX_G1X: return regularized(cov_lnx_g1x_raw, a, b, {}, {1.0});
        case K::COV_LNY_G1X: return regularized(cov_lny_g1x_raw, a, b, {}, {1.0});
        default: break;
    }
    throw DomainError("no X-side formula for " + std::string(to_string(key)));
}

}  // namespace

double exact_moment(const BetaParams& p, MomentKey key) {
    using K = MomentKey;
    switch (key) {
        case K::E_LNY:
        case K::E_G1Y:
        case K::VAR_LNY:
        case K::VAR_G1Y:
        case K::COV_LNY_G1Y:
        case K::COV_LNX_G1Y: {
            const auto m = *mirror_of(key);
            return m.sign * exact_moment(p.mirrored(), m.key);
        }
        default: return x_side_moment(p.alpha(), p.beta(), key);
    }
}

// ---------------------------------------------------------------------------
// Quadrature oracle

namespace {

enum class Factor { X, LNX, LNY, XLNX, XLNY, G1X, G1Y };

double factor_value(Factor f, const quadrature::UnitPoint& pt) {
    switch (f) {
        case Factor::X: return pt.x;
        case Factor::LNX: return pt.log_x;
        case Factor::LNY: return pt.log_y;
        case Factor::XLNX: return pt.x * pt.log_x;
        case Factor::XLNY: return pt.x * pt.log_y;
        case Factor::G1X: return pt.x * pt.log_x / pt.y;
        case Factor::G1Y: return pt.y * pt.log_y / pt.x;
    }
    return 0.0;
}

struct Integrands {
    Factor first;
    std::optional<Factor> second;  // set for covariance keys
};

Integrands integrands_of(MomentKey key) {
    using K = MomentKey;
    using F = Factor;
    switch (key) {
        case K::E_X: return {F::X, {}};
        case K::E_LNX: return {F::LNX, {}};
        case K::E_LNY: return {F::LNY, {}};
        case K::E_XLNX: return {F::XLNX, {}};
        case K::E_XLNY: return {F::XLNY, {}};
        case K::E_G1X: return {F::G1X, {}};
        case K::E_G1Y: return {F::G1Y, {}};
        case K::VAR_X: return {F::X, F::X};
        case K::COV_X_LNX: return {F::X, F::LNX};
        case K::COV_X_LNY: return {F::X, F::LNY};
        case K::COV_X_XLNX: return {F::X, F::XLNX};
        case K::COV_X_XLNY: return {F::X, F::XLNY};
        case K::VAR_LNX: return {F::LNX, F::LNX};
        case K::VAR_LNY: return {F::LNY, F::LNY};
        case K::COV_LNX_LNY: return {F::LNX, F::LNY};
        case K::COV_LNX_XLNX: return {F::LNX, F::XLNX};
        case K::COV_LNX_XLNY: return {F::LNX, F::XLNY};
        case K::COV_LNY_XLNX: return {F::LNY, F::XLNX};
        case K::COV_LNY_XLNY: return {F::LNY, F::XLNY};
        case K::VAR_XLNX: return {F::XLNX, F::XLNX};
        case K::VAR_XLNY: return {F::XLNY, F::XLNY};
        case K::COV_XLNX_XLNY: return {F::XLNX, F::XLNY};
        case K::VAR_G1X: return {F::G1X, F::G1X};
        case K::VAR_G1Y: return {F::G1Y, F::G1Y};
        case K::COV_G1X_G1Y: return {F::G1X, F::G1Y};
        case K::COV_LNX_G1X: return {F::LNX, F::G1X};
        case K::COV_LNX_G1Y: return {F::LNX, F::G1Y};
        case K::COV_LNY_G1X: return {F::LNY, F::G1X};
        case K::COV_LNY_G1Y: return {F::LNY, F::G1Y};
    }
    return {F::X, {}};
}

}  // namespace

double quad_moment(const BetaParams& p, MomentKey key, double abs_tol) {
    const double a = p.alpha(), b = p.beta();
    const double log_norm = specfun::log_beta_fn(a, b);
    auto expectation = [&](auto&& g) {
        return quadrature::integrate_unit_interval(
                   [&](const quadrature::UnitPoint& pt) {
                       const double density =
                           std::exp((a - 1.0) * pt.log_x + (b - 1.0) * pt.log_y - log_norm);
                       return g(pt) * density;
                   },
                   abs_tol)
            .value;
    };

    const Integrands in = integrands_of(key);
    const double ef = expectation([&](const auto& pt) { return factor_value(in.first, pt); });
    if (!in.second) return ef;
    const Factor second = *in.second;
    const double eg = expectation([&](const auto& pt) { return factor_value(second, pt); });
    const double efg = expectation(
        [&](const auto& pt) { return factor_value(in.first, pt) * factor_value(second, pt); });
    return efg - ef * eg;
}

}  // namespace betaest
