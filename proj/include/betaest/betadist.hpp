#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace betaest {

/// Shape pair (alpha, beta) of a Beta distribution. Both finite and > 0;
/// the constructor throws DomainError otherwise.
class BetaParams {
public:
    BetaParams(double alpha, double beta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }

    /// Parameters of 1 - X when X ~ Beta(alpha, beta).
    BetaParams mirrored() const noexcept { return BetaParams(beta_, alpha_, Unchecked{}); }

    friend bool operator==(const BetaParams&, const BetaParams&) = default;

private:
    struct Unchecked {};
    BetaParams(double alpha, double beta, Unchecked) noexcept : alpha_(alpha), beta_(beta) {}

    double alpha_;
    double beta_;
};

/// Observations strictly inside (0, 1), at least one.
class Sample {
public:
    /// Throws DomainError if empty or any value is outside (0, 1).
    explicit Sample(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// 1 - x for every observation, clamped to the open interval.
    Sample mirrored() const;

private:
    std::vector<double> values_;
};

/// Density x^(a-1) (1-x)^(b-1) / B(a, b), evaluated through logs.
double pdf(const BetaParams& p, double x);

/// n draws via X = G_a / (G_a + G_b), deterministic in (p, n, seed). Draws that
/// round to 0 or 1 are clamped to the nearest interior double.
Sample sample(const BetaParams& p, std::size_t n, std::uint64_t seed);

/// Moment and covariance quantities with a closed form. G1X is X ln X / (1 - X)
/// and G1Y is Y ln Y / (1 - Y) with Y = 1 - X.
enum class MomentKey {
    E_X,
    E_LNX,
    E_LNY,
    E_XLNX,
    E_XLNY,
    E_G1X,
    E_G1Y,
    VAR_X,
    COV_X_LNX,
    COV_X_LNY,
    COV_X_XLNX,
    COV_X_XLNY,
    VAR_LNX,
    VAR_LNY,
    COV_LNX_LNY,
    COV_LNX_XLNX,
    COV_LNX_XLNY,
    COV_LNY_XLNX,
    COV_LNY_XLNY,
    VAR_XLNX,
    VAR_XLNY,
    COV_XLNX_XLNY,
    VAR_G1X,
    VAR_G1Y,
    COV_G1X_G1Y,
    COV_LNX_G1X,
    COV_LNX_G1Y,
    COV_LNY_G1X,
    COV_LNY_G1Y,
};

inline constexpr std::size_t kMomentKeyCount = 29;

const std::array<MomentKey, kMomentKeyCount>& all_moment_keys();
std::string_view to_string(MomentKey key);
std::optional<MomentKey> parse_moment_key(std::string_view name);

/// Counterpart of `key` under X -> 1 - X, with the sign relating them:
/// exact_moment(p.mirrored(), key) == sign * exact_moment(p, mirror.key).
/// Empty for keys whose mirror image (e.g. Y ln Y terms) is not a key.
struct MirrorImage {
    MomentKey key;
    double sign;
};
std::optional<MirrorImage> mirror_of(MomentKey key);

/// Closed-form value. Removable singularities of the G1 family at alpha or
/// beta in {1, 2} are resolved by limits: the analytic limit for E[G1X] at
/// beta = 1 (and its mirror), otherwise a symmetric Richardson-extrapolated
/// limit taken about the singular point.
double exact_moment(const BetaParams& p, MomentKey key);

/// The same quantity by adaptive quadrature of its defining integrals;
/// covariances are assembled as E[fg] - E[f] E[g]. Throws QuadratureError.
double quad_moment(const BetaParams& p, MomentKey key, double abs_tol = 1e-10);

}  // namespace betaest
