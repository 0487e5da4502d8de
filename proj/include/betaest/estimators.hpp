#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "betaest/betadist.hpp"

namespace betaest {

/// Every sample mean the four estimators consume, from one pass over the data.
/// Y = 1 - X throughout.
struct SufficientStats {
    std::size_t n = 0;
    double mean_x = 0.0;
    double mean_y = 0.0;  // mean of 1 - X, accumulated directly
    double mean_lnx = 0.0;
    double mean_lny = 0.0;
    double mean_x2 = 0.0;
    double mean_xlnx = 0.0;
    double mean_ylny = 0.0;
    double m_x = 0.0;  // mean of X ln X / (1 - X)
    double m_y = 0.0;  // mean of Y ln Y / (1 - Y)
    /// Central second moment from a second pass; mean_x2 - mean_x^2 cancels
    /// badly when the sample is tightly clustered.
    double var_x = 0.0;

    double variance_x() const noexcept { return var_x; }

    /// Statistics of the mirrored sample 1 - X.
    SufficientStats mirrored() const noexcept;
};

SufficientStats suff_stats(const Sample& s);

enum class Method { MOM, MLE, SAM, RSA };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct EstimateResult {
    BetaParams params{1.0, 1.0};
    Method method = Method::MOM;
    bool converged = false;
    int iterations = 0;
    double score_norm = 0.0;  // MLE only
};

enum class DegenerateReason { ALL_EQUAL, TOO_SMALL };

/// The sample cannot identify the parameters (fewer than two distinct values).
class DegenerateSampleError : public std::runtime_error {
public:
    explicit DegenerateSampleError(DegenerateReason reason);
    DegenerateReason reason() const noexcept { return reason_; }

private:
    DegenerateReason reason_;
};

/// Samples with variance below this are treated as having all values equal.
inline constexpr double kDegenerateVariance = 1e-15;

/// Pearson moment estimator from the first two moments.
EstimateResult fit_mom(const SufficientStats& stats);

/// Mixed-moment (score-adjusted moment) closed form: the first moment
/// equation plus Cov(X, ln X) + Cov(Y, ln Y) = 1 / (alpha + beta).
EstimateResult fit_sam(const SufficientStats& stats);

/// Refined score-adjusted closed form: solves the two linear equations
///   1 + alpha mean(ln X) - (beta - 1) M_X = 0
///   1 + beta mean(ln Y) - (alpha - 1) M_Y = 0.
EstimateResult fit_rsa(const SufficientStats& stats);

struct MleOptions {
    int max_iter = 100;
    int max_halvings = 30;
    double tolerance = 1e-10;  // on the max-norm of the score
};

/// Maximum likelihood by damped Newton on the score equations with the exact
/// (trigamma) Jacobian, started at the moment estimate. Never throws on
/// non-convergence; the result carries converged = false instead. Throws
/// DegenerateSampleError when no starting point exists.
EstimateResult fit_mle(const SufficientStats& stats, const MleOptions& opts = {});

/// Max-norm of the beta score equations at `p`.
double mle_score_norm(const SufficientStats& stats, const BetaParams& p);

/// Dispatch by method.
EstimateResult fit(Method method, const SufficientStats& stats, const MleOptions& opts = {});

}  // namespace betaest
