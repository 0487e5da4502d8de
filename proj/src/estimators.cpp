#include "betaest/estimators.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "betaest/specfun.hpp"

namespace betaest {

using specfun::digamma;
using specfun::trigamma;

SufficientStats SufficientStats::mirrored() const noexcept {
    SufficientStats m = *this;
    m.mean_x = mean_y;
    m.mean_y = mean_x;
    // E[Y^2] = 1 - 2 E[X] + E[X^2]
    m.mean_x2 = 1.0 - 2.0 * mean_x + mean_x2;
    std::swap(m.mean_lnx, m.mean_lny);
    std::swap(m.mean_xlnx, m.mean_ylny);
    std::swap(m.m_x, m.m_y);
    return m;
}

SufficientStats suff_stats(const Sample& s) {
    SufficientStats st;
    st.n = s.size();
    for (double x : s.values()) {
        const double y = 1.0 - x;
        const double lnx = std::log(x);
        const double lny = std::log1p(-x);
        st.mean_x += x;
        st.mean_y += y;
        st.mean_x2 += x * x;
        st.mean_lnx += lnx;
        st.mean_lny += lny;
        st.mean_xlnx += x * lnx;
        st.mean_ylny += y * lny;
        st.m_x += x * lnx / y;
        st.m_y += y * lny / x;
    }
    const double inv_n = 1.0 / static_cast<double>(st.n);
    st.mean_x *= inv_n;
    st.mean_y *= inv_n;
    for (double x : s.values()) st.var_x += (x - st.mean_x) * (x - st.mean_x);
    st.var_x *= inv_n;
    st.mean_x2 *= inv_n;
    st.mean_lnx *= inv_n;
    st.mean_lny *= inv_n;
    st.mean_xlnx *= inv_n;
    st.mean_ylny *= inv_n;
    st.m_x *= inv_n;
    st.m_y *= inv_n;
    return st;
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::MOM: return "MOM";
        case Method::MLE: return "MLE";
        case Method::SAM: return "SAM";
        case Method::RSA: return "RSA";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) {
    for (Method m : {Method::MOM, Method::MLE, Method::SAM, Method::RSA}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

namespace {

const char* reason_text(DegenerateReason r) {
    return r == DegenerateReason::TOO_SMALL ? "degenerate sample: fewer than two observations"
                                            : "degenerate sample: all observations are equal";
}

void require_identifiable(const SufficientStats& st) {
    if (st.n < 2) throw DegenerateSampleError(DegenerateReason::TOO_SMALL);
    if (!(st.variance_x() >= kDegenerateVariance)) {
        throw DegenerateSampleError(DegenerateReason::ALL_EQUAL);
    }
}

EstimateResult closed_form(double alpha, double beta, Method method) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        // Only reachable when rounding swamps a nearly constant sample.
        throw DegenerateSampleError(DegenerateReason::ALL_EQUAL);
    }
    EstimateResult r;
    r.params = BetaParams(alpha, beta);
    r.method = method;
    r.converged = true;
    return r;
}

}  // namespace

DegenerateSampleError::DegenerateSampleError(DegenerateReason reason)
    : std::runtime_error(reason_text(reason)), reason_(reason) {}

EstimateResult fit_mom(const SufficientStats& st) {
    require_identifiable(st);
    // (mean_x - mean_x2) / var, rewritten to avoid the cancellation in mean_x2.
    const double common = st.mean_x * st.mean_y / st.variance_x() - 1.0;
    return closed_form(st.mean_x * common, st.mean_y * common, Method::MOM);
}

EstimateResult fit_sam(const SufficientStats& st) {
    require_identifiable(st);
    const double gamma = (st.mean_xlnx - st.mean_x * st.mean_lnx) +
                         (st.mean_ylny - st.mean_y * st.mean_lny);
    if (!(gamma > 0.0)) throw DegenerateSampleError(DegenerateReason::ALL_EQUAL);
    return closed_form(st.mean_x / gamma, st.mean_y / gamma, Method::SAM);
}

EstimateResult fit_rsa(const SufficientStats& st) {
    require_identifiable(st);
    const double denom = st.m_x * st.m_y - st.mean_lnx * st.mean_lny;
    if (!(denom < 0.0)) throw DegenerateSampleError(DegenerateReason::ALL_EQUAL);
    const double alpha = ((1.0 + st.m_x) * st.mean_lny + (1.0 + st.m_y) * st.m_x) / denom;
    const double beta = ((1.0 + st.m_y) * st.mean_lnx + (1.0 + st.m_x) * st.m_y) / denom;
    return closed_form(alpha, beta, Method::RSA);
}

namespace {

std::array<double, 2> score(const SufficientStats& st, double a, double b) {
    const double ds = digamma(a + b);
    return {st.mean_lnx + ds - digamma(a), st.mean_lny + ds - digamma(b)};
}

double max_norm(const std::array<double, 2>& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

}  // namespace

double mle_score_norm(const SufficientStats& st, const BetaParams& p) {
    return max_norm(score(st, p.alpha(), p.beta()));
}

EstimateResult fit_mle(const SufficientStats& st, const MleOptions& opts) {
    EstimateResult start;
    try {
        start = fit_mom(st);
    } catch (const DegenerateSampleError& e) {
        if (e.reason() == DegenerateReason::TOO_SMALL) throw;
        start = fit_rsa(st);
    }

    double a = start.params.alpha();
    double b = start.params.beta();
    auto f = score(st, a, b);
    double norm = max_norm(f);

    EstimateResult r;
    r.method = Method::MLE;
    r.params = start.params;

    int iter = 0;
    bool polished = false;
    while (iter < opts.max_iter) {
        if (norm < opts.tolerance && polished) break;
        // J = [[psi1(s) - psi1(a), psi1(s)], [psi1(s), psi1(s) - psi1(b)]]
        const double ts = trigamma(a + b);
        const double j11 = ts - trigamma(a), j22 = ts - trigamma(b), j12 = ts;
        const double det = j11 * j22 - j12 * j12;
        const double da = -(j22 * f[0] - j12 * f[1]) / det;
        const double db = -(-j12 * f[0] + j11 * f[1]) / det;
        ++iter;

        // Once inside tolerance, one more full step is taken only if it does
        // not make the score worse.
        const bool polishing = norm < opts.tolerance;
        double step = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h, step *= 0.5) {
            const double na = a + step * da, nb = b + step * db;
            if (!(na > 0.0 && nb > 0.0) || !std::isfinite(na) || !std::isfinite(nb)) continue;
            const auto nf = score(st, na, nb);
            const double nn = max_norm(nf);
            if (nn < norm || (polishing && nn <= norm)) {
                a = na;
                b = nb;
                f = nf;
                norm = nn;
                accepted = true;
                break;
            }
            if (polishing) break;
        }
        if (polishing) {
            polished = true;
            continue;
        }
        if (!accepted) break;
    }

    r.params = BetaParams(a, b);
    r.iterations = iter;
    r.score_norm = norm;
    r.converged = norm < opts.tolerance && std::isfinite(a) && std::isfinite(b);
    return r;
}

EstimateResult fit(Method method, const SufficientStats& stats, const MleOptions& opts) {
    switch (method) {
        case Method::MOM: return fit_mom(stats);
        case Method::MLE: return fit_mle(stats, opts);
        case Method::SAM: return fit_sam(stats);
        case Method::RSA: return fit_rsa(stats);
    }
    return fit_mom(stats);
}

}  // namespace betaest
