#pragma once

#include <functional>

namespace betaest::quadrature {

/// A node on (0, 1) with both endpoint distances and their logs computed
/// directly, so integrands see full precision near either endpoint.
struct UnitPoint {
    double x;
    double y;  // 1 - x
    double log_x;
    double log_y;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int levels = 0;
    int evaluations = 0;
};

using UnitIntegrand = std::function<double(const UnitPoint&)>;

/// Adaptive tanh-sinh integration over the open interval (0, 1). The
/// interval is split at 1/2 and each half gets its own double-exponential
/// map, so integrable algebraic or logarithmic endpoint singularities are
/// handled without evaluating at 0 or 1. Step halving continues until two
/// successive estimates differ by at most abs_tol; throws QuadratureError
/// otherwise.
QuadResult integrate_unit_interval(const UnitIntegrand& f, double abs_tol = 1e-10);

}  // namespace betaest::quadrature
