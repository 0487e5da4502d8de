#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "betaest/asymptotics.hpp"
#include "betaest/betadist.hpp"
#include "betaest/estimators.hpp"

namespace betaest::mc {

struct SimConfig {
    std::vector<double> alpha_grid;
    std::vector<double> beta_grid;
    std::vector<std::size_t> n_grid;
    std::size_t reps = 10000;
    std::uint64_t seed = 1;
    std::vector<Method> methods{Method::MOM, Method::MLE, Method::SAM, Method::RSA};
    MleOptions mle{};
    unsigned threads = 0;  // 0: hardware concurrency
};

struct SimCellSummary {
    double alpha_true = 0.0;
    double beta_true = 0.0;
    std::size_t n = 0;
    Method method = Method::MOM;
    double abs_bias_alpha = 0.0;
    double abs_bias_beta = 0.0;
    double rmse_alpha = 0.0;
    double rmse_beta = 0.0;
    std::size_t n_fail = 0;
    std::size_t reps_used = 0;
    std::size_t reps = 0;
    std::uint64_t cell_seed = 0;
};

struct CovCellSummary {
    double alpha_true = 0.0;
    double beta_true = 0.0;
    std::size_t n = 0;
    Method method = Method::MOM;
    Cov2 n_cov;  // n times the empirical covariance of the estimates
    std::size_t reps = 0;
    std::size_t reps_used = 0;
};

/// Replacement estimator for run_cell; lets tests inject failures.
using Fitter = std::function<EstimateResult(const SufficientStats&)>;

struct CellOptions {
    MleOptions mle{};
    Fitter fitter;  // overrides `method` when set
    /// Fit 1 - X instead of X and score against the mirrored truth.
    bool mirror_samples = false;
};

/// 64-bit mixing (splitmix64 finalizer) used for every derived seed.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of the grid cell at the given (sorted) grid indices. All methods of
/// one (alpha, beta, n) cell share it, so they are compared on identical draws.
std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t alpha_index, std::size_t beta_index,
                        std::size_t n_index) noexcept;

/// Seed of replication `rep` inside a cell.
std::uint64_t replication_seed(std::uint64_t cell_seed, std::size_t rep) noexcept;

/// The sample drawn by replication `rep` of a cell.
Sample replication_sample(const BetaParams& p, std::size_t n, std::uint64_t cell_seed,
                          std::size_t rep);

/// Bias and rMSE over `reps` replications. Replications whose fit reports
/// converged = false or throws DegenerateSampleError count as failures and are
/// excluded from the accumulators.
SimCellSummary run_cell(const BetaParams& p, std::size_t n, Method method, std::size_t reps,
                        std::uint64_t cell_seed, const CellOptions& opts = {});

/// Every (alpha, beta, n, method) cell of the configuration, in ascending
/// (alpha, beta, n) order and method order MLE, MOM, RSA, SAM. Output does
/// not depend on the thread count.
std::vector<SimCellSummary> run_grid(const SimConfig& cfg);

/// n times the empirical covariance of the estimates across successful
/// replications.
CovCellSummary run_cov_validation(const BetaParams& p, std::size_t n, Method method,
                                  std::size_t reps, std::uint64_t seed, const MleOptions& mle = {},
                                  unsigned threads = 0);

/// Header line of the simulate CSV (no trailing newline).
std::string csv_header();
std::string csv_row(const SimCellSummary& s);
std::string to_csv(const std::vector<SimCellSummary>& cells);

}  // namespace betaest::mc
