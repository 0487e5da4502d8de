#include "betaest/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "betaest/format.hpp"

namespace betaest::mc {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t combine(std::uint64_t h, std::uint64_t v) noexcept { return mix64(h ^ mix64(v)); }

unsigned resolve_threads(unsigned requested, std::size_t tasks) {
    unsigned t = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(tasks, 1)));
}

// Runs body(i) for i in [0, count) on `threads` workers. Each index is
// processed exactly once; callers write results by index.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    threads = resolve_threads(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
}

struct Fit {
    bool ok = false;
    double alpha = 0.0;
    double beta = 0.0;
};

Fit fit_replication(const Sample& draws, Method method, const CellOptions& opts) {
    const SufficientStats st = suff_stats(opts.mirror_samples ? draws.mirrored() : draws);
    try {
        const EstimateResult r = opts.fitter ? opts.fitter(st) : fit(method, st, opts.mle);
        if (!r.converged) return {};
        return {true, r.params.alpha(), r.params.beta()};
    } catch (const DegenerateSampleError&) {
        return {};
    }
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t alpha_index, std::size_t beta_index,
                        std::size_t n_index) noexcept {
    std::uint64_t h = mix64(base_seed);
    h = combine(h, alpha_index);
    h = combine(h, beta_index);
    return combine(h, n_index);
}

std::uint64_t replication_seed(std::uint64_t cell, std::size_t rep) noexcept {
    return combine(cell, rep);
}

Sample replication_sample(const BetaParams& p, std::size_t n, std::uint64_t cell,
                          std::size_t rep) {
    return sample(p, n, replication_seed(cell, rep));
}

SimCellSummary run_cell(const BetaParams& p, std::size_t n, Method method, std::size_t reps,
                        std::uint64_t cell, const CellOptions& opts) {
    const BetaParams truth = opts.mirror_samples ? p.mirrored() : p;
    SimCellSummary s;
    s.alpha_true = truth.alpha();
    s.beta_true = truth.beta();
    s.n = n;
    s.method = method;
    s.reps = reps;
    s.cell_seed = cell;

    double sum_a = 0.0, sum_b = 0.0, sq_a = 0.0, sq_b = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        const Fit f = fit_replication(replication_sample(p, n, cell, r), method, opts);
        if (!f.ok) {
            ++s.n_fail;
            continue;
        }
        const double ea = f.alpha - truth.alpha();
        const double eb = f.beta - truth.beta();
        sum_a += ea;
        sum_b += eb;
        sq_a += ea * ea;
        sq_b += eb * eb;
        ++s.reps_used;
    }
    if (s.reps_used == 0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        s.abs_bias_alpha = s.abs_bias_beta = s.rmse_alpha = s.rmse_beta = nan;
        return s;
    }
    const double m = static_cast<double>(s.reps_used);
    s.abs_bias_alpha = std::abs(sum_a / m);
    s.abs_bias_beta = std::abs(sum_b / m);
    s.rmse_alpha = std::sqrt(sq_a / m);
    s.rmse_beta = std::sqrt(sq_b / m);
    return s;
}

std::vector<SimCellSummary> run_grid(const SimConfig& cfg) {
    auto sorted_unique = [](auto v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    const auto alphas = sorted_unique(cfg.alpha_grid);
    const auto betas = sorted_unique(cfg.beta_grid);
    const auto ns = sorted_unique(cfg.n_grid);
    auto methods = cfg.methods;
    std::sort(methods.begin(), methods.end(),
              [](Method x, Method y) { return to_string(x) < to_string(y); });
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

    struct Task {
        std::size_t ai, bi, ni;
        Method method;
    };
    std::vector<Task> tasks;
    for (std::size_t ai = 0; ai < alphas.size(); ++ai)
        for (std::size_t bi = 0; bi < betas.size(); ++bi)
            for (std::size_t ni = 0; ni < ns.size(); ++ni)
                for (Method m : methods) tasks.push_back({ai, bi, ni, m});

    std::vector<SimCellSummary> out(tasks.size());
    CellOptions opts;
    opts.mle = cfg.mle;
    parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
        const Task& t = tasks[i];
        const BetaParams p(alphas[t.ai], betas[t.bi]);
        out[i] = run_cell(p, ns[t.ni], t.method, cfg.reps, cell_seed(cfg.seed, t.ai, t.bi, t.ni),
                          opts);
    });
    return out;
}

CovCellSummary run_cov_validation(const BetaParams& p, std::size_t n, Method method,
                                  std::size_t reps, std::uint64_t seed, const MleOptions& mle,
                                  unsigned threads) {
    CellOptions opts;
    opts.mle = mle;
    std::vector<Fit> fits(reps);
    parallel_for(reps, threads, [&](std::size_t r) {
        fits[r] = fit_replication(replication_sample(p, n, seed, r), method, opts);
    });

    CovCellSummary s;
    s.alpha_true = p.alpha();
    s.beta_true = p.beta();
    s.n = n;
    s.method = method;
    s.reps = reps;
    double ma = 0.0, mb = 0.0;
    for (const Fit& f : fits) {
        if (!f.ok) continue;
        ma += f.alpha;
        mb += f.beta;
        ++s.reps_used;
    }
    if (s.reps_used < 2) return s;
    const double m = static_cast<double>(s.reps_used);
    ma /= m;
    mb /= m;
    double caa = 0.0, cbb = 0.0, cab = 0.0;
    for (const Fit& f : fits) {
        if (!f.ok) continue;
        caa += (f.alpha - ma) * (f.alpha - ma);
        cbb += (f.beta - mb) * (f.beta - mb);
        cab += (f.alpha - ma) * (f.beta - mb);
    }
    const double scale = static_cast<double>(n) / (m - 1.0);
    s.n_cov = {caa * scale, cbb * scale, cab * scale};
    return s;
}

std::string csv_header() {
    return "alpha_true,beta_true,n,method,abs_bias_alpha,abs_bias_beta,rmse_alpha,rmse_beta,"
           "n_fail,reps,cell_seed";
}

std::string csv_row(const SimCellSummary& s) {
    std::string row;
    row += format_real(s.alpha_true) + ',';
    row += format_real(s.beta_true) + ',';
    row += std::to_string(s.n) + ',';
    row += std::string(to_string(s.method)) + ',';
    row += format_real(s.abs_bias_alpha) + ',';
    row += format_real(s.abs_bias_beta) + ',';
    row += format_real(s.rmse_alpha) + ',';
    row += format_real(s.rmse_beta) + ',';
    row += std::to_string(s.n_fail) + ',';
    row += std::to_string(s.reps) + ',';
    row += std::to_string(s.cell_seed);
    return row;
}

std::string to_csv(const std::vector<SimCellSummary>& cells) {
    std::string out = csv_header() + '\n';
    for (const auto& c : cells) out += csv_row(c) + '\n';
    return out;
}

}  // namespace betaest::mc
