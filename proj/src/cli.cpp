#include "betaest/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "betaest/asymptotics.hpp"
#include "betaest/betadist.hpp"
#include "betaest/errors.hpp"
#include "betaest/estimators.hpp"
#include "betaest/format.hpp"
#include "betaest/montecarlo.hpp"

namespace betaest::cli {

namespace {

/// Input problem that maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

std::vector<Method> parse_methods(const std::string& text) {
    std::vector<Method> methods;
    for (const auto& name : split(text, ',')) {
        const auto m = parse_method(name);
        if (!m) throw UsageError("unknown method '" + name + "' (expected MOM, MLE, SAM or RSA)");
        methods.push_back(*m);
    }
    if (methods.empty()) throw UsageError("empty method list");
    return methods;
}

std::vector<double> parse_positive_list(const std::string& flag, const std::string& text) {
    std::vector<double> v;
    try {
        v = parse_real_list(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(flag + ": " + e.what());
    }
    for (double x : v)
        if (!(x > 0.0) || !std::isfinite(x)) throw UsageError(flag + ": values must be positive");
    return v;
}

std::vector<double> read_sample_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open input file '" + path + "'");
    std::vector<double> values;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto v = parse_double(t);
        if (!v) throw UsageError(path + ":" + std::to_string(lineno) + ": not a number: '" + t + "'");
        if (!(*v > 0.0 && *v < 1.0))
            throw UsageError(path + ":" + std::to_string(lineno) + ": value " + t +
                             " is outside (0, 1)");
        values.push_back(*v);
    }
    if (values.empty()) throw UsageError("no observations in '" + path + "'");
    return values;
}

void emit(const std::string& text, const std::string& output_path, std::ostream& out) {
    if (output_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(output_path, std::ios::binary);
    if (!f) throw UsageError("cannot open output file '" + output_path + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + output_path + "'");
}

struct FitArgs {
    std::string input;
    std::string methods = "MOM,MLE,SAM,RSA";
    std::string output;
};

std::string cmd_fit(const FitArgs& a) {
    const Sample s(read_sample_file(a.input));
    const SufficientStats st = suff_stats(s);
    std::string csv = "method,alpha_hat,beta_hat,se_alpha,se_beta,converged,iterations\n";
    for (Method m : parse_methods(a.methods)) {
        const EstimateResult r = fit(m, st);
        std::pair<double, double> se{NAN, NAN};
        try {
            se = standard_errors(r.params, m, s.size());
        } catch (const SingularMatrixError&) {
        }
        csv += std::string(to_string(m)) + ',' + format_real(r.params.alpha()) + ',' +
               format_real(r.params.beta()) + ',' + format_real(se.first) + ',' +
               format_real(se.second) + ',' + (r.converged ? "true" : "false") + ',' +
               std::to_string(r.iterations) + '\n';
    }
    return csv;
}

struct SimulateArgs {
    std::string preset;
    std::string alpha_grid;
    std::string beta_grid;
    std::string n_grid;
    std::optional<std::size_t> reps;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string methods = "MOM,MLE,SAM,RSA";
    std::string output;
};

mc::SimConfig preset_config(const std::string& name) {
    mc::SimConfig cfg;
    auto alpha_sweep = [] { return parse_real_list("0.1:3:0.1"); };
    if (name == "paper-fig2" || name == "paper-fig3" || name == "paper-fig4") {
        cfg.alpha_grid = alpha_sweep();
        cfg.beta_grid = {0.5, 1.0, 3.0};
        cfg.n_grid = {name == "paper-fig2" ? 5u : name == "paper-fig3" ? 10u : 20u};
        cfg.reps = 10000;
    } else if (name == "ci") {
        cfg.alpha_grid = {0.5, 1.0, 2.0, 3.0};
        cfg.beta_grid = {0.5, 1.0, 3.0};
        cfg.n_grid = {5, 20};
        cfg.reps = 1000;
    } else {
        throw UsageError("unknown preset '" + name + "' (expected paper-fig2, paper-fig3, paper-fig4 or ci)");
    }
    return cfg;
}

std::string cmd_simulate(const SimulateArgs& a) {
    mc::SimConfig cfg = a.preset.empty() ? mc::SimConfig{} : preset_config(a.preset);
    if (!a.alpha_grid.empty()) cfg.alpha_grid = parse_positive_list("--alpha-grid", a.alpha_grid);
    if (!a.beta_grid.empty()) cfg.beta_grid = parse_positive_list("--beta-grid", a.beta_grid);
    if (!a.n_grid.empty()) {
        cfg.n_grid.clear();
        for (double v : parse_positive_list("--n-grid", a.n_grid)) {
            if (v != std::floor(v) || v < 1.0) throw UsageError("--n-grid: sample sizes must be positive integers");
            cfg.n_grid.push_back(static_cast<std::size_t>(v));
        }
    }
    if (a.reps) cfg.reps = *a.reps;
    if (cfg.reps == 0) throw UsageError("--reps must be positive");
    if (cfg.alpha_grid.empty() || cfg.beta_grid.empty() || cfg.n_grid.empty())
        throw UsageError("simulate needs --alpha-grid, --beta-grid and --n-grid (or --preset)");
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    cfg.methods = parse_methods(a.methods);
    return mc::to_csv(mc::run_grid(cfg));
}

struct AvarArgs {
    std::string alpha_range = "0.1:3:0.05";
    std::string betas = "0.5,1,3";
    std::string methods = "MLE,MOM,SAM,RSA";
    std::string output;
};

std::string cmd_avar(const AvarArgs& a) {
    const auto alphas = parse_positive_list("--alpha-range", a.alpha_range);
    const auto betas = parse_positive_list("--betas", a.betas);
    const auto methods = parse_methods(a.methods);
    std::string csv = "alpha,beta,method,avar_alpha,avar_beta,avar_cross\n";
    for (double al : alphas) {
        for (double be : betas) {
            const BetaParams p(al, be);
            for (Method m : methods) {
                const Cov2 c = asymptotic_cov(m, p);
                csv += format_real(al) + ',' + format_real(be) + ',' + std::string(to_string(m)) +
                       ',' + format_real(c.v_aa) + ',' + format_real(c.v_bb) + ',' +
                       format_real(c.v_ab) + '\n';
            }
        }
    }
    return csv;
}

struct MomentsArgs {
    double alpha = 0.0;
    double beta = 0.0;
    std::string output;
};

std::string cmd_moments(const MomentsArgs& a) {
    if (!(a.alpha > 0.0) || !(a.beta > 0.0) || !std::isfinite(a.alpha) || !std::isfinite(a.beta))
        throw UsageError("--alpha and --beta must be positive and finite");
    const BetaParams p(a.alpha, a.beta);
    std::string csv = "key,closed_form,quadrature,abs_diff\n";
    for (MomentKey k : all_moment_keys()) {
        const double exact = exact_moment(p, k);
        const double quad = quad_moment(p, k);
        csv += std::string(to_string(k)) + ',' + format_real(exact) + ',' + format_real(quad) +
               ',' + format_real(std::abs(exact - quad)) + '\n';
    }
    return csv;
}

std::string one_line(std::string msg) {
    for (char& c : msg)
        if (c == '\n' || c == '\r') c = ' ';
    return msg;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty list");
    auto number = [](const std::string& s) {
        const auto v = parse_double(s);
        if (!v || !std::isfinite(*v)) throw std::invalid_argument("not a number: '" + s + "'");
        return *v;
    };
    if (t.find(':') != std::string::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 3) throw std::invalid_argument("range must be start:stop:step");
        const double start = number(parts[0]);
        const double stop = number(parts[1]);
        const double step = number(parts[2]);
        if (!(step > 0.0) || stop < start) throw std::invalid_argument("range needs step > 0 and stop >= start");
        const double span = (stop - start) / step;
        if (span > 1e7) throw std::invalid_argument("range has too many points");
        const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
        std::vector<double> v;
        v.reserve(count);
        // Snap to 12 decimals so 0.1 + 2 * 0.1 lands on the double nearest 0.3.
        for (std::size_t i = 0; i < count; ++i)
            v.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
        return v;
    }
    std::vector<double> v;
    for (const auto& part : split(t, ',')) v.push_back(number(part));
    return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Point estimation for the beta distribution", "betaest"};
    app.require_subcommand(1);

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a sample (one value per line) with each method");
    fit_cmd->add_option("input", fit_args.input, "Sample file; lines starting with # are ignored")->required();
    fit_cmd->add_option("--methods", fit_args.methods, "Comma list of MOM, MLE, SAM, RSA");
    fit_cmd->add_option("--output", fit_args.output, "Write CSV here instead of stdout");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo bias and rMSE over a parameter grid");
    sim_cmd->add_option("--preset", sim_args.preset, "paper-fig2, paper-fig3, paper-fig4 or ci");
    sim_cmd->add_option("--alpha-grid,--alpha", sim_args.alpha_grid, "Comma list or start:stop:step");
    sim_cmd->add_option("--beta-grid,--beta", sim_args.beta_grid, "Comma list or start:stop:step");
    sim_cmd->add_option("--n-grid,--n", sim_args.n_grid, "Sample sizes, comma list or start:stop:step");
    sim_cmd->add_option("--reps", sim_args.reps, "Replications per cell");
    sim_cmd->add_option("--seed", sim_args.seed, "Base seed");
    sim_cmd->add_option("--threads", sim_args.threads, "Worker threads (0: all cores)");
    sim_cmd->add_option("--methods", sim_args.methods, "Comma list of MOM, MLE, SAM, RSA");
    sim_cmd->add_option("--output", sim_args.output, "Write CSV here instead of stdout");

    AvarArgs avar_args;
    auto* avar_cmd = app.add_subcommand("avar", "Asymptotic variances of each estimator");
    avar_cmd->add_option("--alpha-range", avar_args.alpha_range, "start:stop:step or comma list");
    avar_cmd->add_option("--betas", avar_args.betas, "Comma list");
    avar_cmd->add_option("--methods", avar_args.methods, "Comma list of MOM, MLE, SAM, RSA");
    avar_cmd->add_option("--output", avar_args.output, "Write CSV here instead of stdout");

    MomentsArgs mom_args;
    auto* mom_cmd = app.add_subcommand("moments", "Closed-form moments next to quadrature");
    mom_cmd->add_option("--alpha", mom_args.alpha)->required();
    mom_cmd->add_option("--beta", mom_args.beta)->required();
    mom_cmd->add_option("--output", mom_args.output, "Write CSV here instead of stdout");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    if (args.empty()) argv.push_back("betaest");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "betaest: " << one_line(e.what()) << '\n';
        return kExitUsage;
    }

    try {
        if (fit_cmd->parsed()) emit(cmd_fit(fit_args), fit_args.output, out);
        else if (sim_cmd->parsed()) emit(cmd_simulate(sim_args), sim_args.output, out);
        else if (avar_cmd->parsed()) emit(cmd_avar(avar_args), avar_args.output, out);
        else if (mom_cmd->parsed()) emit(cmd_moments(mom_args), mom_args.output, out);
        return kExitOk;
    } catch (const UsageError& e) {
        err << "betaest: " << one_line(e.what()) << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "betaest: " << one_line(e.what()) << '\n';
        return kExitUsage;
    } catch (const DegenerateSampleError& e) {
        err << "betaest: " << one_line(e.what()) << '\n';
        return kExitDegenerate;
    } catch (const std::exception& e) {
        err << "betaest: " << one_line(e.what()) << '\n';
        return kExitFailure;
    }
}

}  // namespace betaest::cli
