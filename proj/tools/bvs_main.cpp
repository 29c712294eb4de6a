#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bvs/asymptotics.hpp"
#include "bvs/bayes_factors.hpp"
#include "bvs/dataset.hpp"
#include "bvs/error_analysis.hpp"
#include "bvs/errors.hpp"
#include "bvs/posterior.hpp"
#include "bvs/regression.hpp"
#include "bvs/simulation.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// "a:b:c" (inclusive, step c) or a comma list.
template <class T>
std::vector<T> parse_grid(const std::string& text) {
    std::vector<T> out;
    if (text.find(':') != std::string::npos) {
        double start = 0, stop = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0) {
            bvs::throw_domain("bad grid '" + text + "' (expected start:stop:step)");
        }
        for (double v = start; v <= stop + 1e-9 * step; v += step) {
            out.push_back(static_cast<T>(v));
        }
    } else {
        std::istringstream in(text);
        std::string token;
        while (std::getline(in, token, ',')) {
            if (token.empty()) continue;
            out.push_back(static_cast<T>(std::stod(token)));
        }
    }
    if (out.empty()) bvs::throw_domain("empty grid '" + text + "'");
    return out;
}

std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        out.push_back(std::stod(token));
    }
    return out;
}

std::string join_indices(const std::vector<int>& idx) {
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(idx[i]);
    }
    return out;
}

class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw bvs::Error(bvs::ErrorCode::io_error, "cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

struct CommonOpts {
    std::string out;
    std::string format = "csv";
    double quad_tol = 1e-10;
    int quad_max_refine = 20;

    bvs::QuadratureSpec quad() const {
        bvs::QuadratureSpec spec;
        spec.rel_tol = quad_tol;
        spec.max_refinements = quad_max_refine;
        return spec;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--out", opts.out, "output path (default stdout)");
    cmd->add_option("--format", opts.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--quad-tol", opts.quad_tol, "quadrature relative tolerance");
    cmd->add_option("--quad-max-refine", opts.quad_max_refine, "quadrature refinement budget");
}

void emit_rows(const CommonOpts& opts, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
    OutputSink sink(opts.out);
    auto& os = sink.stream();
    if (opts.format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& row : rows) {
            ordered_json obj;
            for (std::size_t c = 0; c < columns.size(); ++c) {
                if (row[c].empty()) {
                    obj[columns[c]] = nullptr;
                } else {
                    obj[columns[c]] = row[c];
                }
            }
            arr.push_back(std::move(obj));
        }
        os << arr.dump(2) << '\n';
        return;
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
        os << (c ? "," : "") << columns[c];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << (c ? "," : "") << row[c];
        }
        os << '\n';
    }
}

int run_bf(const std::string& data_path, const std::string& subset_text,
           const std::string& method_text, const std::string& approx, const CommonOpts& opts) {
    const bvs::Dataset ds = bvs::load_dataset(data_path);
    const bvs::ModelSubset subset = bvs::ModelSubset::parse(subset_text, ds.k());
    const bvs::Method method = bvs::parse_method(method_text);
    const bvs::FitSummary fit = bvs::compute_bj0(ds, subset);

    bvs::LogBayesFactor lbf{};
    if (approx.empty()) {
        lbf = bvs::log_bf(method, ds.n(), subset.dimension(), fit.b_j0, opts.quad());
    } else {
        const bvs::Regime regime = approx == "blt1" ? bvs::Regime::b_lt_1 : bvs::Regime::b_eq_1;
        lbf = bvs::log_bf_approx(method, regime, ds.n(), subset.dimension(), fit.b_j0);
    }

    const bool exact_bf = std::abs(lbf.log_value) < 700.0;
    emit_rows(opts, {"n", "j", "b_j0", "log_bf", "bf", "method", "mode"},
              {{std::to_string(ds.n()), std::to_string(subset.dimension()), fmt17(fit.b_j0),
                fmt17(lbf.log_value), exact_bf ? fmt17(std::exp(lbf.log_value)) : std::string{},
                bvs::to_string(method), bvs::to_string(lbf.mode)}});
    return 0;
}

int run_posterior(const std::string& data_path, const std::string& method_text,
                  const std::string& prior_text, std::uint64_t top_m, int cap,
                  const CommonOpts& opts) {
    const bvs::Dataset ds = bvs::load_dataset(data_path);
    const bvs::Method method = bvs::parse_method(method_text);
    const bvs::ModelPrior prior = bvs::ModelPrior::parse(prior_text);
    const bvs::PosteriorTable table = bvs::enumerate_posterior(ds, method, prior, opts.quad(), cap);

    OutputSink sink(opts.out);
    auto& os = sink.stream();
    if (opts.format == "json") {
        os << bvs::posterior_to_json(table).dump(2) << '\n';
        return 0;
    }

    const auto ranked = bvs::top_models(table, top_m == 0 ? table.entries.size() : top_m);
    os << "indices,log_unnormalized,posterior\n";
    for (const auto& [subset, posterior] : ranked) {
        const auto& e = table.entries[subset.to_bitmask()];
        os << join_indices(subset.indices()) << ',' << fmt17(e.log_unnormalized) << ','
           << fmt17(posterior) << '\n';
    }
    os << "\nregressor,inclusion_probability\n";
    const auto incl = bvs::inclusion_probabilities(table);
    for (int i = 0; i < table.k; ++i) {
        os << (i + 1) << ',' << fmt17(incl[i]) << '\n';
    }
    return 0;
}

int run_errors(const std::string& method_text, long n_min, long n_max, long n_step,
               std::optional<int> j_ratio, std::optional<int> j_fixed, double delta,
               const CommonOpts& opts) {
    const bvs::Method method = bvs::parse_method(method_text);
    if (n_min < 3 || n_max < n_min || n_step < 1) bvs::throw_domain("bad n grid");
    if (j_ratio.has_value() == j_fixed.has_value()) {
        bvs::throw_domain("exactly one of --j-ratio and --j-fixed is required");
    }
    std::vector<long> n_grid;
    for (long n = n_min; n <= n_max; n += n_step) n_grid.push_back(n);

    auto j_rule = [&](long n) -> int {
        if (j_fixed) return *j_fixed;
        return static_cast<int>((n + *j_ratio - 1) / *j_ratio);  // ceil(n / ratio)
    };
    const auto points = bvs::error_curves(method, n_grid, j_rule, delta, opts.quad());

    std::vector<std::vector<std::string>> rows;
    rows.reserve(points.size());
    for (const auto& p : points) {
        rows.push_back({std::to_string(p.n), std::to_string(p.j), bvs::to_string(p.method),
                        fmt17(p.b_star), fmt17(p.type1), fmt17(p.power), fmt17(p.delta)});
    }
    emit_rows(opts, {"n", "j", "method", "b_star", "type1", "power", "delta"}, rows);
    return 0;
}

int run_consistency(double b, const std::string& n_grid_text, const std::string& true_text,
                    const std::string& beta_text, double sigma, double corr, int reps,
                    std::uint64_t seed, const std::string& method_text,
                    const std::string& prior_text, int cap, const CommonOpts& opts) {
    bvs::ExperimentConfig config;
    config.b = b;
    config.n_grid = parse_grid<long>(n_grid_text);
    for (double v : parse_reals(true_text)) config.true_indices.push_back(static_cast<int>(v));
    const auto beta = parse_reals(beta_text);
    config.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<long>(beta.size()));
    config.sigma = sigma;
    config.covariate_corr = corr;
    config.replications = reps;
    config.seed = seed;
    config.method = bvs::parse_method(method_text);
    config.prior = bvs::ModelPrior::parse(prior_text);
    config.enumeration_cap = cap;
    config.quad = opts.quad();

    const bvs::ExperimentResult result = bvs::run_consistency_experiment(config);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(result.replicates.size());
    for (const auto& r : result.replicates) {
        rows.push_back({std::to_string(r.n), std::to_string(r.k), std::to_string(r.replicate),
                        fmt17(r.true_posterior), r.modal_is_true ? "1" : "0",
                        join_indices(r.modal_indices)});
    }
    emit_rows(opts, {"n", "k", "replicate", "true_posterior", "modal_is_true", "modal_indices"},
              rows);
    return 0;
}

int run_thresholds(const std::string& r_grid_text, const CommonOpts& opts) {
    const auto r_grid = parse_grid<double>(r_grid_text);
    for (double r : r_grid) {
        if (r < 1.0) bvs::throw_domain("threshold arguments require r >= 1");
    }
    std::vector<std::vector<std::string>> rows;
    rows.reserve(r_grid.size());
    for (double r : r_grid) {
        const std::string mix =
            r > 1.0 ? fmt17(bvs::inconsistency_threshold_mix(r)) : std::string{};
        rows.push_back({fmt17(r), mix, fmt17(bvs::inconsistency_threshold_ip(r))});
    }
    emit_rows(opts, {"r", "delta_mix", "delta_ip"}, rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian variable selection for normal linear regression"};
    app.require_subcommand(1);

    // bf
    auto* bf_cmd = app.add_subcommand("bf", "Bayes factor of one subset model against the null");
    std::string bf_data, bf_subset, bf_method, bf_approx;
    CommonOpts bf_opts;
    bf_cmd->add_option("--data", bf_data, "CSV dataset")->required();
    bf_cmd->add_option("--subset", bf_subset, "comma-separated regressor indices (empty = null model)");
    bf_cmd->add_option("--method", bf_method, "gn|mix|ip|schwarz")->required();
    bf_cmd->add_option("--approx", bf_approx, "closed-form approximation regime")
        ->check(CLI::IsMember({"blt1", "beq1"}));
    add_common(bf_cmd, bf_opts);

    // posterior
    auto* post_cmd = app.add_subcommand("posterior", "exact posterior over all candidate models");
    std::string post_data, post_method, post_prior = "hu";
    std::uint64_t post_top = 0;
    int post_cap = bvs::kDefaultEnumerationCap;
    CommonOpts post_opts;
    post_cmd->add_option("--data", post_data, "CSV dataset")->required();
    post_cmd->add_option("--method", post_method, "gn|mix|ip|schwarz")->required();
    post_cmd->add_option("--prior", post_prior, "bernoulli:<theta>|hu|uniform");
    post_cmd->add_option("--top", post_top, "emit only the top m models (csv output)");
    post_cmd->add_option("--cap", post_cap, "enumeration cap on k");
    add_common(post_cmd, post_opts);

    // errors
    auto* err_cmd = app.add_subcommand("errors", "exact Type I error and power curves");
    std::string err_method;
    long err_n_min = 15, err_n_max = 99, err_n_step = 3;
    std::optional<int> err_j_ratio, err_j_fixed;
    double err_delta = 1.0;
    CommonOpts err_opts;
    err_cmd->add_option("--method", err_method, "gn|mix|ip|schwarz")->required();
    err_cmd->add_option("--n-min", err_n_min, "smallest n");
    err_cmd->add_option("--n-max", err_n_max, "largest n");
    err_cmd->add_option("--n-step", err_n_step, "n increment");
    err_cmd->add_option("--j-ratio", err_j_ratio, "j = ceil(n / ratio)");
    err_cmd->add_option("--j-fixed", err_j_fixed, "fixed model dimension");
    err_cmd->add_option("--delta", err_delta, "pseudo-distance of the alternative");
    add_common(err_cmd, err_opts);

    // consistency
    auto* cons_cmd = app.add_subcommand("consistency", "growing-k posterior consistency study");
    double cons_b = 0.0, cons_sigma = 1.0, cons_corr = 0.0;
    std::string cons_grid = "50:400:50", cons_true, cons_beta, cons_method = "ip",
                cons_prior = "hu";
    int cons_reps = 50, cons_cap = bvs::kDefaultEnumerationCap;
    std::uint64_t cons_seed = 0;
    CommonOpts cons_opts;
    cons_cmd->add_option("--b", cons_b, "growth exponent: k = floor(n^b)")->required();
    cons_cmd->add_option("--n-grid", cons_grid, "start:stop:step or comma list");
    cons_cmd->add_option("--true", cons_true, "true regressor indices, e.g. 1,2")->required();
    cons_cmd->add_option("--beta", cons_beta, "coefficients, intercept first")->required();
    cons_cmd->add_option("--sigma", cons_sigma, "noise standard deviation");
    cons_cmd->add_option("--corr", cons_corr, "pairwise covariate correlation");
    cons_cmd->add_option("--reps", cons_reps, "replicates per grid point");
    cons_cmd->add_option("--seed", cons_seed, "master seed");
    cons_cmd->add_option("--method", cons_method, "gn|mix|ip|schwarz");
    cons_cmd->add_option("--prior", cons_prior, "bernoulli:<theta>|hu|uniform");
    cons_cmd->add_option("--cap", cons_cap, "enumeration cap on k");
    add_common(cons_cmd, cons_opts);

    // thresholds
    auto* thr_cmd = app.add_subcommand("thresholds", "inconsistency-region boundaries vs r = n/t");
    std::string thr_grid = "1:10:0.5";
    CommonOpts thr_opts;
    thr_cmd->add_option("--r-grid", thr_grid, "start:stop:step or comma list");
    add_common(thr_cmd, thr_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (bf_cmd->parsed()) return run_bf(bf_data, bf_subset, bf_method, bf_approx, bf_opts);
        if (post_cmd->parsed()) {
            return run_posterior(post_data, post_method, post_prior, post_top, post_cap, post_opts);
        }
        if (err_cmd->parsed()) {
            return run_errors(err_method, err_n_min, err_n_max, err_n_step, err_j_ratio,
                              err_j_fixed, err_delta, err_opts);
        }
        if (cons_cmd->parsed()) {
            return run_consistency(cons_b, cons_grid, cons_true, cons_beta, cons_sigma, cons_corr,
                                   cons_reps, cons_seed, cons_method, cons_prior, cons_cap,
                                   cons_opts);
        }
        if (thr_cmd->parsed()) return run_thresholds(thr_grid, thr_opts);
    } catch (const bvs::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (bvs::is_numerical_error(e.code())) return kExitNumerical;
        if (bvs::is_data_error(e.code())) return kExitData;
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
