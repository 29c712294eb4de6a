#include "bvs/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bvs/error_analysis.hpp"
#include "bvs/errors.hpp"
#include "bvs/parallel.hpp"
#include "bvs/regression.hpp"

namespace bvs {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Standard normals from explicit uniforms so the stream is identical on
// every platform (library distributions are not portable).
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    double operator()() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(kTwoPi * u2);
    }

private:
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 gen_;
};

long growth_dimension(long n, double b) {
    return static_cast<long>(std::floor(std::pow(static_cast<double>(n), b) + 1e-9));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, long n, long replicate) {
    std::uint64_t h = splitmix64(master ^ 0x8c61d0ca5e2f1b3dull);
    h = splitmix64(h ^ static_cast<std::uint64_t>(n));
    h = splitmix64(h ^ static_cast<std::uint64_t>(replicate));
    return h;
}

Dataset generate_synthetic(long n, int k, const ModelSubset& true_subset,
                           const Eigen::VectorXd& beta_with_intercept, double sigma,
                           double covariate_corr, std::uint64_t seed) {
    if (n < 1) throw_domain("n must be >= 1");
    if (k < 0 || k > 63) throw_domain("k must lie in [0, 63]");
    if (true_subset.max_index() > k) {
        throw Error(ErrorCode::dimension_mismatch, "true indices exceed k");
    }
    if (beta_with_intercept.size() != true_subset.dimension() + 1) {
        throw Error(ErrorCode::dimension_mismatch,
                    "beta length must be true dimension + 1 (intercept first)");
    }
    if (!(sigma >= 0.0)) throw_domain("sigma must be >= 0");
    if (!(covariate_corr >= 0.0) || !(covariate_corr < 1.0)) {
        throw_domain("covariate correlation must lie in [0, 1)");
    }

    NormalSampler normal(seed);
    Dataset ds;
    ds.y.resize(n);
    ds.x.resize(n, k);
    ds.names.reserve(k);
    for (int c = 0; c < k; ++c) ds.names.push_back("x" + std::to_string(c + 1));

    const double w_factor = std::sqrt(covariate_corr);
    const double w_own = std::sqrt(1.0 - covariate_corr);
    for (long r = 0; r < n; ++r) {
        const double f = normal();
        for (int c = 0; c < k; ++c) ds.x(r, c) = w_factor * f + w_own * normal();
    }

    Eigen::VectorXd mean = Eigen::VectorXd::Constant(n, beta_with_intercept(0));
    {
        int c = 1;
        for (int idx : true_subset.indices()) {
            mean += beta_with_intercept(c++) * ds.x.col(idx - 1);
        }
    }
    for (long r = 0; r < n; ++r) ds.y(r) = mean(r) + sigma * normal();
    return ds;
}

Eigen::VectorXd calibrate_beta_for_delta(const Dataset& ds, const ModelSubset& subset,
                                         double delta, double sigma) {
    if (!(delta > 0.0)) throw_domain("delta must be positive");
    if (!(sigma > 0.0)) throw_domain("sigma must be positive");
    if (subset.empty()) throw_domain("cannot calibrate the null model to a positive delta");
    if (subset.max_index() > ds.k()) {
        throw Error(ErrorCode::dimension_mismatch, "subset index exceeds regressor count");
    }

    Eigen::VectorXd v = Eigen::VectorXd::Zero(ds.n());
    for (int idx : subset.indices()) v += ds.x.col(idx - 1);
    const Eigen::VectorXd centered = v.array() - v.mean();
    const double q = centered.squaredNorm();
    if (q <= 0.0) throw_domain("degenerate design: unit-coefficient mean is constant");

    const double delta_unit = q / (2.0 * sigma * sigma * static_cast<double>(ds.n()));
    const double scale = std::sqrt(delta / delta_unit);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(subset.dimension() + 1);
    beta.tail(subset.dimension()).setConstant(scale);
    return beta;
}

void ExperimentConfig::validate() const {
    if (!(b >= 0.0) || b > 1.0) throw_domain("growth exponent b must lie in [0, 1]");
    if (n_grid.empty()) throw_domain("n grid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 3) throw_domain("grid sample sizes must be >= 3");
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw_domain("n grid must be strictly increasing");
    }
    const ModelSubset true_subset{true_indices};
    if (beta.size() != true_subset.dimension() + 1) {
        throw Error(ErrorCode::dimension_mismatch,
                    "beta length must be true dimension + 1 (intercept first)");
    }
    if (!(sigma > 0.0)) throw_domain("sigma must be positive");
    if (!(covariate_corr >= 0.0) || !(covariate_corr < 1.0)) {
        throw_domain("covariate correlation must lie in [0, 1)");
    }
    if (replications < 1) throw_domain("need at least one replication");

    const long k_min = growth_dimension(n_grid.front(), b);
    if (k_min < true_subset.max_index()) {
        throw_domain("floor(min(n)^b) = " + std::to_string(k_min) +
                     " cannot hold the true model (max index " +
                     std::to_string(true_subset.max_index()) + ")");
    }
    for (long n : n_grid) {
        const long k = growth_dimension(n, b);
        if (k > enumeration_cap) {
            throw Error(ErrorCode::enumeration_cap_exceeded,
                        "k = floor(" + std::to_string(n) + "^" + std::to_string(b) + ") = " +
                            std::to_string(k) + " exceeds the enumeration cap " +
                            std::to_string(enumeration_cap));
        }
    }
}

ExperimentResult run_consistency_experiment(const ExperimentConfig& config) {
    config.validate();
    const ModelSubset true_subset{config.true_indices};
    const std::uint64_t true_mask = true_subset.to_bitmask();
    const std::size_t reps = static_cast<std::size_t>(config.replications);
    const std::size_t total = config.n_grid.size() * reps;

    ExperimentResult result;
    result.replicates.resize(total);

    parallel_for(total, [&](std::size_t item) {
        const std::size_t gi = item / reps;
        const int rep = static_cast<int>(item % reps);
        const long n = config.n_grid[gi];
        const int k = static_cast<int>(growth_dimension(n, config.b));

        const Dataset ds =
            generate_synthetic(n, k, true_subset, config.beta, config.sigma,
                               config.covariate_corr, derive_seed(config.seed, n, rep));
        const PosteriorTable table = enumerate_posterior(ds, config.method, config.prior,
                                                         config.quad, config.enumeration_cap);

        const PosteriorEntry& true_entry = table.entries[true_mask];
        std::uint64_t rank = 1;
        std::uint64_t best = 0;
        for (std::uint64_t m = 0; m < table.entries.size(); ++m) {
            const auto& e = table.entries[m];
            if (e.log_unnormalized > true_entry.log_unnormalized) ++rank;
            if (e.log_unnormalized > table.entries[best].log_unnormalized) best = m;
        }

        ReplicateOutcome out;
        out.n = n;
        out.k = k;
        out.replicate = rep;
        out.true_posterior = true_entry.posterior;
        out.true_rank = rank;
        out.modal_indices = ModelSubset::from_bitmask(table.entries[best].mask, k).indices();
        out.modal_is_true = table.entries[best].mask == true_mask;
        result.replicates[item] = std::move(out);
    });

    result.by_n.reserve(config.n_grid.size());
    for (std::size_t gi = 0; gi < config.n_grid.size(); ++gi) {
        GridSummary s;
        s.n = config.n_grid[gi];
        s.k = static_cast<int>(growth_dimension(s.n, config.b));
        std::vector<double> posteriors(reps);
        double hits = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            const auto& out = result.replicates[gi * reps + r];
            posteriors[r] = out.true_posterior;
            s.mean_true_posterior += out.true_posterior;
            if (out.modal_is_true) hits += 1.0;
        }
        s.mean_true_posterior /= static_cast<double>(reps);
        s.hit_rate = hits / static_cast<double>(reps);
        std::sort(posteriors.begin(), posteriors.end());
        s.median_true_posterior = reps % 2 == 1
                                      ? posteriors[reps / 2]
                                      : 0.5 * (posteriors[reps / 2 - 1] + posteriors[reps / 2]);
        result.by_n.push_back(s);
    }
    return result;
}

McEstimate run_error_mc(Method method, long n, const ModelSubset& j_subset,
                        const Eigen::VectorXd& beta_with_intercept, double sigma, long reps,
                        std::uint64_t seed, const QuadratureSpec& quad) {
    if (reps < 1000) throw_domain("need at least 1000 replications");
    const int j = j_subset.dimension();
    if (j < 1) throw_domain("the decision rule needs a nonempty candidate subset");
    if (n <= j + 2) throw_domain("need n > j + 2");
    if (!(sigma > 0.0)) throw_domain("sigma must be positive");
    if (beta_with_intercept.size() != j + 1) {
        throw Error(ErrorCode::dimension_mismatch,
                    "beta length must be subset dimension + 1 (intercept first)");
    }

    const CriticalRegion region = critical_threshold(method, n, j, quad);

    // Fixed design; only the noise is redrawn per replicate.
    const int k = j_subset.max_index();
    const Dataset base = generate_synthetic(n, k, j_subset,
                                            Eigen::VectorXd::Zero(j + 1), 0.0, 0.0, seed);
    Eigen::MatrixXd a(n, j + 1);
    a.col(0).setOnes();
    {
        int c = 1;
        for (int idx : j_subset.indices()) a.col(c++) = base.x.col(idx - 1);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::MatrixXd thin_q = qr.householderQ() * Eigen::MatrixXd::Identity(n, j + 1);
    const Eigen::VectorXd mean = a * beta_with_intercept;

    std::vector<char> reject(static_cast<std::size_t>(reps), 0);
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
        NormalSampler normal(derive_seed(seed, n, static_cast<long>(r) + 1));
        Eigen::VectorXd y(n);
        for (long i = 0; i < n; ++i) y(i) = mean(i) + sigma * normal();
        const double yty = y.squaredNorm();
        const double ybar = y.mean();
        const double sse0 = yty - static_cast<double>(n) * ybar * ybar;
        const double ssej = yty - (thin_q.transpose() * y).squaredNorm();
        const double b = std::clamp(ssej / sse0, kMinBj0, 1.0);
        reject[r] = b <= region.b_star ? 1 : 0;
    });

    double count = 0.0;
    for (char c : reject) count += c;
    McEstimate est;
    est.estimate = count / static_cast<double>(reps);
    est.mc_se = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(reps));
    return est;
}

}  // namespace bvs
