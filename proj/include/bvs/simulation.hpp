#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "bvs/bayes_factors.hpp"
#include "bvs/dataset.hpp"
#include "bvs/model_priors.hpp"
#include "bvs/posterior.hpp"

namespace bvs {

// Replicate seed derived from (master seed, n, replicate index); the
// splittable scheme keeps parallel runs byte-identical to sequential ones.
std::uint64_t derive_seed(std::uint64_t master, long n, long replicate);

// Synthetic data for the sampling model y = beta_0 + sum beta_i x_i + eps:
// standard-normal covariates with pairwise correlation covariate_corr via a
// single-factor construction, true regressors at the given indices, noise
// sd sigma. Fully determined by the seed.
Dataset generate_synthetic(long n, int k, const ModelSubset& true_subset,
                           const Eigen::VectorXd& beta_with_intercept, double sigma,
                           double covariate_corr, std::uint64_t seed);

// Coefficients (intercept first, zero) on the subset's regressors scaled so
// that the empirical pseudo-distance of the subset model to the null equals
// delta on this design.
Eigen::VectorXd calibrate_beta_for_delta(const Dataset& ds, const ModelSubset& subset,
                                         double delta, double sigma);

struct ExperimentConfig {
    double b = 0.0;                  // growth exponent: k = floor(n^b)
    std::vector<long> n_grid;
    std::vector<int> true_indices;   // 1-based, strictly increasing
    Eigen::VectorXd beta;            // intercept first, length = true dim + 1
    double sigma = 1.0;
    double covariate_corr = 0.0;
    int replications = 1;
    std::uint64_t seed = 0;
    Method method = Method::ip;
    ModelPrior prior = ModelPrior::hierarchical_uniform();
    int enumeration_cap = kDefaultEnumerationCap;
    QuadratureSpec quad = {};

    void validate() const;
};

struct ReplicateOutcome {
    long n = 0;
    int k = 0;
    int replicate = 0;
    double true_posterior = 0.0;
    std::uint64_t true_rank = 0;  // 1 = modal
    std::vector<int> modal_indices;
    bool modal_is_true = false;
};

struct GridSummary {
    long n = 0;
    int k = 0;
    double mean_true_posterior = 0.0;
    double median_true_posterior = 0.0;
    double hit_rate = 0.0;  // fraction of replicates whose modal model is the true one
};

struct ExperimentResult {
    std::vector<ReplicateOutcome> replicates;  // ordered by (n, replicate)
    std::vector<GridSummary> by_n;
};

// Growing-k selection study: at each n the candidate pool has
// k = floor(n^b) regressors (the true ones among them), each replicate
// draws fresh data and enumerates the exact posterior.
ExperimentResult run_consistency_experiment(const ExperimentConfig& config);

struct McEstimate {
    double estimate = 0.0;
    double mc_se = 0.0;
};

// Empirical rejection frequency of the b_star decision rule on data from
// the given generator (fixed design drawn from the seed, fresh noise per
// replicate), with its binomial standard error. Zero coefficients give a
// Type I estimate; delta-calibrated ones give power.
McEstimate run_error_mc(Method method, long n, const ModelSubset& j_subset,
                        const Eigen::VectorXd& beta_with_intercept, double sigma, long reps,
                        std::uint64_t seed, const QuadratureSpec& quad = {});

}  // namespace bvs
