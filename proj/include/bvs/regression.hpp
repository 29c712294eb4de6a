#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "bvs/dataset.hpp"

namespace bvs {

// Smallest admissible residual-sum ratio; perfect fits clamp here so that
// downstream log-domain work stays finite.
inline constexpr double kMinBj0 = 1e-300;

// Relative pivot threshold for rank rejection: a column whose residual norm
// against the preceding columns falls below kRankTolerance times the largest
// column norm of the augmented design is treated as collinear.
inline constexpr double kRankTolerance = 1e-10;

struct FitSummary {
    double sse;    // residual sum of squares of the submodel
    double sse0;   // residual sum of squares of the intercept-only model
    double b_j0;   // sse / sse0, clamped to [kMinBj0, 1]
};

// y'(I - H_j)y for the augmented design [1 | X_subset], computed by
// Householder QR with column pivoting. Never forms H_j.
double residual_sum(const Dataset& ds, const ModelSubset& subset);

FitSummary compute_bj0(const Dataset& ds, const ModelSubset& subset);

// Generating model: subset, coefficients (intercept first, length dim+1),
// noise standard deviation.
struct TrueModel {
    ModelSubset subset;
    Eigen::VectorXd beta;
    double sigma = 1.0;
};

// Scaled quadratic form measuring how poorly the span of [1 | X_other]
// covers the mean surface of the true model:
//   delta_n = beta' X_t'(I - H_other)X_t beta / (2 sigma^2 n),
// with X_t the true model's augmented design. Zero iff the true model is
// nested in the other one (given all true coefficients nonzero).
double pseudo_distance(const Dataset& ds, const TrueModel& true_model,
                       const ModelSubset& other);

// Population form via the Schur complement of the covariate covariance:
//   delta* = beta' (S_tt - S_tj S_jj^-1 S_jt) beta / (2 sigma^2).
// beta here excludes the intercept (length = true dimension).
double pseudo_distance_population(const Eigen::MatrixXd& covariate_cov,
                                  const ModelSubset& true_subset,
                                  const Eigen::VectorXd& beta,
                                  double sigma,
                                  const ModelSubset& other);

// All-subsets residual sums from one orthogonal factorization of the full
// augmented design: the Gram matrix is assembled as R'R and each subset's
// residual sum comes from a Cholesky solve on the corresponding submatrix.
// Subset masks use bit i for regressor i+1. Thread-safe after construction.
class SubsetSseEngine {
public:
    explicit SubsetSseEngine(const Dataset& ds);

    long n() const { return n_; }
    int k() const { return k_; }
    double sse0() const { return sse0_; }

    double sse(std::uint64_t mask) const;
    FitSummary fit(std::uint64_t mask) const;

private:
    long n_ = 0;
    int k_ = 0;
    double yty_ = 0.0;
    double sse0_ = 0.0;
    double max_col_norm_ = 0.0;
    Eigen::MatrixXd gram_;  // (k+1) x (k+1), row/col 0 = intercept
    Eigen::VectorXd xty_;   // (k+1)
};

}  // namespace bvs
