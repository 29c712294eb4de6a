#pragma once

#include <optional>
#include <vector>

#include "bvs/bayes_factors.hpp"
#include "bvs/dataset.hpp"
#include "bvs/model_priors.hpp"

namespace bvs {

// Inputs for the large-n closed forms of the Bayes factors when sampling
// from a t-dimensional true model: the limiting pseudo-distances from the
// true model to the candidate (delta_tj) and to the null (delta_t0), plus
// the growth regime of the candidate dimension.
struct AsymptoticScenario {
    long n = 0;
    int t = 0;
    int j = 0;
    double delta_tj = 0.0;
    double delta_t0 = 0.0;
    Regime regime = Regime::b_lt_1;
};

// Large-n approximation of log BF(candidate vs null) under the scenario's
// generating model. The b = 1 intrinsic form requires j >= 1.
double log_bf_asymptotic(Method method, const AsymptoticScenario& scenario);

// Whether the limiting pseudo-distance from the true model to the other
// model vanishes: zero iff the true model is nested in the other one
// (all true coefficients assumed nonzero).
enum class DistanceClass { zero, positive };
DistanceClass classify_pseudo_distance(const ModelSubset& true_model, const ModelSubset& other);

// Finite-n partial sum of sum_j #(nesting models of dimension j) *
// (BF_j0 / BF_t0) * (prior_j / prior_t) with k = floor(n^b); the quantity
// whose decay to zero characterizes posterior model consistency. Candidate
// classes that cannot nest the true model are dropped unless
// nonnested_delta supplies a positive pseudo-distance floor for them.
// Returns +inf once the log of the sum exceeds 700.
double consistency_partial_sum(Method method, const ModelPrior& prior, double b, long n, int t,
                               double delta_t0, Regime regime,
                               std::optional<double> nonnested_delta = std::nullopt);

enum class Trend { decreasing_to_zero, not_decreasing };

struct ConsistencyReport {
    double b = 0.0;
    std::vector<long> n_grid;
    std::vector<double> partial_sums;
    Trend verdict_trend = Trend::not_decreasing;
};

// Evaluates the partial sum over an increasing n grid. The verdict requires
// strict decrease over the last quarter of the grid and a final value below
// 1e-3 of the initial one.
ConsistencyReport consistency_report(Method method, const ModelPrior& prior, double b,
                                     const std::vector<long>& n_grid, int t, double delta_t0,
                                     Regime regime,
                                     std::optional<double> nonnested_delta = std::nullopt);

// Inconsistency region boundaries for true dimension growing as t = n/r:
// the mixture factor fails against true models with delta_t0 below
// (1 - 1/r)(e r)^{1/(r-1)} - 1 (r > 1), the intrinsic factor below
// (r-1)/(r+1)^{(r-1)/r} - 1, with 1/log(2) - 1 at r = 1.
double inconsistency_threshold_mix(double r);
double inconsistency_threshold_ip(double r);

}  // namespace bvs
