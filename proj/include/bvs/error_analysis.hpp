#pragma once

#include <functional>
#include <vector>

#include "bvs/bayes_factors.hpp"
#include "bvs/quadrature.hpp"

namespace bvs {

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation. Under the null model the residual-sum ratio of a
// j-dimensional model follows Beta((n-j-1)/2, j/2).
double incomplete_beta_cdf(double x, double a, double b);

// CDF of V / (V + W) with V ~ chi2(2a) central and W ~ chi2(2b, lambda)
// noncentral: the Poisson mixture sum_m pois(m; lambda/2) I_x(a, b + m),
// truncated once the remaining Poisson mass falls below 1e-12. lambda = 0
// reduces exactly to the central case.
double noncentral_beta_cdf(double x, double a, double b, double lambda);

// Decision threshold of the equal-prior-odds rule: reject the null iff
// b_j0 <= b_star, where b_star solves log BF(n, j, b) = 0. The log BF is
// strictly decreasing in b, so the root is found by bisection (absolute
// tolerance 1e-12 in b).
struct CriticalRegion {
    Method method;
    long n = 0;
    int j = 0;
    double b_star = 0.0;
    bool always_rejects = false;  // log BF >= 0 over the whole interval
    bool never_rejects = false;   // log BF < 0 over the whole interval
};

CriticalRegion critical_threshold(Method method, long n, int j, const QuadratureSpec& quad = {});

struct ErrorCurvePoint {
    long n = 0;
    int j = 0;
    Method method;
    double b_star = 0.0;
    double type1 = 0.0;
    double power = 0.0;
    double delta = 0.0;
};

// Exact frequentist profile of the decision rule along an n grid:
// type1 from the central beta at b_star, power from the noncentral beta
// with lambda = 2 n delta.
std::vector<ErrorCurvePoint> error_curves(Method method, const std::vector<long>& n_grid,
                                          const std::function<int(long)>& j_rule, double delta,
                                          const QuadratureSpec& quad = {});

}  // namespace bvs
