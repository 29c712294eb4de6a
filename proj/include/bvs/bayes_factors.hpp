#pragma once

#include <string>

#include "bvs/quadrature.hpp"

namespace bvs {

enum class Method { gn, mix, ip, schwarz };

// Growth regime of the model dimension used by the closed-form
// approximations: b_lt_1 for k = O(n^b) with b < 1, b_eq_1 for b = 1.
enum class Regime { b_lt_1, b_eq_1 };

enum class BfMode { exact, approx_b_lt_1, approx_b_eq_1 };

std::string to_string(Method m);
Method parse_method(const std::string& text);
std::string to_string(BfMode mode);

// Natural log of the Bayes factor of a j-dimensional model against the
// intercept-only null, tagged with how it was produced.
struct LogBayesFactor {
    double log_value;
    Method method;
    BfMode mode;
    long n;
    int j;
    double b_j0;
};

// g-prior with g = n:
//   log BF = ((n-j-1)/2) log(1+n) - ((n-1)/2) log(1+n b).
LogBayesFactor log_bf_gn(long n, int j, double b_j0);

// Mixture of g-priors with InverseGamma(1/2, n/2) mixing: the integral over
// g is evaluated in the log domain on a scale-adapted bounded transform of
// g in (0, inf).
LogBayesFactor log_bf_mix(long n, int j, double b_j0, const QuadratureSpec& quad = {});

// Intrinsic priors: the angular integral over (0, pi/2) is evaluated in the
// log domain with a scale-adapted reparameterization.
LogBayesFactor log_bf_ip(long n, int j, double b_j0, const QuadratureSpec& quad = {});

// Schwarz form: log BF = -(j/2) log n - (n/2) log b.
LogBayesFactor log_bf_schwarz(long n, int j, double b_j0);

// Closed-form large-n approximations of the three exact factors, one pair
// of formulas per method for the two growth regimes.
LogBayesFactor log_bf_approx(Method method, Regime regime, long n, int j, double b_j0);

// Dispatch on method; schwarz needs no quadrature.
LogBayesFactor log_bf(Method method, long n, int j, double b_j0,
                      const QuadratureSpec& quad = {});

}  // namespace bvs
