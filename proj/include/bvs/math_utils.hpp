#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace bvs {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without leaving the log domain.
inline double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// log of the sum of exponentials, max-shifted. Empty input gives -inf.
inline double log_sum_exp(std::span<const double> vals) {
    double hi = kNegInf;
    for (double v : vals) hi = std::max(hi, v);
    if (hi == kNegInf) return kNegInf;
    if (std::isinf(hi)) return hi;
    double acc = 0.0;
    for (double v : vals) acc += std::exp(v - hi);
    return hi + std::log(acc);
}

inline double log_sum_exp(const std::vector<double>& vals) {
    return log_sum_exp(std::span<const double>(vals.data(), vals.size()));
}

// log C(k, j) via log-gamma; valid for k up to well beyond factorial range.
inline double log_binomial(long k, long j) {
    if (j < 0 || j > k) return kNegInf;
    return std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(j) + 1.0) -
           std::lgamma(static_cast<double>(k - j) + 1.0);
}

// log(1 + exp(t)), stable for large |t|.
inline double log1p_exp(double t) {
    if (t > 36.0) return t + std::exp(-t);
    if (t < -36.0) return std::exp(t);
    return std::log1p(std::exp(t));
}

}  // namespace bvs
