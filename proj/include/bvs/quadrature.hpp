#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bvs/errors.hpp"
#include "bvs/math_utils.hpp"

namespace bvs {

struct QuadratureSpec {
    double rel_tol = 1e-10;    // tolerance on the log of the integral
    int max_refinements = 20;  // panel-doubling budget
    int initial_panels = 64;

    void validate() const {
        if (!(rel_tol > 0.0)) throw_domain("rel_tol must be positive");
        if (max_refinements < 1) throw_domain("max_refinements must be >= 1");
        if (initial_panels < 1) throw_domain("initial_panels must be >= 1");
    }
};

namespace detail {

// 8-point Gauss-Legendre nodes/weights on (-1, 1).
inline constexpr double kGlNode[4] = {
    0.18343464249564980494, 0.52553240991632898582,
    0.79666647741362673959, 0.96028985649753623168};
inline constexpr double kGlWeight[4] = {
    0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

// log of sum_i w_i * exp(log_f(x_i)) over a composite 8-point rule with
// `panels` equal panels on (a, b). Nodes are strictly interior.
template <class F>
double log_panel_sum(F&& log_f, double a, double b, std::int64_t panels) {
    const double h = (b - a) / static_cast<double>(panels);
    const double half = 0.5 * h;

    double hi = kNegInf;
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(panels) * 8);
    for (std::int64_t p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        for (int q = 0; q < 4; ++q) {
            const double dx = half * kGlNode[q];
            const double lw = std::log(kGlWeight[q] * half);
            const double v1 = log_f(mid - dx) + lw;
            const double v2 = log_f(mid + dx) + lw;
            vals.push_back(v1);
            vals.push_back(v2);
            hi = std::max(hi, std::max(v1, v2));
        }
    }
    if (hi == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double v : vals) acc += std::exp(v - hi);
    return hi + std::log(acc);
}

}  // namespace detail

// log of the integral of exp(log_f) over (a, b). Composite Gauss-Legendre
// panels, doubled until two successive levels agree to within
// rel_tol * (1 + |result|) on the log value.
template <class F>
double integrate_log(F&& log_f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(b > a)) throw_domain("integration interval is empty");

    std::int64_t panels = spec.initial_panels;
    double prev = detail::log_panel_sum(log_f, a, b, panels);
    for (int r = 0; r < spec.max_refinements; ++r) {
        panels *= 2;
        const double cur = detail::log_panel_sum(log_f, a, b, panels);
        if (prev == kNegInf && cur == kNegInf) return kNegInf;
        if (std::abs(cur - prev) <= spec.rel_tol * (1.0 + std::abs(cur))) {
            return cur;
        }
        prev = cur;
    }
    throw Error(ErrorCode::quadrature_nonconvergence,
                "quadrature did not converge after " + std::to_string(spec.max_refinements) +
                    " refinements (rel_tol " + std::to_string(spec.rel_tol) + ")");
}

}  // namespace bvs
