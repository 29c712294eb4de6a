#include "bvs/error_analysis.hpp"

#include <cmath>

#include "bvs/errors.hpp"
#include "bvs/parallel.hpp"

namespace bvs {

namespace {

// Continued fraction for the incomplete beta (Lentz's algorithm).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double kTiny = 1e-30;
    constexpr double kEps = 1e-15;
    constexpr int kMaxIter = 500;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;

    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw Error(ErrorCode::series_nonconvergence, "incomplete beta continued fraction stalled");
}

}  // namespace

double incomplete_beta_cdf(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw_domain("beta shape parameters must be positive");
    if (!(x >= 0.0) || !(x <= 1.0)) throw_domain("x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    // I_x(a,b) = 1 - I_{1-x}(b,a); evaluate on the fast-converging side.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double noncentral_beta_cdf(double x, double a, double b, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw_domain("lambda must be finite and >= 0");
    if (!(x >= 0.0) || !(x <= 1.0)) throw_domain("x must lie in [0, 1]");
    if (lambda == 0.0) return incomplete_beta_cdf(x, a, b);
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    constexpr double kTailTol = 1e-12;
    constexpr long kMaxTerms = 100000;

    const double half = 0.5 * lambda;
    const double log_half = std::log(half);
    double cdf = 0.0;
    double pois_mass = 0.0;
    for (long m = 0; m < kMaxTerms; ++m) {
        const double log_pmf = -half + m * log_half - std::lgamma(static_cast<double>(m) + 1.0);
        const double pmf = std::exp(log_pmf);
        if (pmf > 0.0) {
            cdf += pmf * incomplete_beta_cdf(x, a, b + static_cast<double>(m));
            pois_mass += pmf;
        }
        if (1.0 - pois_mass < kTailTol && m > half) {
            return std::min(1.0, cdf);
        }
    }
    throw Error(ErrorCode::series_nonconvergence,
                "noncentral beta series did not reach the tail tolerance");
}

CriticalRegion critical_threshold(Method method, long n, int j, const QuadratureSpec& quad) {
    if (n <= j + 2) throw_domain("need n > j + 2");

    CriticalRegion region;
    region.method = method;
    region.n = n;
    region.j = j;

    auto log_bf_at = [&](double b) { return log_bf(method, n, j, b, quad).log_value; };

    constexpr double kLo = 1e-12;
    if (log_bf_at(1.0) >= 0.0) {
        region.b_star = 1.0;
        region.always_rejects = true;
        return region;
    }
    if (log_bf_at(kLo) <= 0.0) {
        region.b_star = 0.0;
        region.never_rejects = true;
        return region;
    }

    double lo = kLo;   // log BF > 0 here
    double hi = 1.0;   // log BF < 0 here
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (log_bf_at(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    region.b_star = 0.5 * (lo + hi);
    return region;
}

std::vector<ErrorCurvePoint> error_curves(Method method, const std::vector<long>& n_grid,
                                          const std::function<int(long)>& j_rule, double delta,
                                          const QuadratureSpec& quad) {
    if (!(delta >= 0.0)) throw_domain("delta must be >= 0");
    for (long n : n_grid) {
        const int j = j_rule(n);
        if (j < 1 || n <= j + 2) {
            throw_domain("need j >= 1 and n > j + 2 at every grid point (n = " +
                         std::to_string(n) + ", j = " + std::to_string(j) + ")");
        }
    }

    std::vector<ErrorCurvePoint> points(n_grid.size());
    parallel_for(n_grid.size(), [&](std::size_t i) {
        const long n = n_grid[i];
        const int j = j_rule(n);
        const CriticalRegion region = critical_threshold(method, n, j, quad);
        const double a = 0.5 * (static_cast<double>(n) - j - 1);
        const double b = 0.5 * j;
        const double lambda = 2.0 * static_cast<double>(n) * delta;
        ErrorCurvePoint p;
        p.n = n;
        p.j = j;
        p.method = method;
        p.b_star = region.b_star;
        p.delta = delta;
        p.type1 = region.never_rejects ? 0.0 : incomplete_beta_cdf(region.b_star, a, b);
        p.power = region.never_rejects ? 0.0 : noncentral_beta_cdf(region.b_star, a, b, lambda);
        points[i] = p;
    });
    return points;
}

}  // namespace bvs
