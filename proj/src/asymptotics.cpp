#include "bvs/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "bvs/errors.hpp"
#include "bvs/math_utils.hpp"

namespace bvs {

namespace {

void check_scenario(const AsymptoticScenario& s) {
    if (s.j < 0 || s.t < 0) throw_domain("dimensions must be >= 0");
    if (s.n <= s.j + 2) {
        throw_domain("need n > j + 2 (n = " + std::to_string(s.n) + ", j = " + std::to_string(s.j) + ")");
    }
    if (!(s.delta_tj >= 0.0) || !std::isfinite(s.delta_tj) ||
        !(s.delta_t0 >= 0.0) || !std::isfinite(s.delta_t0)) {
        throw_domain("pseudo-distances must be finite and >= 0");
    }
}

long growth_dimension(long n, double b) {
    if (!(b >= 0.0) || b > 1.0) throw_domain("growth exponent b must lie in [0, 1]");
    if (n < 1) throw_domain("n must be >= 1");
    return static_cast<long>(std::floor(std::pow(static_cast<double>(n), b) + 1e-9));
}

}  // namespace

double log_bf_asymptotic(Method method, const AsymptoticScenario& s) {
    check_scenario(s);
    const double n = static_cast<double>(s.n);
    const double j = static_cast<double>(s.j);
    const double dtj = s.delta_tj;
    const double dt0 = s.delta_t0;

    switch (method) {
        case Method::gn: {
            if (s.regime == Regime::b_lt_1) {
                return -0.5 * j * std::log(n) - 0.5 * n * std::log((1.0 + dtj) / (1.0 + dt0)) +
                       (dtj - dt0) / (2.0 * (1.0 + dtj));
            }
            const double m = 1.0 + dtj - j / n;
            if (!(m > 0.0)) throw_domain("degenerate b = 1 form: 1 + delta_tj - j/n <= 0");
            return -0.5 * j * std::log(n) - 0.5 * n * std::log(m / (1.0 + dt0)) +
                   (dtj - dt0 - j / n) / (2.0 * m);
        }
        case Method::mix: {
            const double lead = -0.5 * j * std::log(n * std::exp(1.0) / (j + 1.0));
            if (s.regime == Regime::b_lt_1) {
                return lead - 0.5 * (n - j - 2.0) * std::log((1.0 + dtj) / (1.0 + dt0));
            }
            const double m = 1.0 + dtj - j / n;
            if (!(m > 0.0)) {
                // exponent -(n-j-2)/2 is positive only when j > n - 2
                if (n - j - 2.0 < 0.0) return kNegInf;
                throw_domain("degenerate b = 1 form: 1 + delta_tj - j/n <= 0");
            }
            return lead - 0.5 * (n - j - 2.0) * std::log(m / (1.0 + dt0));
        }
        case Method::ip: {
            if (s.regime == Regime::b_lt_1) {
                return -0.5 * j * std::log(n / (j + 2.0)) -
                       0.5 * (n - j) * std::log((1.0 + dtj) / (1.0 + dt0));
            }
            if (s.j == 0) throw_domain("the b = 1 intrinsic form requires j >= 1");
            return 0.5 * (n - j - 1.0) * std::log1p(n / j) -
                   0.5 * (n - 1.0) * std::log(((n / j) * (1.0 + dtj) + dt0) / (1.0 + dt0));
        }
        case Method::schwarz:
            throw_domain("no scenario form for the schwarz approximation");
    }
    throw_domain("unknown method");
}

DistanceClass classify_pseudo_distance(const ModelSubset& true_model, const ModelSubset& other) {
    return true_model.is_subset_of(other) ? DistanceClass::zero : DistanceClass::positive;
}

double consistency_partial_sum(Method method, const ModelPrior& prior, double b, long n, int t,
                               double delta_t0, Regime regime,
                               std::optional<double> nonnested_delta) {
    if (t < 0) throw_domain("true dimension must be >= 0");
    if (!(delta_t0 >= 0.0)) throw_domain("delta_t0 must be >= 0");
    if (t == 0 && delta_t0 != 0.0) throw_domain("delta_t0 must be 0 when the true model is the null");
    const long k = growth_dimension(n, b);
    if (k < t) throw_domain("floor(n^b) = " + std::to_string(k) + " is below the true dimension");
    if (nonnested_delta && !(*nonnested_delta > 0.0)) {
        throw_domain("the non-nesting pseudo-distance floor must be positive");
    }

    const double log_bt0 =
        t == 0 ? 0.0
               : log_bf_asymptotic(method, AsymptoticScenario{n, t, t, 0.0, delta_t0, regime});

    // The closed forms degenerate as j approaches n; terms there are
    // negligible against the leading ones, so the b = 1 sums stop at n - 3.
    const long j_max = std::min<long>(k, n - 3);

    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(std::max<long>(0, j_max - t)) * (nonnested_delta ? 2 : 1));

    for (long j = t + 1; j <= j_max; ++j) {
        const double log_count = log_binomial(k - t, j - t);
        const double log_ratio =
            log_bf_asymptotic(method, AsymptoticScenario{n, t, static_cast<int>(j), 0.0, delta_t0, regime}) -
            log_bt0;
        terms.push_back(log_count + log_ratio + log_prior_ratio(prior, static_cast<int>(j), t, k));
    }

    if (nonnested_delta) {
        const double df = *nonnested_delta;
        for (long j = 0; j <= j_max; ++j) {
            double log_count;
            if (j < t) {
                log_count = log_binomial(k, j);
            } else if (j == t) {
                const double log_class = log_binomial(k, t);
                if (log_class <= 0.0) continue;  // C(k, t) == 1: only the true model
                log_count = log_class + std::log1p(-std::exp(-log_class));
            } else {
                if (t == 0) continue;  // every superset class nests the null
                const double log_all = log_binomial(k, j);
                const double log_nested = log_binomial(k - t, j - t);
                log_count = log_all + std::log1p(-std::exp(log_nested - log_all));
            }
            const double log_ratio =
                log_bf_asymptotic(method, AsymptoticScenario{n, t, static_cast<int>(j), df, delta_t0, regime}) -
                log_bt0;
            terms.push_back(log_count + log_ratio + log_prior_ratio(prior, static_cast<int>(j), t, k));
        }
    }

    const double log_sum = log_sum_exp(terms);
    if (log_sum > 700.0) return std::numeric_limits<double>::infinity();
    return std::exp(log_sum);
}

ConsistencyReport consistency_report(Method method, const ModelPrior& prior, double b,
                                     const std::vector<long>& n_grid, int t, double delta_t0,
                                     Regime regime, std::optional<double> nonnested_delta) {
    if (n_grid.size() < 2) throw_domain("need at least two grid points");
    for (std::size_t i = 1; i < n_grid.size(); ++i) {
        if (n_grid[i] <= n_grid[i - 1]) throw_domain("n grid must be strictly increasing");
    }

    ConsistencyReport report;
    report.b = b;
    report.n_grid = n_grid;
    report.partial_sums.reserve(n_grid.size());
    for (long n : n_grid) {
        report.partial_sums.push_back(
            consistency_partial_sum(method, prior, b, n, t, delta_t0, regime, nonnested_delta));
    }

    const std::size_t len = report.partial_sums.size();
    const std::size_t tail = std::max<std::size_t>(2, len / 4);
    bool decreasing = true;
    for (std::size_t i = len - tail + 1; i < len; ++i) {
        if (!(report.partial_sums[i] < report.partial_sums[i - 1])) decreasing = false;
    }
    for (double v : report.partial_sums) {
        if (!std::isfinite(v)) decreasing = false;
    }
    const bool small_enough = report.partial_sums.back() < 1e-3 * report.partial_sums.front();
    report.verdict_trend =
        decreasing && small_enough ? Trend::decreasing_to_zero : Trend::not_decreasing;
    return report;
}

double inconsistency_threshold_mix(double r) {
    if (!(r > 1.0)) throw_domain("the mixture threshold requires r > 1");
    return (1.0 - 1.0 / r) * std::pow(std::exp(1.0) * r, 1.0 / (r - 1.0)) - 1.0;
}

double inconsistency_threshold_ip(double r) {
    if (!(r >= 1.0)) throw_domain("the intrinsic threshold requires r >= 1");
    if (r == 1.0) return 1.0 / std::log(2.0) - 1.0;
    return (r - 1.0) / std::pow(r + 1.0, (r - 1.0) / r) - 1.0;
}

}  // namespace bvs
