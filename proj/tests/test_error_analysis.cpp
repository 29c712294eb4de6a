#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bvs/error_analysis.hpp"
#include "bvs/errors.hpp"

using namespace bvs;

namespace {

// Independent oracle: beta CDF by composite Simpson on the density.
double simpson_beta_cdf(double x, double a, double b, long intervals = 200000) {
    if (intervals % 2 == 1) ++intervals;
    const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    auto density = [&](double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return std::exp(log_norm + (a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t));
    };
    const double h = x / static_cast<double>(intervals);
    double acc = density(0.0) + density(x);
    for (long i = 1; i < intervals; ++i) {
        acc += density(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}

// Independent oracle: draws of V/(V+W) from its chi-square representation.
class RatioSampler {
public:
    RatioSampler(double a, double b, double lambda, unsigned seed)
        : df_v_(static_cast<int>(2 * a)), df_w_(static_cast<int>(2 * b)), gen_(seed) {
        const double shift2 = lambda / df_w_;
        shift_ = std::sqrt(shift2);
    }

    double operator()() {
        double v = 0.0;
        for (int i = 0; i < df_v_; ++i) {
            const double z = normal_(gen_);
            v += z * z;
        }
        double w = 0.0;
        for (int i = 0; i < df_w_; ++i) {
            const double z = normal_(gen_) + shift_;
            w += z * z;
        }
        return v / (v + w);
    }

private:
    int df_v_;
    int df_w_;
    double shift_;
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_;
};

}  // namespace

TEST_CASE("incomplete beta endpoints and the uniform case") {
    CHECK(incomplete_beta_cdf(0.0, 2.5, 3.0) == 0.0);
    CHECK(incomplete_beta_cdf(1.0, 2.5, 3.0) == 1.0);
    CHECK(incomplete_beta_cdf(0.5, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(incomplete_beta_cdf(-0.1, 1.0, 1.0), Error);
    CHECK_THROWS_AS(incomplete_beta_cdf(0.5, 0.0, 1.0), Error);
}

TEST_CASE("incomplete beta matches an independent quadrature oracle") {
    for (auto [x, a, b] : {std::tuple<double, double, double>{0.3, 9.5, 5.0},
                           {0.1, 2.0, 7.0},
                           {0.7, 14.5, 5.0},
                           {0.25, 49.5, 16.5}}) {
        CHECK(incomplete_beta_cdf(x, a, b) ==
              doctest::Approx(simpson_beta_cdf(x, a, b)).epsilon(1e-9));
    }
    // Half-integer singular case against the arcsine closed form.
    CHECK(incomplete_beta_cdf(0.9, 0.5, 0.5) ==
          doctest::Approx(2.0 / M_PI * std::asin(std::sqrt(0.9))).epsilon(1e-12));
}

TEST_CASE("incomplete beta satisfies the reflection identity") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> ux(0.01, 0.99);
    std::uniform_real_distribution<double> us(0.5, 30.0);
    for (int i = 0; i < 50; ++i) {
        const double x = ux(gen);
        const double a = us(gen);
        const double b = us(gen);
        CHECK(incomplete_beta_cdf(x, a, b) ==
              doctest::Approx(1.0 - incomplete_beta_cdf(1.0 - x, b, a)).epsilon(1e-11));
    }
}

TEST_CASE("zero noncentrality reduces exactly to the central beta") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> ux(0.01, 0.99);
    std::uniform_real_distribution<double> us(0.5, 20.0);
    for (int i = 0; i < 10; ++i) {
        const double x = ux(gen);
        const double a = us(gen);
        const double b = us(gen);
        CHECK(noncentral_beta_cdf(x, a, b, 0.0) == incomplete_beta_cdf(x, a, b));
    }
}

TEST_CASE("noncentral beta CDF is monotone in x and in the noncentrality") {
    const double a = 9.5;
    const double b = 5.0;
    double prev_x = -1.0;
    for (double x = 0.05; x <= 0.95; x += 0.05) {
        const double v = noncentral_beta_cdf(x, a, b, 60.0);
        CHECK(v >= prev_x);
        prev_x = v;
    }
    // Noncentrality lives in the complement component V/(V+W), so more of
    // it pushes the ratio down and the CDF up (this is what makes power
    // rise with the pseudo-distance).
    for (double x : {0.2, 0.5, 0.8}) {
        double prev = -1.0;
        for (double lambda : {0.0, 5.0, 20.0, 60.0, 200.0}) {
            const double v = noncentral_beta_cdf(x, a, b, lambda);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("noncentral beta matches a chi-square sampling oracle") {
    const double a = 9.5;  // (n-j-1)/2 at n=30, j=10
    const double b = 5.0;  // j/2
    const double lambda = 60.0;
    const long reps = 200000;
    RatioSampler sample(a, b, lambda, 99);
    std::vector<double> draws(reps);
    for (long i = 0; i < reps; ++i) draws[i] = sample();
    std::sort(draws.begin(), draws.end());
    for (double x : {0.15, 0.3, 0.45, 0.6, 0.75}) {
        const double empirical =
            static_cast<double>(std::lower_bound(draws.begin(), draws.end(), x) - draws.begin()) /
            reps;
        const double exact = noncentral_beta_cdf(x, a, b, lambda);
        const double se = std::sqrt(std::max(exact * (1.0 - exact), 1e-12) / reps);
        CHECK(std::abs(empirical - exact) < 4.0 * se + 1e-4);
    }
}

TEST_CASE("the j = 0 rule always rejects at the boundary") {
    const CriticalRegion r = critical_threshold(Method::gn, 30, 0);
    CHECK(r.b_star == 1.0);
    CHECK(r.always_rejects);
}

TEST_CASE("the g = n threshold matches its closed-form inversion") {
    // ((n-j-1)/2) log(1+n) = ((n-1)/2) log(1+n b*)  =>
    // b* = ((1+n)^{(n-j-1)/(n-1)} - 1)/n
    const CriticalRegion r = critical_threshold(Method::gn, 30, 10);
    const double closed = (std::pow(31.0, 19.0 / 29.0) - 1.0) / 30.0;
    CHECK(r.b_star == doctest::Approx(closed).epsilon(1e-10));
    CHECK(closed == doctest::Approx(0.2829).epsilon(1e-3));
    CHECK_FALSE(r.always_rejects);
    CHECK_FALSE(r.never_rejects);
}

TEST_CASE("the intrinsic threshold agrees with a grid scan for the sign change") {
    const CriticalRegion r = critical_threshold(Method::ip, 30, 10);
    double scan = 0.0;
    const long points = 10000;
    for (long i = 1; i <= points; ++i) {
        const double b = static_cast<double>(i) / points;
        if (log_bf_ip(30, 10, b).log_value < 0.0) {
            scan = b;
            break;
        }
    }
    CHECK(std::abs(r.b_star - scan) < 1e-4);
}

TEST_CASE("thresholds zero the log factor for every method") {
    for (Method m : {Method::gn, Method::mix, Method::ip}) {
        for (auto [n, j] : {std::pair<long, int>{30, 10}, {60, 20}, {99, 33}}) {
            const CriticalRegion r = critical_threshold(m, n, j);
            CHECK(std::abs(log_bf(m, n, j, r.b_star).log_value) < 1e-8);
        }
    }
}

TEST_CASE("power equals the Type I error at zero pseudo-distance") {
    const auto points = error_curves(Method::gn, {30, 60}, [](long n) { return int(n / 3); }, 0.0);
    for (const auto& p : points) {
        CHECK(p.power == p.type1);
    }
}

TEST_CASE("g-prior rules have smaller Type I error than the intrinsic rule") {
    std::vector<long> grid;
    for (long n = 15; n <= 99; n += 12) grid.push_back(n);
    auto j_rule = [](long n) { return static_cast<int>((n + 2) / 3); };
    const auto gn = error_curves(Method::gn, grid, j_rule, 1.0);
    const auto mix = error_curves(Method::mix, grid, j_rule, 1.0);
    const auto ip = error_curves(Method::ip, grid, j_rule, 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(gn[i].type1 < ip[i].type1);
        CHECK(mix[i].type1 < ip[i].type1);
        CHECK(ip[i].power > gn[i].power);
        CHECK(ip[i].power > mix[i].power);
    }
}

TEST_CASE("power increases with the pseudo-distance") {
    for (Method m : {Method::gn, Method::mix, Method::ip}) {
        double prev = -1.0;
        for (double delta : {0.25, 0.5, 1.0, 2.0}) {
            const auto pts = error_curves(m, {60}, [](long) { return 20; }, delta);
            CHECK(pts[0].power > prev);
            prev = pts[0].power;
        }
    }
}

TEST_CASE("mixture and intrinsic power approach one as n grows with j = n/3") {
    for (Method m : {Method::mix, Method::ip}) {
        const auto pts = error_curves(m, {300}, [](long n) { return static_cast<int>(n / 3); }, 1.0);
        CHECK(pts[0].power > 0.95);
    }
}

TEST_CASE("bad curve grids are rejected") {
    CHECK_THROWS_AS(error_curves(Method::gn, {10}, [](long) { return 0; }, 1.0), Error);
    CHECK_THROWS_AS(error_curves(Method::gn, {10}, [](long) { return 9; }, 1.0), Error);
    CHECK_THROWS_AS(error_curves(Method::gn, {30}, [](long) { return 5; }, -1.0), Error);
}
