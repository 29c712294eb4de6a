#include "bvs/bayes_factors.hpp"

#include <algorithm>
#include <cmath>

#include "bvs/errors.hpp"
#include "bvs/math_utils.hpp"

namespace bvs {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_b(double b_j0) {
    if (!(b_j0 > 0.0) || b_j0 > 1.0) {
        throw_domain("b_j0 must lie in (0, 1]; got " + std::to_string(b_j0));
    }
}

void check_nj(long n, int j, long min_gap) {
    if (j < 0) throw_domain("model dimension j must be >= 0");
    if (n <= j + min_gap) {
        throw_domain("need n > j + " + std::to_string(min_gap) + " (n = " + std::to_string(n) +
                     ", j = " + std::to_string(j) + ")");
    }
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::gn: return "gn";
        case Method::mix: return "mix";
        case Method::ip: return "ip";
        case Method::schwarz: return "schwarz";
    }
    return "?";
}

Method parse_method(const std::string& text) {
    if (text == "gn") return Method::gn;
    if (text == "mix") return Method::mix;
    if (text == "ip") return Method::ip;
    if (text == "schwarz") return Method::schwarz;
    throw_domain("unknown method '" + text + "' (expected gn|mix|ip|schwarz)");
}

std::string to_string(BfMode mode) {
    switch (mode) {
        case BfMode::exact: return "exact";
        case BfMode::approx_b_lt_1: return "approx_b_lt_1";
        case BfMode::approx_b_eq_1: return "approx_b_eq_1";
    }
    return "?";
}

LogBayesFactor log_bf_gn(long n, int j, double b_j0) {
    check_nj(n, j, 1);
    check_b(b_j0);
    const double nn = static_cast<double>(n);
    const double log_value = 0.5 * (nn - j - 1) * std::log1p(nn) -
                             0.5 * (nn - 1) * std::log1p(nn * b_j0);
    return {log_value, Method::gn, BfMode::exact, n, j, b_j0};
}

LogBayesFactor log_bf_mix(long n, int j, double b_j0, const QuadratureSpec& quad) {
    check_nj(n, j, 2);
    check_b(b_j0);
    const double nn = static_cast<double>(n);
    const double a_exp = 0.5 * (nn - j - 1);
    const double b_exp = 0.5 * (nn - 1);
    const double log_b = std::log(b_j0);

    // g = gamma (1-u^2)/u^2 maps u in (0,1) onto (0, inf) with the mixing
    // scale gamma placed mid-domain; |dg/du| = 2 gamma / u^3. The integrand
    // is smooth in u (it behaves like u^j at u -> 0 and vanishes to all
    // orders at u -> 1).
    double gamma = std::max(1.0, nn / 3.0);
    const double knee = ((nn - j - 1) - (nn - 1) * b_j0) / (std::max(1, j) * b_j0);
    if (std::isfinite(knee) && knee > gamma) gamma = knee;
    const double log_gamma = std::log(gamma);

    auto log_integrand = [&](double u) {
        const double log_g = log_gamma + std::log1p(-u * u) - 2.0 * std::log(u);
        const double log_exp_term = std::log(0.5 * nn) - log_g;
        if (log_exp_term > 700.0) return kNegInf;
        return a_exp * log1p_exp(log_g) - b_exp * log1p_exp(log_g + log_b) -
               1.5 * log_g - std::exp(log_exp_term) + std::log(2.0) + log_gamma -
               3.0 * std::log(u);
    };

    const double log_prefactor = 0.5 * std::log(0.5 * nn) - std::lgamma(0.5);
    const double log_value = log_prefactor + integrate_log(log_integrand, 0.0, 1.0, quad);
    return {log_value, Method::mix, BfMode::exact, n, j, b_j0};
}

LogBayesFactor log_bf_ip(long n, int j, double b_j0, const QuadratureSpec& quad) {
    check_nj(n, j, 1);
    check_b(b_j0);
    const double nn = static_cast<double>(n);
    const double c = static_cast<double>(j) + 2.0;
    const double a_exp = 0.5 * (nn - j - 1);
    const double b_exp = 0.5 * (nn - 1);

    // phi = (pi/2) a (1-u^2) / (a (1-u^2) + u^2): a smooth bijection from
    // u in (0,1) onto (0, pi/2) whose scale a tracks where the integrand
    // saturates (c phi^2 ~ n b); |dphi/du| = pi a u / D^2.
    const double a_scale = std::clamp(std::sqrt(nn * b_j0 / c), 1e-150, 1.0);

    auto log_integrand = [&](double u) {
        const double d = a_scale * (1.0 - u * u) + u * u;
        const double phi = 0.5 * kPi * a_scale * (1.0 - u * u) / d;
        const double s = std::sin(phi);
        const double log_jac = std::log(kPi * a_scale) + std::log(u) - 2.0 * std::log(d);
        double val = a_exp * std::log(nn + c * s * s) -
                     b_exp * std::log(nn * b_j0 + c * s * s) + log_jac;
        if (j > 0) val += j * std::log(s);
        return val;
    };

    const double log_prefactor = std::log(2.0 / kPi) + 0.5 * j * std::log(c);
    const double log_value = log_prefactor + integrate_log(log_integrand, 0.0, 1.0, quad);
    return {log_value, Method::ip, BfMode::exact, n, j, b_j0};
}

LogBayesFactor log_bf_schwarz(long n, int j, double b_j0) {
    if (n <= 1) throw_domain("need n > 1");
    if (j < 0) throw_domain("model dimension j must be >= 0");
    check_b(b_j0);
    const double nn = static_cast<double>(n);
    const double log_value = -0.5 * j * std::log(nn) - 0.5 * nn * std::log(b_j0);
    return {log_value, Method::schwarz, BfMode::exact, n, j, b_j0};
}

LogBayesFactor log_bf_approx(Method method, Regime regime, long n, int j, double b_j0) {
    check_nj(n, j, 2);
    check_b(b_j0);
    const double nn = static_cast<double>(n);
    const double b = b_j0;
    const BfMode mode = regime == Regime::b_lt_1 ? BfMode::approx_b_lt_1 : BfMode::approx_b_eq_1;

    double log_value = 0.0;
    switch (method) {
        case Method::gn: {
            log_value = -0.5 * j * std::log(nn) - 0.5 * nn * std::log(b) + 0.5 * (1.0 - 1.0 / b);
            if (regime == Regime::b_eq_1) log_value -= 0.5 * j / nn;
            break;
        }
        case Method::mix: {
            log_value = -0.5 * j * std::log(0.5 * nn) - 0.5 * (nn - j - 2) * std::log(b) +
                        std::lgamma(0.5 * (j + 1)) - std::lgamma(0.5);
            if (regime == Regime::b_eq_1) {
                log_value -= 0.5 * (j + 1) * std::log1p(j * b / nn);
            }
            break;
        }
        case Method::ip: {
            const double c = static_cast<double>(j) + 2.0;
            if (regime == Regime::b_lt_1) {
                log_value = -0.5 * j * std::log(nn / c) - 0.5 * (nn - 1) * std::log(b) +
                            0.5 * c * (1.0 - 1.0 / b);
            } else {
                log_value = 0.5 * (nn - j - 1) * std::log1p(nn / c) -
                            0.5 * (nn - 1) * std::log1p(nn * b / c);
            }
            break;
        }
        case Method::schwarz:
            throw_domain("no separate approximation regimes for the schwarz form");
    }
    return {log_value, method, mode, n, j, b_j0};
}

LogBayesFactor log_bf(Method method, long n, int j, double b_j0, const QuadratureSpec& quad) {
    switch (method) {
        case Method::gn: return log_bf_gn(n, j, b_j0);
        case Method::mix: return log_bf_mix(n, j, b_j0, quad);
        case Method::ip: return log_bf_ip(n, j, b_j0, quad);
        case Method::schwarz: return log_bf_schwarz(n, j, b_j0);
    }
    throw_domain("unknown method");
}

}  // namespace bvs
