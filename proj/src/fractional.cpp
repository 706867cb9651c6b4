#include "fracbvp/fractional.hpp"

#include "fracbvp/errors.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace fracbvp::frac {
namespace {

constexpr double kIntegerOrderTol = 1e-12;

bool near_integer(double x, double tol) noexcept {
    return std::abs(x - std::round(x)) <= tol;
}

// n! / m! with sign (-1)^(m-n): the limit of Gamma(-m+e)/Gamma(-n+e) as e -> 0.
double both_pole_limit(double num_arg, double den_arg) {
    const double m = -std::round(num_arg);
    const double n = -std::round(den_arg);
    const double magnitude = std::exp(std::lgamma(n + 1.0) - std::lgamma(m + 1.0));
    const long parity = static_cast<long>(m - n);
    return (parity % 2 == 0) ? magnitude : -magnitude;
}

double integer_falling_factorial(double t, long k) {
    double p = 1.0;
    for (long j = 0; j < k; ++j) {
        p *= t - static_cast<double>(j);
    }
    return p;
}

std::string fmt_point(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", t);
    return buf;
}

}  // namespace

bool is_gamma_pole(double x) noexcept {
    return x <= kLatticeTol && near_integer(x, kLatticeTol);
}

SignedLogGamma log_gamma_signed(double x) {
    if (is_gamma_pole(x)) {
        throw DomainError("Gamma has a pole at " + fmt_point(x));
    }
    if (x > 0.0) {
        int sign = 1;
        const double lg = ::lgamma_r(x, &sign);
        return {lg, sign};
    }
    // Gamma(x) = pi / (sin(pi x) Gamma(1-x)), with 1-x > 1.
    const double s = std::sin(std::numbers::pi * x);
    int unused = 1;
    const double lg = std::log(std::numbers::pi) - std::log(std::abs(s)) - ::lgamma_r(1.0 - x, &unused);
    return {lg, s > 0.0 ? 1 : -1};
}

double falling_factorial(double t, double nu) {
    if (near_integer(nu, kIntegerOrderTol) && std::round(nu) >= 0.0) {
        return integer_falling_factorial(t, static_cast<long>(std::round(nu)));
    }
    const double num_arg = t + 1.0;
    const double den_arg = t + 1.0 - nu;
    const bool num_pole = is_gamma_pole(num_arg);
    const bool den_pole = is_gamma_pole(den_arg);
    if (num_pole && den_pole) {
        return both_pole_limit(num_arg, den_arg);
    }
    if (den_pole) {
        return 0.0;
    }
    if (num_pole) {
        throw PoleNumerator("falling_factorial: Gamma(t+1) has a pole at t = " + fmt_point(t) +
                            " while Gamma(t+1-nu) does not");
    }
    const SignedLogGamma num = log_gamma_signed(num_arg);
    const SignedLogGamma den = log_gamma_signed(den_arg);
    return num.sign * den.sign * std::exp(num.log_abs - den.log_abs);
}

double fractional_sum(const GridFunction& f, double nu, double t) {
    if (!(nu > 0.0)) {
        throw DomainError("fractional_sum: order must be positive");
    }
    const double a = f.grid().offset();
    const double shift = t - a - nu;
    const double k_real = std::round(shift);
    if (std::abs(shift - k_real) > kLatticeTol || k_real < -1.0) {
        throw DomainError("fractional_sum: t = " + fmt_point(t) + " is not on the lattice N_{a+nu}");
    }
    if (k_real < 0.0) {
        return 0.0;
    }
    const auto k = static_cast<std::size_t>(k_real);
    if (k >= f.size()) {
        throw DomainError("fractional_sum: f is missing points up to " + fmt_point(t - nu));
    }

    if (near_integer(nu, kIntegerOrderTol)) {
        // (t-s-1)^(n-1) reduces to a product of integers.
        const long n = static_cast<long>(std::round(nu));
        double acc = 0.0;
        for (std::size_t j = 0; j <= k; ++j) {
            const double x = static_cast<double>(n - 1) + static_cast<double>(k - j);
            acc += integer_falling_factorial(x, n - 1) * f[j];
        }
        return acc / std::exp(std::lgamma(static_cast<double>(n)));
    }

    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
        // t - s - 1 with s = a + j, written relative to nu to avoid lattice drift.
        const double x = nu - 1.0 + static_cast<double>(k - j);
        acc += falling_factorial(x, nu - 1.0) * f[j];
    }
    return acc / std::tgamma(nu);
}

double fractional_difference(const GridFunction& f, double nu, double t) {
    if (!(nu > 0.0)) {
        throw DomainError("fractional_difference: order must be positive");
    }
    const bool integer_order = near_integer(nu, kIntegerOrderTol);
    const long n = integer_order ? static_cast<long>(std::round(nu)) : static_cast<long>(std::ceil(nu));

    std::vector<double> g(static_cast<std::size_t>(n) + 1);
    for (long j = 0; j <= n; ++j) {
        const double tj = t + static_cast<double>(j);
        g[static_cast<std::size_t>(j)] =
            integer_order ? f.at(tj) : fractional_sum(f, static_cast<double>(n) - nu, tj);
    }

    // Delta^N g(t) = sum_j (-1)^(N-j) C(N,j) g(t+j)
    double acc = 0.0;
    double binom = 1.0;
    for (long j = 0; j <= n; ++j) {
        const double sign = ((n - j) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binom * g[static_cast<std::size_t>(j)];
        binom = binom * static_cast<double>(n - j) / static_cast<double>(j + 1);
    }
    return acc;
}

GridFunction forward_difference(const GridFunction& f) {
    if (f.size() < 2) {
        throw DomainError("forward_difference: need at least two points");
    }
    const std::size_t m = f.size() - 1;
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) {
        d[i] = f[i + 1] - f[i];
    }
    return GridFunction(ShiftedGrid(f.grid().offset(), m), std::move(d));
}

}  // namespace fracbvp::frac
