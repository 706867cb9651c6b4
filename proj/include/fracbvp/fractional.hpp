#pragma once

#include "fracbvp/grid.hpp"

namespace fracbvp::frac {

/// log|Gamma(x)| together with the sign of Gamma(x).
struct SignedLogGamma {
    double log_abs;
    int sign;
};

/// True when x is a non-positive integer (within kLatticeTol).
bool is_gamma_pole(double x) noexcept;

/// Gamma via log|Gamma| and a tracked sign; the reflection formula covers
/// negative non-integer x. Throws DomainError at poles.
SignedLogGamma log_gamma_signed(double x);

/// Generalized falling factorial t^(nu) = Gamma(t+1) / Gamma(t+1-nu).
///
/// A pole in the denominator alone gives exactly 0. When both arguments are
/// poles the integer limit is returned, so falling_factorial(n, k) is
/// n(n-1)...(n-k+1). A pole in the numerator alone throws PoleNumerator.
double falling_factorial(double t, double nu);

/// nu-th fractional sum of f (based at a = f.grid().offset()) evaluated at t:
///
///   (1/Gamma(nu)) * sum_{s=a}^{t-nu} (t-s-1)^(nu-1) f(s)
///
/// t must lie on a + nu + k for an integer k >= -1; k = -1 is the empty sum.
double fractional_sum(const GridFunction& f, double nu, double t);

/// nu-th fractional difference Delta^N Delta^(nu-N) f at t, N = ceil(nu).
/// Integer orders use the classical N-th forward difference.
double fractional_difference(const GridFunction& f, double nu, double t);

/// g_i = f_{i+1} - f_i on count-1 points with the same offset.
GridFunction forward_difference(const GridFunction& f);

}  // namespace fracbvp::frac
