#pragma once

#include "fracbvp/green.hpp"
#include "fracbvp/grid.hpp"

#include <string>
#include <vector>

namespace fracbvp::bvp {

enum class Method { Picard, Newton };

const char* to_string(Method m) noexcept;

struct Solution {
    GridFunction y;
    /// max_t |Delta^nu y(t) + lambda h f|, computed without the Green's function.
    double residual_norm;
    int iterations;
    Method method;
    bool in_cone;
};

/// Outcome of substituting y back into the difference equation.
struct Verification {
    double residual_norm;
    /// Both boundary values are exactly zero.
    bool bc_ok;
    /// min_t y(t) >= 0.
    bool positive;
    bool in_cone;
    /// residual_norm <= 10 tol.
    bool residual_ok;
};

/// Direct substitution into -Delta^nu y = lambda h f using fractional_difference.
Verification verify_solution(const Problem& P, const GreenMatrix& G, const GridFunction& y,
                             double tol);

/// y <- (1-damping) y + damping clamp+(F clamp+(y)) until
/// ||y_{k+1} - y_k|| <= tol (1 + ||y_k||).
///
/// `iterations` counts the updates made before the confirming one, so a map
/// that is constant in y reports 1. Throws Diverged when ||y|| exceeds 1e12
/// and MaxIterations when the budget runs out.
Solution solve_picard(const Problem& P, const GreenMatrix& G, const GridFunction& y0, double tol,
                      int max_iter, double damping = 1.0);

/// Damped Newton on R(u) = u - F(clamp+(u)) over the interior unknowns.
/// J = I - dF/du by forward differences; steps are halved until ||R||_2
/// drops, and cut short of zero when they would flip only part of u negative.
/// Accepts when ||R|| <= tol. Throws SingularJacobian, MaxIterations or
/// NegativeSolution.
Solution solve_newton(const Problem& P, const GreenMatrix& G, const GridFunction& y0, double tol,
                      int max_iter);

struct SearchOptions {
    Method method = Method::Picard;
    double tol = 1e-10;
    int max_iter = 500;
    double damping = 1.0;
};

struct StartFailure {
    double start;
    std::string stage;
    std::string reason;
};

struct SearchResult {
    /// Distinct verified solutions, sorted by norm.
    std::vector<Solution> solutions;
    std::vector<StartFailure> failures;
};

/// Initial guess c * G(t, floor(b/2)) / max_t G(t, floor(b/2)).
GridFunction bump_start(const GreenMatrix& G, double c);

/// Multi-start search. Each start c (plus c = 0) seeds Picard, whose result
/// is polished by Newton, and an independent Newton run from the same seed;
/// the latter reaches fixed points that repel Picard. Candidates are kept
/// when they verify (residual <= 10 tol, zero boundary values, nonnegative,
/// in the cone) and merged when their sup distance is at most
/// max(1e-6, 1e-4 ||y||).
SearchResult find_positive_solutions(const Problem& P, const GreenMatrix& G,
                                     const std::vector<double>& starts,
                                     const SearchOptions& options);

}  // namespace fracbvp::bvp
