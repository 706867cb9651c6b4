#pragma once

#include "fracbvp/expr.hpp"
#include "fracbvp/grid.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace fracbvp::bvp {

/// Nonlinearity f(t, y).
using Nonlinearity = std::function<double(double, double)>;

/// The boundary value problem
///
///   -Delta^nu y(t) = lambda h(t+nu-1) f(t+nu-1, y(t+nu-1)),  t = 0..b,
///   y(nu-2) = y(nu+b) = 0,
///
/// with 1 < nu <= 2. `h[s]` holds h(s+nu-1) for s = 0..b.
struct Problem {
    double nu;
    int b;
    double lambda;
    std::vector<double> h;
    Nonlinearity f;

    /// Validates the invariants; throws DomainError naming the offending field.
    static Problem make(double nu, int b, double lambda, std::vector<double> h, Nonlinearity f);

    /// h sampled from an expression in t; f wraps an expression in (t, y).
    static Problem from_expressions(double nu, int b, double lambda, const expr::Expr& h,
                                    const expr::Expr& f);

    ShiftedGrid grid() const { return bvp_grid(nu, b); }

    /// Point s+nu-1 at which h and f enter the equation.
    double source_point(std::size_t s) const { return nu - 1.0 + static_cast<double>(s); }
};

/// G(t, s) tabulated for t on [nu-2, nu+b] (b+3 rows) and s = 0..b (b+1 columns):
///
///   G(t,s) = [ t^(nu-1) (nu+b-s-1)^(nu-1) / (nu+b)^(nu-1)
///              - (t-s-1)^(nu-1) * [s < t-nu+1] ] / Gamma(nu)
class GreenMatrix {
public:
    GreenMatrix(double nu, int b, std::vector<double> entries);

    double nu() const noexcept { return nu_; }
    int b() const noexcept { return b_; }
    std::size_t rows() const noexcept { return static_cast<std::size_t>(b_) + 3; }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(b_) + 1; }
    ShiftedGrid grid() const { return bvp_grid(nu_, b_); }

    double operator()(std::size_t t_index, std::size_t s) const {
        return entries_[t_index * cols() + s];
    }

    /// Smallest entry before clamping to zero.
    double min_raw_entry() const noexcept { return min_raw_; }

    /// Discrepancy recorded by the oracle check in build_green.
    double validation_discrepancy() const noexcept { return discrepancy_; }

private:
    friend GreenMatrix build_green(double nu, int b);

    double nu_;
    int b_;
    std::vector<double> entries_;
    double min_raw_ = 0.0;
    double discrepancy_ = 0.0;
};

/// Closed-form table without validation or clamping.
GreenMatrix tabulate_green(double nu, int b);

/// Tabulates G, checks it against the direct solve and clamps roundoff
/// negatives to zero. Throws ValidationError when the check fails.
GreenMatrix build_green(double nu, int b);

/// Tolerance build_green applies to validate_green.
inline constexpr double kGreenValidationTol = 1e-8;

/// Solves -Delta^nu y = rhs(s+nu-1), s = 0..b, y(nu-2) = y(nu+b) = 0 as a
/// dense (b+1)x(b+1) system whose rows apply fractional_difference to the
/// interior unknowns. Throws SingularSystem.
GridFunction solve_direct(double nu, int b, const GridFunction& rhs);

/// ||y1 - y2|| / (1 + ||y2||) where y1 = sum_s G(t,s) rhs(s+nu-1) and y2 is
/// the direct solve.
double validate_green(const GreenMatrix& G, const GridFunction& rhs);

/// Grid indices i with nu-2+i in [(nu+b)/4, 3(nu+b)/4].
struct QuarterInterval {
    std::size_t lo;
    std::size_t hi;

    bool contains(std::size_t i) const noexcept { return lo <= i && i <= hi; }
};

/// Throws DegenerateCone when no grid point falls in the interval.
QuarterInterval quarter_interval(double nu, int b);

/// min over s (with G(s+nu-1,s) > 1e-14) of min_{t in quarter} G(t,s) / G(s+nu-1,s).
double cone_gamma(const GreenMatrix& G);

enum class SigmaWeighting { WithH, Unweighted };

struct ConeConstants {
    double gamma;
    double eta;
    /// The sigma selected by the weighting flag.
    double sigma;
    double sigma_weighted;
    double sigma_unweighted;
    SigmaWeighting weighting;
    QuarterInterval quarter;
    /// t* = floor((b-nu)/2) + nu and its grid index.
    double midpoint;
    std::size_t midpoint_index;
    bool midpoint_in_quarter;
    /// Summation limits of sigma after clipping to [0, b].
    int s_lo;
    int s_hi;
};

ConeConstants cone_constants(const Problem& P, const GreenMatrix& G,
                             SigmaWeighting weighting = SigmaWeighting::WithH);

/// (Fy)(t) = lambda sum_s G(t,s) h(s+nu-1) f(s+nu-1, y(s+nu-1)).
/// f is evaluated on y as given; solvers clamp y to >= 0 first.
GridFunction apply_F(const Problem& P, const GreenMatrix& G, const GridFunction& y);

/// Cone test: min over the quarter interval >= gamma ||y|| - slack.
bool in_cone(const GridFunction& y, double gamma, const QuarterInterval& quarter,
             double slack = 1e-10);

}  // namespace fracbvp::bvp
