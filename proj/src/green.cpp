#include "fracbvp/green.hpp"

#include "fracbvp/errors.hpp"
#include "fracbvp/fractional.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace fracbvp::bvp {
namespace {

std::size_t interior_count(int b) {
    return static_cast<std::size_t>(b) + 1;
}

void require_order(double nu, int b, const char* who) {
    if (!(nu > 1.0 && nu <= 2.0)) {
        throw DomainError(std::string(who) + ": nu must satisfy 1 < nu <= 2");
    }
    if (b < 1) {
        throw DomainError(std::string(who) + ": b must be at least 1");
    }
}

// rhs(s+nu-1) for s = 0..b.
std::vector<double> sample_rhs(double nu, int b, const GridFunction& rhs) {
    std::vector<double> r(interior_count(b));
    for (std::size_t s = 0; s < r.size(); ++s) {
        r[s] = rhs.at(nu - 1.0 + static_cast<double>(s));
    }
    return r;
}

}  // namespace

Problem Problem::make(double nu, int b, double lambda, std::vector<double> h, Nonlinearity f) {
    if (!(nu > 1.0 && nu <= 2.0)) {
        throw DomainError("nu: must satisfy 1 < nu <= 2");
    }
    if (b < 1) {
        throw DomainError("b: must be a positive integer");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("lambda: must be a positive finite number");
    }
    if (h.size() != interior_count(b)) {
        throw DomainError("h: expected " + std::to_string(interior_count(b)) + " values");
    }
    for (std::size_t s = 0; s < h.size(); ++s) {
        if (!std::isfinite(h[s]) || h[s] < 0.0) {
            throw DomainError("h: must be finite and nonnegative, violated at s = " + std::to_string(s));
        }
    }
    if (!f) {
        throw DomainError("f: missing nonlinearity");
    }
    return Problem{nu, b, lambda, std::move(h), std::move(f)};
}

Problem Problem::from_expressions(double nu, int b, double lambda, const expr::Expr& h,
                                  const expr::Expr& f) {
    if (b < 1) {
        throw DomainError("b: must be a positive integer");
    }
    std::vector<double> hv(interior_count(b));
    for (std::size_t s = 0; s < hv.size(); ++s) {
        try {
            hv[s] = h(nu - 1.0 + static_cast<double>(s), 0.0);
        } catch (const EvalError& e) {
            throw EvalError(std::string("h: ") + e.what());
        }
    }
    return make(nu, b, lambda, std::move(hv), [f](double t, double y) { return f(t, y); });
}

GreenMatrix::GreenMatrix(double nu, int b, std::vector<double> entries)
    : nu_(nu), b_(b), entries_(std::move(entries)) {
    if (entries_.size() != rows() * cols()) {
        throw DomainError("GreenMatrix: entry count does not match (b+3)x(b+1)");
    }
    min_raw_ = entries_.empty() ? 0.0 : *std::min_element(entries_.begin(), entries_.end());
}

GreenMatrix tabulate_green(double nu, int b) {
    require_order(nu, b, "tabulate_green");
    using frac::falling_factorial;
    const std::size_t rows = static_cast<std::size_t>(b) + 3;
    const std::size_t cols = interior_count(b);
    const double inv_gamma = 1.0 / std::tgamma(nu);
    const double norm = falling_factorial(nu + b, nu - 1.0);

    // Kernel arguments are written as nu + integer so that the two terms cancel
    // exactly in the row t = nu+b.
    std::vector<double> g(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const long ti = static_cast<long>(i) - 2;  // t = nu + ti
        const double lead = falling_factorial(nu + static_cast<double>(ti), nu - 1.0) / norm;
        for (std::size_t s = 0; s < cols; ++s) {
            const long si = static_cast<long>(s);
            double v = lead * falling_factorial(nu + static_cast<double>(b - si - 1), nu - 1.0);
            // s < t - nu + 1  <=>  s + 1 < i
            if (s + 1 < i) {
                v -= falling_factorial(nu + static_cast<double>(ti - si - 1), nu - 1.0);
            }
            g[i * cols + s] = v * inv_gamma;
        }
    }
    return GreenMatrix(nu, b, std::move(g));
}

GridFunction solve_direct(double nu, int b, const GridFunction& rhs) {
    require_order(nu, b, "solve_direct");
    const ShiftedGrid grid = bvp_grid(nu, b);
    const std::size_t n = interior_count(b);
    const std::vector<double> r = sample_rhs(nu, b, rhs);

    // Column j is Delta^nu of the unit vector at interior grid index j+1.
    Eigen::MatrixXd A(n, n);
    GridFunction unit(grid);
    for (std::size_t j = 0; j < n; ++j) {
        unit[j + 1] = 1.0;
        for (std::size_t t = 0; t < n; ++t) {
            A(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
                frac::fractional_difference(unit, nu, static_cast<double>(t));
        }
        unit[j + 1] = 0.0;
    }
    Eigen::VectorXd rhs_vec(n);
    for (std::size_t s = 0; s < n; ++s) {
        rhs_vec(static_cast<Eigen::Index>(s)) = -r[s];
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) {
        throw SingularSystem("solve_direct: fractional difference system is singular");
    }
    const Eigen::VectorXd u = lu.solve(rhs_vec);

    GridFunction y(grid);
    for (std::size_t j = 0; j < n; ++j) {
        y[j + 1] = u(static_cast<Eigen::Index>(j));
    }
    return y;
}

double validate_green(const GreenMatrix& G, const GridFunction& rhs) {
    const double nu = G.nu();
    const int b = G.b();
    const std::vector<double> r = sample_rhs(nu, b, rhs);

    GridFunction y1(G.grid());
    for (std::size_t i = 0; i < G.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t s = 0; s < G.cols(); ++s) {
            acc += G(i, s) * r[s];
        }
        y1[i] = acc;
    }
    const GridFunction y2 = solve_direct(nu, b, rhs);
    return sup_distance(y1, y2) / (1.0 + y2.norm());
}

GreenMatrix build_green(double nu, int b) {
    GreenMatrix G = tabulate_green(nu, b);
    if (G.min_raw_ < -1e-12) {
        throw ValidationError("build_green: negative Green's function entry " +
                              std::to_string(G.min_raw_));
    }

    // Constant and alternating right-hand sides exercise every column.
    const ShiftedGrid src(nu - 1.0, interior_count(b));
    GridFunction ones(src, std::vector<double>(src.count(), 1.0));
    GridFunction ramp(src);
    for (std::size_t s = 0; s < src.count(); ++s) {
        ramp[s] = 1.0 + static_cast<double>(s % 3) + 0.5 * static_cast<double>(s);
    }
    const double d = std::max(validate_green(G, ones), validate_green(G, ramp));
    if (!(d <= kGreenValidationTol)) {
        throw ValidationError("build_green: closed form disagrees with the direct solve (discrepancy " +
                              std::to_string(d) + ")");
    }
    G.discrepancy_ = d;
    for (double& v : G.entries_) {
        v = std::max(v, 0.0);
    }
    return G;
}

QuarterInterval quarter_interval(double nu, int b) {
    const double lo_t = (nu + b) / 4.0;
    const double hi_t = 3.0 * (nu + b) / 4.0;
    const ShiftedGrid grid = bvp_grid(nu, b);
    std::size_t lo = grid.count();
    std::size_t hi = 0;
    for (std::size_t i = 0; i < grid.count(); ++i) {
        const double t = grid.point_of(i);
        if (t >= lo_t - kLatticeTol && t <= hi_t + kLatticeTol) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    }
    if (lo > hi) {
        throw DegenerateCone("quarter interval [(nu+b)/4, 3(nu+b)/4] contains no grid points");
    }
    return {lo, hi};
}

double cone_gamma(const GreenMatrix& G) {
    const QuarterInterval q = quarter_interval(G.nu(), G.b());
    double gamma = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < G.cols(); ++s) {
        const double peak = G(s + 1, s);
        if (!(peak > 1e-14)) {
            continue;
        }
        for (std::size_t i = q.lo; i <= q.hi; ++i) {
            gamma = std::min(gamma, G(i, s) / peak);
        }
    }
    if (!std::isfinite(gamma)) {
        throw DegenerateCone("cone_gamma: every diagonal entry G(s+nu-1, s) vanishes");
    }
    return gamma;
}

ConeConstants cone_constants(const Problem& P, const GreenMatrix& G, SigmaWeighting weighting) {
    if (P.nu != G.nu() || P.b != G.b()) {
        throw DomainError("cone_constants: problem and Green's function disagree on (nu, b)");
    }
    const double nu = P.nu;
    const int b = P.b;

    ConeConstants c{};
    c.quarter = quarter_interval(nu, b);
    c.gamma = cone_gamma(G);
    c.weighting = weighting;

    double diag = 0.0;
    for (std::size_t s = 0; s < G.cols(); ++s) {
        diag += G(s + 1, s) * P.h[s];
    }
    if (!(diag > 0.0)) {
        throw DegenerateCone("eta: sum of G(s+nu-1, s) h(s+nu-1) is zero");
    }
    c.eta = 1.0 / diag;

    c.midpoint = std::floor((b - nu) / 2.0) + nu;
    c.midpoint_index = static_cast<std::size_t>(std::llround(c.midpoint - (nu - 2.0)));
    c.midpoint_in_quarter = c.quarter.contains(c.midpoint_index);

    const auto raw_lo = static_cast<int>(std::floor((b + nu) / 4.0 - nu + 1.0));
    const auto raw_hi = static_cast<int>(std::floor(3.0 * (b + nu) / 4.0 - nu + 1.0));
    c.s_lo = std::clamp(raw_lo, 0, b);
    c.s_hi = std::clamp(raw_hi, 0, b);

    double weighted = 0.0;
    double unweighted = 0.0;
    for (int s = c.s_lo; s <= c.s_hi; ++s) {
        const double g = G(c.midpoint_index, static_cast<std::size_t>(s));
        weighted += g * P.h[static_cast<std::size_t>(s)];
        unweighted += g;
    }
    if (!(weighted > 0.0) || !(unweighted > 0.0) || !(c.gamma > 0.0)) {
        throw DegenerateCone("sigma: denominator vanishes");
    }
    c.sigma_weighted = 1.0 / (c.gamma * weighted);
    c.sigma_unweighted = 1.0 / (c.gamma * unweighted);
    c.sigma = weighting == SigmaWeighting::WithH ? c.sigma_weighted : c.sigma_unweighted;
    return c;
}

GridFunction apply_F(const Problem& P, const GreenMatrix& G, const GridFunction& y) {
    if (y.size() != G.rows()) {
        throw DomainError("apply_F: y must live on the full grid [nu-2, nu+b]");
    }
    std::vector<double> w(G.cols());
    for (std::size_t s = 0; s < w.size(); ++s) {
        w[s] = P.lambda * P.h[s] * P.f(P.source_point(s), y[s + 1]);
    }
    GridFunction out(G.grid());
    for (std::size_t i = 1; i + 1 < G.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t s = 0; s < w.size(); ++s) {
            acc += G(i, s) * w[s];
        }
        out[i] = acc;
    }
    return out;
}

bool in_cone(const GridFunction& y, double gamma, const QuarterInterval& quarter, double slack) {
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = quarter.lo; i <= quarter.hi; ++i) {
        lowest = std::min(lowest, y[i]);
    }
    return lowest >= gamma * y.norm() - slack;
}

}  // namespace fracbvp::bvp
