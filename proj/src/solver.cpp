#include "fracbvp/solver.hpp"

#include "fracbvp/errors.hpp"
#include "fracbvp/fractional.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <string>
#include <utility>

namespace fracbvp::bvp {
namespace {

constexpr double kDivergenceNorm = 1e12;
constexpr double kNegativeTol = 1e-8;
constexpr int kMaxHalvings = 30;

GridFunction clamp_nonnegative(GridFunction y) {
    for (double& v : y.values()) {
        v = std::max(v, 0.0);
    }
    return y;
}

// Values in [-kNegativeTol, 0) are roundoff around a nonnegative solution.
void snap_roundoff(GridFunction& y) {
    for (double& v : y.values()) {
        if (v < 0.0 && v >= -kNegativeTol) {
            v = 0.0;
        }
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void require_shape(const GreenMatrix& G, const GridFunction& y, const char* who) {
    if (y.size() != G.rows()) {
        throw DomainError(std::string(who) + ": initial guess must live on [nu-2, nu+b]");
    }
}

// Interior values of F(clamp+(y)).
Eigen::VectorXd interior_F(const Problem& P, const GreenMatrix& G, const GridFunction& y) {
    const GridFunction Fy = apply_F(P, G, clamp_nonnegative(y));
    const auto n = static_cast<Eigen::Index>(G.cols());
    Eigen::VectorXd out(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out(j) = Fy[static_cast<std::size_t>(j) + 1];
    }
    return out;
}

// Interior residual R(u) = u - F(clamp+(y)).
Eigen::VectorXd newton_residual(const Problem& P, const GreenMatrix& G, const GridFunction& y) {
    Eigen::VectorXd r = -interior_F(P, G, y);
    for (Eigen::Index j = 0; j < r.size(); ++j) {
        r(j) += y[static_cast<std::size_t>(j) + 1];
    }
    return r;
}

Solution finish(const Problem& P, const GreenMatrix& G, GridFunction y, double tol, int iterations,
                Method method) {
    snap_roundoff(y);
    const Verification v = verify_solution(P, G, y, tol);
    return Solution{std::move(y), v.residual_norm, iterations, method, v.in_cone};
}

}  // namespace

const char* to_string(Method m) noexcept {
    return m == Method::Picard ? "picard" : "newton";
}

Verification verify_solution(const Problem& P, const GreenMatrix& G, const GridFunction& y,
                             double tol) {
    require_shape(G, y, "verify_solution");
    double residual = 0.0;
    for (int t = 0; t <= P.b; ++t) {
        const auto s = static_cast<std::size_t>(t);
        const double lhs = frac::fractional_difference(y, P.nu, static_cast<double>(t));
        const double rhs = P.lambda * P.h[s] * P.f(P.source_point(s), y[s + 1]);
        residual = std::max(residual, std::abs(lhs + rhs));
    }
    Verification v{};
    v.residual_norm = residual;
    v.bc_ok = y[0] == 0.0 && y[y.size() - 1] == 0.0;
    v.positive = y.min() >= 0.0;
    v.in_cone = in_cone(y, cone_gamma(G), quarter_interval(P.nu, P.b));
    v.residual_ok = residual <= 10.0 * tol;
    return v;
}

Solution solve_picard(const Problem& P, const GreenMatrix& G, const GridFunction& y0, double tol,
                      int max_iter, double damping) {
    require_shape(G, y0, "solve_picard");
    if (!(tol > 0.0)) {
        throw DomainError("solve_picard: tol must be positive");
    }
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw DomainError("solve_picard: damping must lie in (0, 1]");
    }

    GridFunction y = y0;
    std::deque<double> history;
    for (int k = 0; k < max_iter; ++k) {
        const GridFunction Fy = clamp_nonnegative(apply_F(P, G, clamp_nonnegative(y)));
        GridFunction next(G.grid());
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = (1.0 - damping) * y[i] + damping * Fy[i];
        }
        const double step = sup_distance(next, y);
        const double scale = 1.0 + y.norm();
        y = std::move(next);

        history.push_back(y.norm());
        if (history.size() > 5) {
            history.pop_front();
        }
        if (!(y.norm() <= kDivergenceNorm)) {
            std::string tail;
            for (double h : history) {
                tail += (tail.empty() ? "" : ", ") + fmt(h);
            }
            throw Diverged("solve_picard: ||y|| exceeded 1e12 (recent norms: " + tail + ")");
        }
        if (step <= tol * scale) {
            return finish(P, G, std::move(y), tol, k, Method::Picard);
        }
    }
    throw MaxIterations("solve_picard: no convergence within " + std::to_string(max_iter) +
                        " iterations");
}

Solution solve_newton(const Problem& P, const GreenMatrix& G, const GridFunction& y0, double tol,
                      int max_iter) {
    require_shape(G, y0, "solve_newton");
    if (!(tol > 0.0)) {
        throw DomainError("solve_newton: tol must be positive");
    }

    const auto n = static_cast<Eigen::Index>(G.cols());
    GridFunction y = y0;
    y[0] = 0.0;
    y[y.size() - 1] = 0.0;

    Eigen::VectorXd r = newton_residual(P, G, y);
    for (int k = 0; k <= max_iter; ++k) {
        if (r.lpNorm<Eigen::Infinity>() <= tol) {
            if (y.min() < -kNegativeTol) {
                throw NegativeSolution("solve_newton: converged to a root with min y = " +
                                       fmt(y.min()));
            }
            return finish(P, G, std::move(y), tol, k, Method::Newton);
        }
        if (k == max_iter) {
            break;
        }

        // J = I - dF/du; only F is differenced, so an F independent of y
        // gives J = I exactly.
        const Eigen::VectorXd F0 = interior_F(P, G, y);
        Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto i = static_cast<std::size_t>(j) + 1;
            GridFunction yp = y;
            yp[i] += 1e-6 * (1.0 + std::abs(y[i]));
            const double h = yp[i] - y[i];
            J.col(j) -= (interior_F(P, G, yp) - F0) / h;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (!lu.isInvertible()) {
            throw SingularJacobian("solve_newton: Jacobian is singular at iteration " +
                                   std::to_string(k));
        }
        const Eigen::VectorXd delta = lu.solve(-r);

        const double r0 = r.norm();
        // A full step that flips only part of the profile negative is an
        // overshoot; outside u >= 0 the clamp flattens R and such steps collapse
        // onto the trivial root. Stop short of the boundary instead. A step that
        // sends every unknown negative is left alone so negative roots surface.
        double step = 1.0;
        Eigen::Index flipped = 0;
        double limit = 1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double u = y[static_cast<std::size_t>(j) + 1];
            if (u + delta(j) < 0.0) {
                ++flipped;
                if (u > 0.0) {
                    limit = std::min(limit, 0.99 * u / -delta(j));
                }
            }
        }
        if (flipped > 0 && flipped < n) {
            step = limit;
        }
        GridFunction trial = y;
        Eigen::VectorXd r_trial;
        for (int halving = 0; halving <= kMaxHalvings; ++halving) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto i = static_cast<std::size_t>(j) + 1;
                trial[i] = y[i] + step * delta(j);
            }
            r_trial = newton_residual(P, G, trial);
            if (r_trial.norm() < r0) {
                break;
            }
            step *= 0.5;
        }
        y = std::move(trial);
        r = std::move(r_trial);
        if (!(y.norm() <= kDivergenceNorm)) {
            throw Diverged("solve_newton: ||y|| exceeded 1e12");
        }
    }
    throw MaxIterations("solve_newton: ||R|| = " + fmt(r.lpNorm<Eigen::Infinity>()) +
                        " after " + std::to_string(max_iter) + " iterations");
}

GridFunction bump_start(const GreenMatrix& G, double c) {
    const std::size_t col = static_cast<std::size_t>(G.b() / 2);
    double peak = 0.0;
    for (std::size_t i = 0; i < G.rows(); ++i) {
        peak = std::max(peak, G(i, col));
    }
    GridFunction y(G.grid());
    if (peak > 0.0) {
        for (std::size_t i = 0; i < G.rows(); ++i) {
            y[i] = c * G(i, col) / peak;
        }
    }
    return y;
}

SearchResult find_positive_solutions(const Problem& P, const GreenMatrix& G,
                                     const std::vector<double>& starts,
                                     const SearchOptions& options) {
    if (starts.empty()) {
        throw DomainError("find_positive_solutions: starts must be non-empty");
    }
    for (double c : starts) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw DomainError("find_positive_solutions: starts must be positive");
        }
    }
    std::vector<double> seeds = starts;
    seeds.push_back(0.0);
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    SearchResult result;
    std::vector<std::pair<double, Solution>> candidates;

    auto attempt = [&](double c, const char* stage, auto&& run) {
        try {
            candidates.emplace_back(c, run());
        } catch (const Error& e) {
            result.failures.push_back({c, stage, e.what()});
        }
    };

    for (double c : seeds) {
        const GridFunction y0 = bump_start(G, c);
        if (options.method == Method::Picard) {
            attempt(c, "picard", [&] {
                Solution s = solve_picard(P, G, y0, options.tol, options.max_iter, options.damping);
                try {
                    Solution polished = solve_newton(P, G, s.y, options.tol, options.max_iter);
                    return polished.iterations == 0 ? s : polished;
                } catch (const Error&) {
                    return s;
                }
            });
        }
        attempt(c, "newton", [&] { return solve_newton(P, G, y0, options.tol, options.max_iter); });
    }

    // Keep verified candidates in seed order, then merge near-duplicates.
    for (auto& [c, s] : candidates) {
        const Verification v = verify_solution(P, G, s.y, options.tol);
        if (!(v.residual_ok && v.bc_ok && v.positive && v.in_cone)) {
            result.failures.push_back({c, "verify",
                                       "residual " + fmt(v.residual_norm) +
                                           (v.positive ? "" : ", negative values") +
                                           (v.in_cone ? "" : ", outside the cone")});
            continue;
        }
        bool duplicate = false;
        for (const Solution& kept : result.solutions) {
            const double tol = std::max(1e-6, 1e-4 * std::max(kept.y.norm(), s.y.norm()));
            if (sup_distance(kept.y, s.y) <= tol) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) {
            result.solutions.push_back(std::move(s));
        }
    }
    std::stable_sort(result.solutions.begin(), result.solutions.end(),
                     [](const Solution& a, const Solution& b) { return a.y.norm() < b.y.norm(); });
    return result;
}

}  // namespace fracbvp::bvp
