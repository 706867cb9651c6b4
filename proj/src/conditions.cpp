#include "fracbvp/conditions.hpp"

#include "fracbvp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracbvp::bvp {
namespace {

constexpr double kTightRel = 1e-12;

// Uniform samples on [lo, hi] with both endpoints.
std::vector<double> uniform(double lo, double hi, std::size_t intervals) {
    std::vector<double> ys(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
        ys[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(intervals);
    }
    ys.back() = hi;
    return ys;
}

// 10^from, ..., 10^to with four samples per decade.
std::vector<double> log_spaced(int from, int to) {
    const int steps = 4 * std::abs(to - from);
    std::vector<double> ys(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) {
        const double e = from + (to - from) * static_cast<double>(k) / steps;
        ys[static_cast<std::size_t>(k)] = std::pow(10.0, e);
    }
    return ys;
}

struct Extreme {
    double value;
    double t;
    double y;
};

template <typename Better>
Extreme scan(const Problem& P, const std::vector<double>& ys, double init, Better better,
             bool& all_positive) {
    Extreme e{init, 0.0, 0.0};
    for (std::size_t s = 0; s < P.h.size(); ++s) {
        const double t = P.source_point(s);
        for (double y : ys) {
            const double v = P.f(t, y);
            all_positive = all_positive && v > 0.0;
            if (better(v, e.value)) {
                e = {v, t, y};
            }
        }
    }
    return e;
}

LimitCheck limit_check(const Problem& P, const std::vector<double>& ys, double threshold) {
    LimitCheck c{false, threshold, {}};
    for (double y : ys) {
        double lowest = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < P.h.size(); ++s) {
            lowest = std::min(lowest, P.f(P.source_point(s), y) / y);
        }
        c.samples.emplace_back(y, lowest);
    }
    bool monotone = true;
    for (std::size_t k = 1; k < c.samples.size(); ++k) {
        const double prev = c.samples[k - 1].second;
        if (c.samples[k].second < prev - kTightRel * std::abs(prev)) {
            monotone = false;
        }
    }
    c.heuristic_holds = monotone && c.samples.back().second > threshold;
    return c;
}

}  // namespace

ConditionReport check_conditions(const Problem& P, const GreenMatrix& G,
                                 const std::vector<double>& r_grid,
                                 const ConditionOptions& options) {
    if (r_grid.empty()) {
        throw DomainError("check_conditions: radius list is empty");
    }
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1]))) {
            throw DomainError("check_conditions: radii must be positive and strictly increasing");
        }
    }

    ConditionReport rep{};
    rep.constants = cone_constants(P, G, options.weighting);
    const ConeConstants& k = rep.constants;
    const std::size_t intervals = std::max<std::size_t>(64, options.y_samples_per_r);
    rep.y_samples = intervals + 1;
    rep.f_positive = true;

    for (double r : r_grid) {
        const double h1_thr = k.eta * r / P.lambda;
        const Extreme hi = scan(P, uniform(0.0, r, intervals), -std::numeric_limits<double>::infinity(),
                                [](double v, double best) { return v > best; }, rep.f_positive);
        RadiusCheck c1{r, false, false, h1_thr, hi.value / h1_thr, hi.t, hi.y};
        c1.holds = hi.value <= h1_thr * (1.0 + kTightRel);
        c1.tight = c1.holds && std::abs(c1.ratio - 1.0) <= kTightRel;
        rep.h1.push_back(c1);

        const double h2_thr = k.sigma * r / P.lambda;
        const Extreme lo = scan(P, uniform(k.gamma * r, r, intervals), std::numeric_limits<double>::infinity(),
                                [](double v, double best) { return v < best; }, rep.f_positive);
        RadiusCheck c2{r, false, false, h2_thr, lo.value / h2_thr, lo.t, lo.y};
        c2.holds = lo.value >= h2_thr * (1.0 - kTightRel);
        c2.tight = c2.holds && std::abs(c2.ratio - 1.0) <= kTightRel;
        rep.h2.push_back(c2);
    }

    const double limit_thr = options.limit_margin * k.sigma / P.lambda;
    rep.h3 = limit_check(P, log_spaced(-2, -8), limit_thr);
    rep.h4 = limit_check(P, log_spaced(2, 8), limit_thr);

    std::optional<double> first_h1;
    std::optional<double> first_h2;
    std::optional<double> last_h2;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (rep.h1[i].holds && !first_h1) {
            first_h1 = r_grid[i];
        }
        if (rep.h2[i].holds) {
            if (!first_h2) {
                first_h2 = r_grid[i];
            }
            last_h2 = r_grid[i];
        }
    }
    rep.one_solution_applicable = first_h1 && last_h2 && *first_h1 < *last_h2;
    if (rep.one_solution_applicable) {
        rep.r1 = first_h1;
        rep.r2 = last_h2;
    }
    rep.two_solutions_h1_h3_applicable = first_h1.has_value() && rep.h3.heuristic_holds;
    if (rep.two_solutions_h1_h3_applicable) {
        rep.m_h1_h3 = first_h1;
    }
    rep.two_solutions_h2_h4_applicable = first_h2.has_value() && rep.h4.heuristic_holds && rep.f_positive;
    if (rep.two_solutions_h2_h4_applicable) {
        rep.m_h2_h4 = first_h2;
    }
    return rep;
}

}  // namespace fracbvp::bvp
