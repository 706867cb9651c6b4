#pragma once

#include "fracbvp/green.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace fracbvp::bvp {

/// H1 or H2 evaluated at one radius by sampling y.
struct RadiusCheck {
    double r;
    bool holds;
    /// Holds with the sampled extreme within 1e-12 (relative) of the threshold.
    bool tight;
    /// eta r / lambda for H1, sigma r / lambda for H2.
    double threshold;
    /// H1: max f / threshold (holds iff <= 1). H2: min f / threshold (holds iff >= 1).
    double ratio;
    double witness_t;
    double witness_y;
};

/// H3 (y -> 0+) or H4 (y -> infinity) judged on log-spaced samples. These are
/// limits, so `heuristic_holds` is evidence, never proof.
struct LimitCheck {
    bool heuristic_holds;
    double threshold;
    /// (y, min_t f(t,y)/y), ordered toward the limit.
    std::vector<std::pair<double, double>> samples;
};

struct ConditionReport {
    ConeConstants constants;
    std::size_t y_samples;
    std::vector<RadiusCheck> h1;
    std::vector<RadiusCheck> h2;
    LimitCheck h3;
    LimitCheck h4;
    /// f(t, y) > 0 at every sampled point.
    bool f_positive;

    /// H1 at r1 and H2 at r2 with r1 < r2 (r1 smallest H1 radius, r2 largest H2 radius).
    bool one_solution_applicable;
    std::optional<double> r1;
    std::optional<double> r2;
    /// H1 and H3 (heuristic). m is the smallest radius at which H1 holds; the
    /// two solutions are expected on either side of it.
    bool two_solutions_h1_h3_applicable;
    std::optional<double> m_h1_h3;
    /// H2, H4 (heuristic) and f > 0. m is the smallest radius at which H2 holds.
    bool two_solutions_h2_h4_applicable;
    std::optional<double> m_h2_h4;
};

struct ConditionOptions {
    std::size_t y_samples_per_r = 64;
    /// H3/H4 need min_t f/y above margin * sigma / lambda at the extreme sample.
    double limit_margin = 1.0;
    SigmaWeighting weighting = SigmaWeighting::WithH;
};

/// f is sampled at the points s+nu-1 (s = 0..b) where it enters the equation,
/// and on y uniformly in [0, r] (H1) or [gamma r, r] (H2), endpoints included.
ConditionReport check_conditions(const Problem& P, const GreenMatrix& G,
                                 const std::vector<double>& r_grid,
                                 const ConditionOptions& options = {});

}  // namespace fracbvp::bvp
