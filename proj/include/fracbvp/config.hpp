#pragma once

#include "fracbvp/errors.hpp"
#include "fracbvp/green.hpp"
#include "fracbvp/solver.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace fracbvp::cli {

/// Bad configuration. The message starts with the offending field.
class ConfigError : public Error {
public:
    using Error::Error;
};

std::vector<double> default_starts();

struct SolverConfig {
    bvp::Method method = bvp::Method::Picard;
    double tol = 1e-10;
    int max_iter = 500;
    double damping = 1.0;
    /// 0.01 * 2^k, k = 0..16.
    std::vector<double> starts = default_starts();
};

struct ProblemConfig {
    double nu = 0.0;
    int b = 0;
    double lambda = 0.0;
    std::string h;
    std::string f;
    SolverConfig solver;
    bool sigma_unweighted = false;

    /// Parses the expressions and validates the problem; errors become
    /// ConfigError naming the field.
    bvp::Problem problem() const;
    bvp::Problem problem(double lambda_override) const;
    bvp::SearchOptions search_options() const;
    bvp::SigmaWeighting weighting() const {
        return sigma_unweighted ? bvp::SigmaWeighting::Unweighted : bvp::SigmaWeighting::WithH;
    }
};

/// Accepts exactly the keys nu, b, lambda, h, f, solver, sigma_unweighted.
ProblemConfig parse_config(std::string_view json_text);
ProblemConfig load_config(const std::string& path);

}  // namespace fracbvp::cli
