// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "cli_support.hpp"
#include "oracles.hpp"

#include "fracbvp/conditions.hpp"
#include "fracbvp/config.hpp"
#include "fracbvp/errors.hpp"
#include "fracbvp/expr.hpp"
#include "fracbvp/fractional.hpp"
#include "fracbvp/green.hpp"
#include "fracbvp/solver.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fracbvp;
using namespace fracbvp::bvp;
using clitest::TempDir;
using nlohmann::json;

namespace {

const double kOrders[] = {1.1, 1.25, 1.5, 1.75, 2.0};

struct Verdict {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Problem worked_example(double lambda) {
    return Problem::from_expressions(1.25, 5, lambda, expr::parse("exp(t)"),
                                     expr::parse("(1/100)*t*(y^0.5 + y^2)"));
}

GridFunction random_on(const ShiftedGrid& grid, std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(grid.count());
    for (double& x : v) {
        x = u(rng);
    }
    return GridFunction(grid, std::move(v));
}

Verdict golden_eta() {
    TempDir dir;
    const auto cfg = dir.write("c.json", clitest::kWorkedExample);
    const auto start = Clock::now();
    const clitest::Outcome r = clitest::run({"constants", "--config", cfg, "--json"});
    const double elapsed = seconds_since(start);
    if (r.code != 0) {
        return {false, "constants exited " + std::to_string(r.code) + ": " + r.err};
    }
    const double eta = json::parse(r.out)["eta"].get<double>();
    return {eta > 0.0021 && elapsed < 1.0,
            "eta = " + fmt("%.10g", eta) + " (> 0.0021), " + fmt("%.3f", elapsed) + " s (< 1 s)"};
}

Verdict green_oracle() {
    std::mt19937 rng(11);
    const auto start = Clock::now();
    double worst = 0.0;
    for (double nu : kOrders) {
        for (int b = 1; b <= 8; ++b) {
            const GreenMatrix G = build_green(nu, b);
            const ShiftedGrid src(nu - 1.0, static_cast<std::size_t>(b) + 1);
            for (int k = 0; k < 100; ++k) {
                worst = std::max(worst, validate_green(G, random_on(src, rng, 0.0, 10.0)));
            }
        }
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1e-8 && elapsed < 10.0,
            "max discrepancy " + fmt("%.3g", worst) + " (<= 1e-8) over 4000 solves, " +
                fmt("%.3f", elapsed) + " s (< 10 s)"};
}

Verdict green_properties() {
    double min_entry = 0.0;
    double worst_cone = 0.0;
    int argmax_misses = 0;
    bool gamma_ok = true;
    for (double nu : kOrders) {
        for (int b = 1; b <= 8; ++b) {
            const GreenMatrix raw = tabulate_green(nu, b);
            min_entry = std::min(min_entry, raw.min_raw_entry());
            for (std::size_t s = 0; s < raw.cols(); ++s) {
                double peak = -1.0;
                for (std::size_t i = 0; i < raw.rows(); ++i) {
                    peak = std::max(peak, raw(i, s));
                }
                if (raw(s + 1, s) < peak - 1e-12 * (1.0 + peak)) {
                    ++argmax_misses;
                }
            }
            const GreenMatrix G = build_green(nu, b);
            const double gamma = cone_gamma(G);
            gamma_ok = gamma_ok && gamma > 0.0 && gamma < 1.0;
            const QuarterInterval q = quarter_interval(nu, b);
            for (std::size_t s = 0; s < G.cols(); ++s) {
                for (std::size_t i = q.lo; i <= q.hi; ++i) {
                    worst_cone = std::max(worst_cone, gamma * G(s + 1, s) - G(i, s));
                }
            }
        }
    }
    const bool pass = min_entry >= -1e-12 && argmax_misses == 0 && gamma_ok && worst_cone <= 1e-12;
    return {pass, "min G " + fmt("%.3g", min_entry) + ", argmax misses " + std::to_string(argmax_misses) +
                      ", gamma in (0,1): " + (gamma_ok ? "yes" : "no") + ", max cone violation " +
                      fmt("%.3g", std::max(0.0, worst_cone))};
}

Verdict integer_reduction() {
    double worst = 0.0;
    for (int b = 1; b <= 8; ++b) {
        const GreenMatrix G = build_green(2.0, b);
        for (std::size_t i = 0; i < G.rows(); ++i) {
            for (std::size_t s = 0; s < G.cols(); ++s) {
                const double ref = oracle::classical_green(static_cast<int>(i), static_cast<int>(s), b);
                worst = std::max(worst, std::abs(G(i, s) - ref));
            }
        }
    }
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> u(-1000, 1000);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(12);
        for (double& x : v) {
            x = u(rng);
        }
        const GridFunction f(ShiftedGrid(0.0, v.size()), v);
        for (int t = 0; t + 1 < 12; ++t) {
            mismatches += frac::fractional_difference(f, 1.0, t) != v[t + 1] - v[t];
        }
        for (int t = 0; t + 2 < 12; ++t) {
            mismatches += frac::fractional_difference(f, 2.0, t) != v[t + 2] - 2.0 * v[t + 1] + v[t];
        }
    }
    return {worst <= 1e-10 && mismatches == 0,
            "max |G - classical| " + fmt("%.3g", worst) + " (<= 1e-10), inexact integer differences " +
                std::to_string(mismatches)};
}

Verdict difference_calculus() {
    using frac::falling_factorial;
    double power = 0.0;
    for (double mu : {0.25, 0.5, 1.1, 1.25, 1.5, 1.75, 2.0}) {
        for (int i = 0; i <= 12; ++i) {
            const double t = mu - 2.0 + i;
            try {
                const double lhs = falling_factorial(t + 1.0, mu) - falling_factorial(t, mu);
                const double rhs = mu * falling_factorial(t, mu - 1.0);
                power = std::max(power, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
            } catch (const PoleNumerator&) {
            }
        }
    }

    std::mt19937 rng(2024);
    double composition = 0.0;
    for (double nu : kOrders) {
        const int b = 8;
        for (int trial = 0; trial < 50; ++trial) {
            const GridFunction y = random_on(ShiftedGrid(nu - 2.0, b + 3), rng, -1.0, 1.0);
            std::vector<double> z(b + 1);
            for (int t = 0; t <= b; ++t) {
                z[t] = frac::fractional_difference(y, nu, t);
            }
            const GridFunction dz(ShiftedGrid(0.0, z.size()), z);
            Eigen::MatrixXd A(b + 1, 2);
            Eigen::VectorXd d(b + 1);
            for (int k = 0; k <= b; ++k) {
                const double t = nu + k;
                d(k) = frac::fractional_sum(dz, nu, t) - y[k + 2];
                A(k, 0) = falling_factorial(t, nu - 1.0);
                A(k, 1) = falling_factorial(t, nu - 2.0);
            }
            const Eigen::Vector2d c = A.colPivHouseholderQr().solve(d);
            composition = std::max(composition, (A * c - d).lpNorm<Eigen::Infinity>() / y.norm());
        }
    }
    return {power <= 1e-9 && composition <= 1e-8,
            "power rule " + fmt("%.3g", power) + " (<= 1e-9), composition " + fmt("%.3g", composition) +
                " ||y|| (<= 1e-8 ||y||)"};
}

Verdict cone_invariance() {
    std::vector<Problem> problems = {
        worked_example(1.0),
        worked_example(0.02),
        Problem::from_expressions(1.5, 4, 1.0, expr::parse("1"), expr::parse("y")),
        Problem::from_expressions(1.1, 8, 2.0, expr::parse("1 + t"), expr::parse("sqrt(y) + 1")),
        Problem::from_expressions(2.0, 7, 0.5, expr::parse("1"), expr::parse("y^2 + t")),
        Problem::from_expressions(1.75, 3, 1.0, expr::parse("exp(-t)"), expr::parse("min(y, 5)")),
    };
    std::mt19937 rng(99);
    int violations = 0;
    for (const Problem& P : problems) {
        const GreenMatrix G = build_green(P.nu, P.b);
        const double gamma = cone_gamma(G);
        const QuarterInterval q = quarter_interval(P.nu, P.b);
        for (int k = 0; k < 100; ++k) {
            GridFunction y = random_on(G.grid(), rng, 0.0, 10.0);
            violations += !in_cone(apply_F(P, G, y), gamma, q, 1e-10);
        }
    }
    return {violations == 0, std::to_string(violations) + " violations in " +
                                 std::to_string(100 * problems.size()) + " inputs over " +
                                 std::to_string(problems.size()) + " problems"};
}

// Residual of a solution read back from CSV, via Delta^nu substitution.
double csv_residual(const Problem& P, const std::vector<double>& y) {
    const GridFunction g(P.grid(), y);
    double r = 0.0;
    for (int t = 0; t <= P.b; ++t) {
        const double rhs = P.lambda * P.h[t] * P.f(P.source_point(t), y[t + 1]);
        r = std::max(r, std::abs(frac::fractional_difference(g, P.nu, t) + rhs));
    }
    return r;
}

Verdict solver_end_to_end() {
    struct Case {
        std::string json;
        double tol;
    };
    const std::vector<Case> cases = {
        {clitest::worked_example(0.02), 1e-10},
        {clitest::worked_example(0.01), 1e-9},
        {R"js({"nu": 1.5, "b": 4, "lambda": 1, "h": "1", "f": "0"})js", 1e-10},
        {R"js({"nu": 2, "b": 3, "lambda": 1, "h": "1", "f": "1"})js", 1e-10},
        {R"js({"nu": 1.75, "b": 6, "lambda": 0.3, "h": "1 + t", "f": "1 + y/(1 + y)"})js", 1e-11},
        {R"js({"nu": 1.1, "b": 8, "lambda": 0.05, "h": "1", "f": "exp(-y) + y^2/10"})js", 1e-10},
    };
    TempDir dir;
    std::size_t files = 0;
    double worst_ratio = 0.0;
    bool ok = true;
    std::string why;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        json j = json::parse(cases[c].json);
        j["solver"] = {{"tol", cases[c].tol}};
        const auto cfg = dir.write("c" + std::to_string(c) + ".json", j.dump());
        const auto out = dir.file("s" + std::to_string(c) + ".csv");
        const clitest::Outcome r = clitest::run({"solve", "--config", cfg, "--out", out});
        if (r.code != 0) {
            ok = false;
            why += " case " + std::to_string(c) + " exited " + std::to_string(r.code) + ";";
            continue;
        }
        const Problem P = cli::parse_config(j.dump()).problem();
        for (std::size_t k = 1; clitest::fs::exists(dir.file("s" + std::to_string(c) + "_" + std::to_string(k) + ".csv")); ++k) {
            ++files;
            const auto rows = clitest::csv_rows(clitest::read(dir.file("s" + std::to_string(c) + "_" + std::to_string(k) + ".csv")));
            std::vector<double> y;
            for (const auto& row : rows) {
                y.push_back(std::stod(row[1]));
            }
            const bool boundary = rows.front()[1] == "0" && rows.back()[1] == "0";
            bool nonneg = true;
            for (double v : y) {
                nonneg = nonneg && v >= 0.0;
            }
            const double ratio = csv_residual(P, y) / cases[c].tol;
            worst_ratio = std::max(worst_ratio, ratio);
            if (!(boundary && nonneg && ratio <= 10.0)) {
                ok = false;
                why += " case " + std::to_string(c) + " solution " + std::to_string(k) + " rejected;";
            }
        }
    }

    // Linear problems: one Picard iteration, agreement with the dense solve.
    double linear_gap = 0.0;
    int linear_bad_iterations = 0;
    for (double nu : kOrders) {
        const Problem P = Problem::from_expressions(nu, 6, 0.7, expr::parse("1 + t/2"), expr::parse("2 + t"));
        const GreenMatrix G = build_green(P.nu, P.b);
        const Solution s = solve_picard(P, G, bump_start(G, 3.0), 1e-12, 10);
        linear_bad_iterations += s.iterations != 1;
        std::vector<double> rhs(P.h.size());
        for (std::size_t k = 0; k < rhs.size(); ++k) {
            rhs[k] = P.lambda * P.h[k] * P.f(P.source_point(k), 0.0);
        }
        const GridFunction direct = solve_direct(P.nu, P.b, GridFunction(ShiftedGrid(nu - 1.0, rhs.size()), rhs));
        linear_gap = std::max(linear_gap, sup_distance(s.y, direct));
    }
    TempDir lin;
    const auto lcfg = lin.write("l.json", R"js({"nu": 1.5, "b": 5, "lambda": 1, "h": "1", "f": "1 + t"})js");
    const clitest::Outcome lr = clitest::run({"solve", "--config", lcfg});
    const bool cli_one_step = lr.out.find("method = picard, iterations = 1") != std::string::npos &&
                              lr.out.find("solution 2") == std::string::npos;

    const bool pass = ok && files > 0 && linear_bad_iterations == 0 && linear_gap <= 1e-10 && cli_one_step;
    return {pass, std::to_string(files) + " solution files, worst residual " + fmt("%.3g", worst_ratio) +
                      " x tol (<= 10), linear: non-unit iterations " + std::to_string(linear_bad_iterations) +
                      ", max gap to dense solve " + fmt("%.3g", linear_gap) + " (<= 1e-10), CLI one step: " +
                      (cli_one_step ? "yes" : "no") + why};
}

Verdict multiple_solutions() {
    const auto start = Clock::now();
    TempDir dir;
    for (double lambda : {0.02, 0.015, 0.03, 0.01}) {
        const auto cfg = dir.write("c.json", clitest::worked_example(lambda));
        const clitest::Outcome chk = clitest::run({"check", "--config", cfg, "--radii", "0.1,0.5,1,2", "--json"});
        if (chk.code != 0) {
            continue;
        }
        const json rep = json::parse(chk.out);
        if (rep["two_solutions_h1_h3"]["applicable"] != true) {
            continue;
        }
        const double m = rep["two_solutions_h1_h3"]["m"].get<double>();
        const cli::ProblemConfig pc = cli::parse_config(clitest::worked_example(lambda));
        const Problem P = pc.problem();
        const SearchResult r = find_positive_solutions(P, build_green(P.nu, P.b), pc.solver.starts, pc.search_options());
        std::vector<const Solution*> positive;
        for (const Solution& s : r.solutions) {
            if (s.y.norm() > 0.0) {
                positive.push_back(&s);
            }
        }
        const double elapsed = seconds_since(start);
        if (positive.size() < 2) {
            return {false, "lambda " + fmt("%g", lambda) + ": only " + std::to_string(positive.size()) +
                               " positive solutions"};
        }
        const double n1 = positive[0]->y.norm();
        const double n2 = positive[1]->y.norm();
        const double dedup = std::max(1e-6, 1e-4 * n2);
        const double gap = sup_distance(positive[0]->y, positive[1]->y);
        const bool pass = n1 < n2 && gap > dedup && n1 < m && m < n2 && elapsed < 30.0;
        return {pass, "lambda " + fmt("%g", lambda) + ": " + std::to_string(positive.size()) +
                          " positive solutions, norms " + fmt("%.6g", n1) + " < m = " + fmt("%g", m) + " < " +
                          fmt("%.6g", n2) + ", separation " + fmt("%.3g", gap) + " > " + fmt("%.3g", dedup) +
                          ", " + fmt("%.3f", elapsed) + " s (< 30 s)"};
    }
    return {false, "no tested lambda where check reports H1 and H3"};
}

Verdict determinism() {
    TempDir dir;
    const auto cfg = dir.write("c.json", clitest::worked_example(0.02));
    const std::string tool = FRACBVP_TOOL;
    const std::vector<std::string> commands = {
        "green --config " + cfg,
        "constants --config " + cfg,
        "constants --config " + cfg + " --json",
        "check --config " + cfg + " --radii 0.1,0.5,1",
        "check --config " + cfg + " --radii 0.1,0.5,1 --json",
        "solve --config " + cfg + " --out " + dir.file("sol.csv"),
        "sweep --config " + cfg + " --lambda-from 0.005 --lambda-to 0.05 --steps 5",
    };
    int differing = 0;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::string outputs[2];
        for (int rep = 0; rep < 2; ++rep) {
            const auto out = dir.file("out" + std::to_string(rep) + ".txt");
            const int status = std::system((tool + " " + commands[c] + " > " + out + " 2>&1").c_str());
            outputs[rep] = std::to_string(status) + "\n" + clitest::read(out);
            for (int k = 1; k <= 4; ++k) {
                outputs[rep] += clitest::read(dir.file("sol_" + std::to_string(k) + ".csv"));
            }
        }
        differing += outputs[0] != outputs[1] || outputs[0].empty();
    }
    return {differing == 0, std::to_string(commands.size()) + " commands run twice as subprocesses, " +
                                std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"golden eta for the worked example", golden_eta},
        {"Green's function against the direct solve", green_oracle},
        {"Green's function sign, peak and cone properties", green_properties},
        {"integer-order reduction", integer_reduction},
        {"power rule and composition numerics", difference_calculus},
        {"cone invariance of F", cone_invariance},
        {"solver end-to-end through solve", solver_end_to_end},
        {"two positive solutions where H1 and H3 hold", multiple_solutions},
        {"byte-identical repeated output", determinism},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << " (" << criteria[k].first
                  << "): " << v.detail << "\n";
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
